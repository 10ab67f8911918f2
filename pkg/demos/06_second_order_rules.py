"""Second-order rules: function variables in patterns.

In a pattern, the operation slot may hold a function variable applied to
one already-bound variable: `$f { #0 = $v }`.  It matches any subtree,
binding f to that subtree with every occurrence of v's value cut out as a
hole.  That is exactly what the product rule for derivatives needs:

    d(f(x)*g(x), x)  ->  f(x)*d(g(x),x) + g(x)*d(f(x),x)

The stdlib's `deriv` template carries that rule plus linearity and the two
base cases, and rewrites any polynomial expression over the atom x.
"""

from evocat import EvalContext, call, instantiate, load_stdlib, parse, render
from evocat.engine import match, substitute
from evocat.tree import Node, node_equal


def from_text(src):
    return parse(src).resolve("t")


def x():
    return Node.set_node(op="x")


def mul(a, b):
    return Node.set_node([(None, a), (None, b)], op="prod")


def add(a, b):
    return Node.set_node([(None, a), (None, b)], op="sum")


# Matching binds the factors as one-hole abstractions.
rule = from_text("t : d { #0 : prod { #0 : $f { #0 = $v } #1 : $g { #0 = $v } } #1 = $v }")
subject = Node.set_node([(None, mul(x(), Node.set_node([(None, x())], op="sin"))), (None, x())], op="d")
binding = match(rule, subject)
print("matching d(x * sin(x), x) against the product rule:")
print("  f body:", render(binding.funcs["f"].body).strip(), "(the identity abstraction)")
print("  g body:", render(binding.funcs["g"].body).replace("\n", " "))
print("  substituting back reproduces the subject:", node_equal(substitute(rule, binding), subject))

# The full rule set differentiates polynomials.
lib = load_stdlib()
expr = add(mul(mul(x(), x()), x()), mul(Node.leaf(3), x()))  # x^3 + 3x
instance = instantiate(lib, "deriv")
instance.child("args").set_child("e", expr)
out = call(instance, EvalContext(lib))
print("\nd(x*x*x + 3*x)/dx, as rewritten (3x^2 + 3 once collected):")
print(render(out))
