"""The operation set on values: products, coproducts, lattices, select.

On leaves, product and coproduct are multiplication and addition.  On
sets, the product holds all pairs and the coproduct the disjoint union
with duplicates kept.  Naturals form a lattice under min/max with
truncated subtraction; booleans are the leaves 0 and 1.  `select` filters
a set by a predicate, the query operation.
"""

from evocat import EvalContext, evaluate, parse, render
from evocat.algebra import bool_lattice, coproduct, nat_lattice, pair, product
from evocat.tree import Node

leaf = Node.leaf

print("product(leaf 3, leaf 4) =", product(leaf(3), leaf(4)).value)
print("coproduct(leaf 2, leaf 7) =", coproduct(leaf(2), leaf(7)).value)

a = parse("x = 1 y = 2").root
b = parse("u = 5").root
print("\nproduct of {1 2} and {5}:")
print(render(product(a, b)))
print("coproduct keeps duplicates:")
print(render(coproduct(parse("a = 1").root, parse("a = 1").root)))

print("pair(1, 2):")
print(render(pair(leaf(1), leaf(2))))

print("min(3,5) =", nat_lattice("min", leaf(3), leaf(5)).value)
print("monus(3,5) =", nat_lattice("monus", leaf(3), leaf(5)).value, "(subtraction truncates)")
print("implies(1,0) =", bool_lattice("implies", leaf(1), leaf(0)).value)

# A query: SELECT * FROM persons WHERE name = "John".  The predicate sees
# each candidate as its innermost scope, so [name] reads the record field.
machine = parse(
    """
    persons {
      r0 { name = "John" age = 33 }
      r1 { name = "Ann"  age = 41 }
      r2 { name = "John" age = 27 }
    }
    """
)
query = parse(
    't : select { from = [persons] where : seteq { a = [name] b = "John" } }'
).resolve("t")
print("\npersons named John:")
print(render(evaluate(query, EvalContext(machine))))

# Predicates can also bind the whole candidate to a variable.
young = parse("t : select { from = [persons2] where : lt { a = $x b = 3 } }").resolve("t")
machine2 = parse("persons2 { a = 1 b = 2 c = 3 d = 4 }")
print("values below 3:")
print(render(evaluate(young, EvalContext(machine2))))
