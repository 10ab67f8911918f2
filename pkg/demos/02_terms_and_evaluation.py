"""Terms evaluate when their contents are accessed.

A set node with an operation identifier is a term whose children are the
operands; `[path]` is a reference term, the tree's spreadsheet formula.
Reading a term through data access replaces it with its value, so the
second read is free.  `if` evaluates its condition first and never touches
the untaken branch.
"""

from evocat import EvalContext, evaluate, parse, render

# Nested arithmetic: (2 + 3) * 4.
expr = parse("t : prod { a : sum { x = 2 y = 3 } b = 4 }").resolve("t")
print("(2 + 3) * 4 =", evaluate(expr, EvalContext(parse(""))).value)

# The condition guards the branches: the division by zero never fires.
guarded = parse(
    "t : if { c : lt { a = 1 b = 2 } then = 10 else : rem { n = 1 d = 0 } }"
).resolve("t")
print("if(1 < 2, 10, 1 % 0) =", evaluate(guarded, EvalContext(parse(""))).value)

# References read other cells; access memoizes the referenced term too.
sheet = parse(
    """
    s : sum { x = 2 y = 3 }
    t = [s]
    u : prod { a = [s] b = [t] }
    """
)
print("\nBefore any access:")
print(render(sheet))
ctx = EvalContext(sheet)
print("u =", sheet.data_of("u", ctx).value)
print("\nAfter the access every formula cell holds its value:")
print(render(sheet))

# A reference cycle is an error, not a hang.
cyclic = parse("a = [b]\nb = [a]")
try:
    cyclic.data_of("a")
except Exception as err:
    print("cycle detected:", type(err).__name__)
