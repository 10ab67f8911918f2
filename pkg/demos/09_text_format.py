"""The state language: every machine state has one canonical text form.

parse and render are exact inverses on machine states, and equal trees
render to identical bytes, so text comparison is state comparison.
Strings are sugar for sets of code points; `#k` labels children by
position; `$` forms appear only in program files.
"""

from evocat import parse, render
from evocat.errors import DuplicateSibling, ParseError, VariablesOutsideRules
from evocat.tree import node_equal

source = """
// a machine state
counter = 41
greeting = "hi there"
pending : sum { a = [counter] b = 1 }
stack {
  #0 = 10
  #1 = 20
}
"""

tree = parse(source)
canonical = render(tree)
print("canonical form:")
print(canonical)

print("round trip is exact:", node_equal(parse(canonical).root, tree.root))
print("rendering is a fixpoint:", render(parse(canonical)) == canonical)

# Strings really are sets of naturals.
greeting = tree.resolve("greeting")
print("greeting code points:", [c.value for _, c in greeting.children][:5], "...")

# Errors carry positions and kinds.
for bad, expected in [
    ("a = 1\nb = @", ParseError),
    ("a = 1 a = 2", DuplicateSibling),
]:
    try:
        parse(bad)
    except expected as err:
        print(f"{expected.__name__}: {err}")

try:
    parse("x = $v", allow_vars=False)
except VariablesOutsideRules as err:
    print("VariablesOutsideRules:", err)
