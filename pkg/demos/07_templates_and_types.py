"""Functions and types are templates, used by copying.

A template is a subtree { args mode body|rules result }.  Calling means:
copy it, fill the argument slots, run the body with the copy as the frame;
the result value then replaces the instance node.  Recursion needs no
special machinery: the body copies its own template (`fact` below).  A
type template is the same shape for data: copy `Date`, fill the fields,
and read `weekday`; member functions see the enclosing instance's fields.
"""

from evocat import EvalContext, load_stdlib, merge_program, parse, render, run_entry
from evocat.tree import Node

leaf = Node.leaf

lib = load_stdlib()
print("templates shipped in the stdlib:", [l for l, _ in lib.root.children])

# gcd is a rewrite-mode function; fact recurses by copying itself.
print("gcd(252, 105) =", run_entry(load_stdlib(), "gcd", {"arg1": leaf(252), "arg2": leaf(105)}).value)
print("fact(12)      =", run_entry(load_stdlib(), "fact", {"n": leaf(12)}).value)

# A term whose operation names a template is a call: operands fill slots.
from evocat import evaluate

lib = load_stdlib()
term = parse("t : gcd { a = 12 b = 8 }").resolve("t")
print("term-level call, gcd(12,8) =", evaluate(term, EvalContext(lib)).value)

# The Date type: copy, fill fields, access the member.
machine = load_stdlib()
merge_program(
    machine,
    parse(
        """
        main {
          args { day = $day month = $month year = $year }
          mode = 0
          body {
            #0 { at = [x] to = [Date] }
            #1 { at = [x.day] to = [args.day] }
            #2 { at = [x.month] to = [args.month] }
            #3 { at = [x.year] to = [args.year] }
            #4 { at = [result] to = [x.weekday] }
          }
          result = 0
        }
        """
    ),
)
names = ["Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday", "Sunday"]
day = run_entry(machine, "main", {"day": leaf(5), "month": leaf(2), "year": leaf(2004)})
print("2004-02-05 is a", names[day.value])

# Copies are isolated: the template still holds its placeholders.
print("the Date template is untouched:")
print(render(load_stdlib().resolve("Date.day")).strip(), "<- still a placeholder")
