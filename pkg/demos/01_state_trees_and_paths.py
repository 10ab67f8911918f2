"""State trees and path addressing.

The machine's whole state is one labeled tree.  Paths compose like file
system paths: the empty path is the identity, a label picks a child by
name, `#k` picks one by position.  The single mutation is subtree
replacement, and a view re-roots addressing at any inner node while
sharing structure with the enclosing tree.
"""

from evocat import Node, Path, compose, meet, parse, render

machine = parse(
    """
    etc {
      hosts = 1
      passwd = 2
    }
    bin {
      sh = 3
    }
    """
)

print("The state as text:")
print(render(machine))

# Label steps compose by concatenation; '.' is the identity arrow.
p = Path.parse("etc")
q = Path.parse("hosts")
print("etc . hosts resolves to:", machine.resolve(compose(p, q)).value)
print("identity resolves to the context itself:", machine.resolve(".") is machine.root)

# Ordinal segments address by position, left to right.
print("#0.#1 is etc.passwd:", machine.resolve("#0.#1").value)

# The meet of two addresses is their longest common prefix.
print("meet(etc.hosts, etc.passwd) =", str(meet(Path.parse("etc.hosts"), Path.parse("etc.passwd"))))
print("meet(etc.hosts, bin.sh)     =", repr(str(meet(Path.parse("etc.hosts"), Path.parse("bin.sh")))))

# A transition: replace one subtree, leave the rest untouched.
machine.replace("etc.hosts", Node.leaf(99))
machine.replace("usr", parse("local { lib = 4 }").root)  # insert appends
print("\nAfter replacing etc.hosts and inserting usr:")
print(render(machine))

# A view is a machine rooted at a subtree; writes through it are shared.
view = machine.view("usr.local")
view.replace("lib", Node.leaf(5))
print("usr.local.lib seen from the outer tree:", machine.resolve("usr.local.lib").value)
