"""An appliance: a stateful module with its own data and mutators.

The heap keeps its items as the unlabeled children of `data` in implicit
binary-heap order.  `put` inserts, `get` removes the top; the instance's
`compare` function decides what "top" means, so flipping it turns the
min-heap into a max-heap.
"""

import random

from evocat import EvalContext, heap_get, heap_put, instantiate, load_stdlib, parse, render
from evocat.tree import Node

leaf = Node.leaf

lib = load_stdlib()
heap = instantiate(lib, "heap")
ctx = EvalContext(lib)

for v in (5, 3, 8):
    heap_put(heap, leaf(v), ctx)
print("after put 5, 3, 8 the array layout is:")
print(render(heap.child("data")))
print("drain:", [heap_get(heap, ctx).value for _ in range(3)])

# Priority queue behavior on random traffic.
rng = random.Random(1)
heap = instantiate(lib, "heap")
for _ in range(12):
    heap_put(heap, leaf(rng.randrange(100)), ctx)
print("sorted drain of 12 random items:", [heap_get(heap, ctx).value for _ in range(12)])

# Customizing compare: greater-than makes it a max-heap.
maxheap = instantiate(lib, "heap")
maxheap.set_child(
    "compare",
    parse(
        """
        compare {
          args { arg1 = $arg1 arg2 = $arg2 }
          mode = 0
          body {
            #0 { at = [result] to : lt { a = [args.arg2] b = [args.arg1] } }
          }
          result = 0
        }
        """
    ).resolve("compare"),
)
for v in (5, 3, 8):
    heap_put(maxheap, leaf(v), ctx)
print("max-heap drain:", [heap_get(maxheap, ctx).value for _ in range(3)])
