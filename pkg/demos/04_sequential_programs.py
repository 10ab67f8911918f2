"""Sequential programs: instruction lists with an instruction pointer.

An instruction is a pair { at = [path] to = <term> }: evaluate the term
in the frame, replace the subtree at the address.  The reserved frame
child `ip` is the instruction pointer; writing to it is a jump, which is
how loops work.  Addresses naming a device mount become input/output.
"""

from evocat import (
    CollectingOutput,
    DeviceTable,
    EvalContext,
    StateTree,
    parse,
    render,
    run_sequential,
    scripted_clock,
)

# Straight-line code: two assignments.
body = parse(
    """
    b {
      #0 { at = [x] to = 5 }
      #1 { at = [y] to = [x] }
    }
    """
).resolve("b")
frame = StateTree()
run_sequential(body, frame)
print("after [x = 5; y = [x]]:")
print(render(frame))

# A loop: increment x until it reaches 3, by jumping back to step 1.
loop = parse(
    """
    b {
      #0 { at = [x] to = 0 }
      #1 { at = [x] to : sum { a = [x] b = 1 } }
      #2 { at = [ip] to : if { c : lt { a = [x] b = 3 } then = 1 else = 3 } }
    }
    """
).resolve("b")
frame = StateTree()
run_sequential(loop, frame)
print("after the counting loop:")
print(render(frame))

# Devices: dev.stdin / dev.stdout / dev.clock are reserved addresses.
out = CollectingOutput()
devices = DeviceTable.standard(clock=scripted_clock(1000, 7), stdin=["hello"], stdout=out)
echo = parse(
    """
    b {
      #0 { at = [t0] to = [dev.clock] }
      #1 { at = [dev.stdout] to = [dev.stdin] }
      #2 { at = [dev.stdout] to : monus { a = [dev.clock] b = [t0] } }
    }
    """
).resolve("b")
machine = StateTree()
run_sequential(echo, machine, EvalContext(machine, devices=devices))
print("device output:", out.lines)
