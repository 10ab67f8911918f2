"""The two program disciplines and the pattern layer under them."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from evocat import EvalContext, StateTree, TraceSink, parse, render
from evocat.engine import (
    formulas_from,
    instructions_from,
    match,
    run_rewrite,
    run_sequential,
    substitute,
)
from evocat.errors import DivisionByZero, EvalError, FuelExhausted
from evocat.tree import Node, node_equal

from helpers import LABELS, euclid, leaf, setn


def pat(src: str) -> Node:
    return parse(src).resolve("p")


def gcd_term(a: int, b: int) -> Node:
    return setn(leaf(a), leaf(b), op="gcd")


GCD_RULES = """
rules {
  #0 { lhs : gcd { #0 = $X #1 = 0 } rhs = $X }
  #1 { lhs : gcd { #0 = $X #1 = $Y }
       rhs : gcd { #0 = $Y #1 : rem { #0 = $X #1 = $Y } } }
}
"""


class TestMatch:
    def test_binds_variable(self):
        binding = match(pat("p : gcd { #0 = $X #1 = 0 }"), gcd_term(7, 0))
        assert binding is not None
        assert binding.vars["X"].value == 7

    def test_literal_mismatch_fails(self):
        assert match(pat("p : gcd { #0 = $X #1 = 0 }"), gcd_term(7, 3)) is None

    def test_labels_and_arity_must_agree(self):
        assert match(pat("p { a = $X }"), parse("b = 1").root) is None
        assert match(pat("p { a = $X }"), parse("a = 1 b = 2").root) is None
        assert match(pat("p { a = $X }"), parse("a = 1").root) is not None

    def test_nonlinear_occurrences(self):
        twice = pat("p : f { #0 = $X #1 = $X }")
        assert match(twice, setn(leaf(4), leaf(4), op="f")) is not None
        assert match(twice, setn(leaf(4), leaf(5), op="f")) is None
        deep = setn(setn(leaf(1), op="g"), setn(leaf(1), op="g"), op="f")
        assert match(twice, deep) is not None

    def test_second_order_product_rule(self):
        # d(f(x)*g(x), x) against d(x * sin(x), x)
        rule = pat(
            "p : d { #0 : prod { #0 : $f { #0 = $x } #1 : $g { #0 = $x } } #1 = $x }"
        )
        x = setn(op="x")
        subject = setn(
            setn(x.copy(), setn(x.copy(), op="sin"), op="prod"), x.copy(), op="d"
        )
        binding = match(rule, subject)
        assert binding is not None
        # f is the identity abstraction, g is sin of the hole
        assert binding.funcs["f"].body.kind == "hole"
        g = binding.funcs["g"].body
        assert g.op == "sin" and g.children[0][1].kind == "hole"
        # substituting the bindings back reproduces the subject
        assert node_equal(substitute(rule, binding), subject)

    def test_vacuous_abstraction(self):
        rule = pat("p : d { #0 : $f { #0 = $x } #1 = $x }")
        subject = setn(leaf(5), setn(op="x"), op="d")
        binding = match(rule, subject)
        assert binding.funcs["f"].body.kind == "leaf"
        assert node_equal(substitute(rule, binding), subject)


class TestSubstitute:
    def test_worked_example(self):
        template = pat("p : gcd { #0 = $Y #1 : rem { #0 = $X #1 = $Y } }")
        binding = match(pat("p : gcd { #0 = $X #1 = $Y }"), gcd_term(12, 8))
        out = substitute(template, binding)
        want = setn(leaf(8), setn(leaf(12), leaf(8), op="rem"), op="gcd")
        assert node_equal(out, want)

    def test_identity_template(self):
        binding = match(pat("p = $X"), parse("a = 1 b = 2").root)
        assert node_equal(substitute(pat("p = $X"), binding), parse("a = 1 b = 2").root)

    def test_substituted_trees_are_copies(self):
        binding = match(pat("p = $X"), parse("a = 1").root)
        out = substitute(pat("p = $X"), binding)
        out.child("a").value = 9
        assert binding.vars["X"].child("a").value == 1

    @given(seed=st.integers(0, 2**32 - 1))
    @settings(max_examples=150, deadline=None)
    def test_match_substitute_round_trip_on_linear_patterns(self, seed):
        rng = random.Random(seed)
        names = iter(f"V{i}" for i in range(100))

        def gen_pattern(depth):
            roll = rng.random()
            if depth == 0 or roll < 0.35:
                return Node.var_node(next(names))
            if roll < 0.5:
                return Node.leaf(rng.randrange(10))
            node = Node.set_node(op=rng.choice([None, "f", "g"]))
            for label in rng.sample(LABELS, rng.randrange(4)):
                node.children.append(
                    (label if rng.random() < 0.5 else None, gen_pattern(depth - 1))
                )
            return node

        def gen_fill(pattern):
            binding = {}

            def walk(n):
                if n.kind == "var":
                    binding[n.var] = setn(leaf(rng.randrange(5)), op=None)
                for _, c in n.children:
                    walk(c)

            walk(pattern)
            return binding

        pattern = gen_pattern(3)
        from evocat.engine import Binding

        fill = Binding(vars=gen_fill(pattern))
        subject = substitute(pattern, fill)
        result = match(pattern, subject)
        assert result is not None
        for name, value in fill.vars.items():
            assert node_equal(result.vars[name], value)


class TestValidation:
    def test_rhs_variable_must_occur_in_lhs(self):
        rules = parse("r { #0 { lhs = $X rhs = $Y } }").resolve("r")
        with pytest.raises(EvalError):
            formulas_from(rules)

    def test_function_variable_needs_first_order_binding(self):
        rules = parse(
            "r { #0 { lhs : d { #0 : $f { #0 = $x } } rhs = 0 } }"
        ).resolve("r")
        with pytest.raises(EvalError):
            formulas_from(rules)

    def test_malformed_instruction(self):
        body = parse("b { #0 { at = [x] } }").resolve("b")
        with pytest.raises(EvalError):
            instructions_from(body)
        body2 = parse("b { #0 { at = 5 to = 1 } }").resolve("b")
        with pytest.raises(EvalError):
            instructions_from(body2)


class TestSequential:
    def test_two_assignments(self):
        body = parse("b { #0 { at = [x] to = 5 } #1 { at = [y] to = [x] } }").resolve("b")
        frame = StateTree()
        run_sequential(body, frame)
        assert render(frame) == "ip = 2\nx = 5\ny = 5\n"

    def test_jump_loop(self):
        body = parse(
            """b {
              #0 { at = [x] to = 0 }
              #1 { at = [x] to : sum { #0 = [x] #1 = 1 } }
              #2 { at = [ip] to : if { #0 : lt { #0 = [x] #1 = 3 } #1 = 1 #2 = 3 } }
            }"""
        ).resolve("b")
        frame = StateTree()
        run_sequential(body, frame)
        assert frame.resolve("x").value == 3
        assert frame.resolve("ip").value == 3

    def test_error_carries_instruction_index(self):
        body = parse(
            "b { #0 { at = [x] to = 1 } #1 { at = [y] to : rem { #0 = 1 #1 = 0 } } }"
        ).resolve("b")
        with pytest.raises(DivisionByZero) as info:
            run_sequential(body, StateTree())
        assert info.value.instruction == 1

    def test_determinism(self):
        body = parse(
            """b {
              #0 { at = [x] to = 3 }
              #1 { at = [y] to : prod { #0 = [x] #1 = [x] } }
              #2 { at = [x] to : sum { #0 = [x] #1 = [y] } }
            }"""
        ).resolve("b")
        frames = []
        for _ in range(3):
            frame = StateTree()
            run_sequential(body, frame)
            frames.append(render(frame))
        assert len(set(frames)) == 1

    def test_trace_lists_steps(self):
        body = parse("b { #0 { at = [x] to = 1 } #1 { at = [y] to = 2 } }").resolve("b")
        sink = TraceSink()
        run_sequential(body, StateTree(), EvalContext(StateTree(), trace=sink))
        assert [(e[1], e[2], e[3]) for e in sink.events] == [("seq", 0, "x"), ("seq", 1, "y")]


class TestRewrite:
    def goal_frame(self, a, b):
        frame = parse(GCD_RULES)
        frame.root.add_child("goal", gcd_term(a, b))
        return frame

    def test_gcd_trace(self):
        frame = self.goal_frame(12, 8)
        sink = TraceSink()
        ctx = EvalContext(frame, trace=sink)
        run_rewrite(frame.resolve("rules"), frame, ctx)
        assert frame.resolve("goal").value == 4
        firings = [e for e in sink.events if e[1] == "rew"]
        assert [e[2] for e in firings] == [2, 2, 1]
        assert all(e[3] == "goal" for e in firings)

    def test_gcd_base_case(self):
        frame = self.goal_frame(7, 0)
        ctx = EvalContext(frame)
        run_rewrite(frame.resolve("rules"), frame, ctx)
        assert frame.resolve("goal").value == 7
        assert ctx.stats["firing"] == 1

    def test_gcd_against_euclid_oracle(self, rng):
        for _ in range(60):
            a = rng.randrange(10**6)
            b = rng.randrange(a + 1)
            want, steps = euclid(a, b)
            frame = self.goal_frame(a, b)
            ctx = EvalContext(frame)
            run_rewrite(frame.resolve("rules"), frame, ctx)
            assert frame.resolve("goal").value == want
            assert ctx.stats["firing"] == steps + 1

    def test_frame_isolation(self):
        frame = self.goal_frame(12, 8)
        frame.root.add_child("bystander", parse("u = 1 v { w = 2 }").root)
        rules_before = render(frame.resolve("rules"))
        bystander_before = render(frame.resolve("bystander"))
        run_rewrite(frame.resolve("rules"), frame)
        assert render(frame.resolve("rules")) == rules_before
        assert render(frame.resolve("bystander")) == bystander_before

    def test_determinism(self):
        outputs = set()
        for _ in range(3):
            frame = self.goal_frame(252, 105)
            run_rewrite(frame.resolve("rules"), frame)
            outputs.add(render(frame))
        assert len(outputs) == 1

    def test_first_matching_formula_wins(self):
        frame = parse(
            """rules {
                 #0 { lhs : f { #0 = $X } rhs = 1 }
                 #1 { lhs : f { #0 = $X } rhs = 2 }
               }"""
        )
        frame.root.add_child("goal", setn(leaf(0), op="f"))
        run_rewrite(frame.resolve("rules"), frame)
        assert frame.resolve("goal").value == 1

    def test_outermost_non_overlapping_matches(self):
        # f(f(0)) rewrites outermost first: one firing per pass
        frame = parse(
            "rules { #0 { lhs : f { #0 = $X } rhs : g { #0 = $X } } }"
        )
        frame.root.add_child("goal", setn(setn(leaf(0), op="f"), op="f"))
        ctx = EvalContext(frame)
        run_rewrite(frame.resolve("rules"), frame, ctx)
        goal = frame.resolve("goal")
        assert goal.op == "g" and goal.children[0][1].op == "g"
        assert ctx.stats["firing"] == 2

    def test_fuel_stops_divergence(self):
        frame = parse(
            "rules { #0 { lhs : loop { #0 = $X } rhs : loop { #0 = $X } } }"
        )
        frame.root.add_child("goal", setn(leaf(0), op="loop"))
        with pytest.raises(FuelExhausted):
            run_rewrite(frame.resolve("rules"), frame, fuel=30)

    def test_ready_subterms_evaluated_before_matching(self):
        frame = parse(
            GCD_RULES + "\nvals { a = 12 b = 8 }\n"
        )
        frame.root.add_child(
            "goal",
            setn(Node.ref_node("vals.a"), Node.ref_node("vals.b"), op="gcd"),
        )
        run_rewrite(frame.resolve("rules"), frame)
        assert frame.resolve("goal").value == 4
