import random

import pytest
from hypothesis import given, settings, strategies as st

from fsapprox import fsa
from fsapprox.flatten import flatten
from fsapprox.grammar import T, parse_cfg, prune
from fsapprox.lr0 import DottedRule, build_machine
from fsapprox.unfold import (
    UnfoldLimitError,
    collapse,
    enumerate_stacks,
    is_canonical,
    trivial_unfold,
    unfold,
)

import randgrammars
from conftest import names

RIGHT = "start s. s => `a, s | `b."


def right_machine():
    m = build_machine(parse_cfg(RIGHT))
    q = m.delta[m.start, T("a")]
    assert m.delta[q, T("a")] == q  # the a-shift state loops on a
    return m, q


def arrival(m, stack):
    s = m.start
    for state, sym in stack:
        assert state == s
        s = m.delta[state, sym]
    return s


def random_stack(m, rng, length):
    stack = []
    s = m.start
    for _ in range(length):
        out = m.transitions_from(s)
        if not out:
            break
        sym, t = rng.choice(out)
        stack.append((s, sym))
        s = t
    return tuple(stack)


def test_collapse_single_loop():
    m, q = right_machine()
    a = T("a")
    assert collapse(m, [(0, a), (q, a)]) == ((0, a),)


def test_collapse_iterates_to_fixed_point():
    m, q = right_machine()
    a = T("a")
    assert collapse(m, [(0, a), (q, a), (q, a)]) == ((0, a),)


def test_collapse_leaves_canonical_stacks_alone():
    m, q = right_machine()
    stack = ((0, T("a")), (q, T("b")))
    assert is_canonical(m, stack)
    assert collapse(m, stack) == stack


def test_collapse_rejects_unchained_stack():
    m, q = right_machine()
    with pytest.raises(ValueError):
        collapse(m, [(q, T("a"))])


def reference_collapse(m, stack):
    """Remove loops one at a time: shortest prefix first, then shortest loop."""
    stack = list(stack)
    while True:
        loops = []
        for i in range(len(stack)):
            s = stack[i][0]
            for end in range(i + 1, len(stack) + 1):
                state, sym = stack[end - 1]
                if m.delta[state, sym] == s:
                    loops.append((i, end))
        if not loops:
            return tuple(stack)
        i, end = min(loops)
        del stack[i:end]


def test_collapse_removes_leftmost_loop_first():
    g = parse_cfg("start s. s => `a, t. t => `c, `a, t | `c, t | `b.")
    m = build_machine(g)
    rng = random.Random(1)
    for _ in range(300):
        stack = random_stack(m, rng, rng.randint(0, 12))
        c = collapse(m, stack)
        assert c == reference_collapse(m, stack)
        assert is_canonical(m, c)
        assert arrival(m, c) == arrival(m, stack)


@given(st.randoms(use_true_random=False))
@settings(max_examples=40, deadline=None)
def test_collapse_properties(rng):
    m = build_machine(prune(randgrammars.general(rng)))
    for _ in range(20):
        stack = random_stack(m, rng, rng.randint(0, 10))
        c = collapse(m, stack)
        assert c == reference_collapse(m, stack)
        assert is_canonical(m, c)
        assert collapse(m, c) == c
        assert arrival(m, c) == arrival(m, stack)
        # collapsing only deletes entries
        it = iter(stack)
        assert all(entry in it for entry in c)


def test_g1_one_stack_class_per_state(g1):
    m = build_machine(g1)
    stacks = enumerate_stacks(m)
    assert set(stacks) == set(range(len(m.states)))
    assert all(len(v) == 1 for v in stacks.values())


def test_g2_shared_state_gets_two_classes(g2):
    m = build_machine(g2)
    x_rule = next(i for i, r in enumerate(m.grammar.rules) if str(r) == "x => `c")
    (x_state,) = [s for s, items in enumerate(m.states) if DottedRule(x_rule, 1) in items]
    stacks = enumerate_stacks(m)
    assert len(stacks[x_state]) == 2
    first_tokens = {stack[0][1] for stack in stacks[x_state]}
    assert first_tokens == {T("a"), T("b")}


def test_right_recursion_loop_state_single_class():
    m, q = right_machine()
    assert len(enumerate_stacks(m)[q]) == 1


def test_g1_unfolding_is_isomorphic(g1):
    m = build_machine(g1)
    u = unfold(m)
    assert len(u.states) == len(m.states)
    assert sorted(u.base(p) for p in range(len(u.states))) == list(range(len(m.states)))


def test_g2_unfolding_adds_one_state_per_extra_class(g2):
    m = build_machine(g2)
    u = unfold(m)
    stacks = enumerate_stacks(m)
    extra = sum(len(v) - 1 for v in stacks.values())
    assert extra >= 1
    assert len(u.states) == len(m.states) + extra
    dfa = fsa.minimize(fsa.determinize(names(flatten(u))))
    assert fsa.enumerate_accepted(dfa, 10) == [("a", "c", "a"), ("b", "c", "b")]


def test_epsilon_grammar_unfolds_to_itself():
    m = build_machine(parse_cfg("start s. s => []."))
    u = unfold(m)
    assert len(u.states) == 2
    assert u.states[0] == (0, ())


def test_unfold_cap_names_blowup_site():
    m = build_machine(randgrammars.blowup(4))
    with pytest.raises(UnfoldLimitError) as err:
        unfold(m, max_states=50)
    assert err.value.limit == 50
    assert err.value.site in range(len(m.states))
    assert "stack classes" in str(err.value)


def check_structure(m):
    u = unfold(m)
    stacks = enumerate_stacks(m)
    # states are exactly the enumerated (state, stack) pairs
    assert set(u.states) == {(s, sigma) for s, v in stacks.items() for sigma in v}
    assert u.states[u.start] == (m.start, ())
    for s, v in stacks.items():
        for sigma in v:
            assert is_canonical(m, sigma)
            assert arrival(m, sigma) == s
            for sym, t in m.transitions_from(s):
                # congruence law: pushing then collapsing stays inside the family
                assert collapse(m, sigma + ((s, sym),)) in stacks[t]
    ids = {st: i for i, st in enumerate(u.states)}
    for (p, sym), q in u.delta.items():
        s, sigma = u.states[p]
        # projection onto base states is a homomorphism
        assert m.delta[s, sym] == u.base(q)
        assert u.states[q] == (m.delta[s, sym], collapse(m, sigma + ((s, sym),)))
    assert u.finals == {ids[x] for x in u.states if x[0] in m.finals}


def test_structure_named(g1, g2, anbn, acb, np_grammar):
    for g in (g1, g2, anbn, acb, np_grammar):
        check_structure(build_machine(g))


@given(st.randoms(use_true_random=False))
@settings(max_examples=30, deadline=None)
def test_structure_random(rng):
    g = prune(randgrammars.general(rng, max_nts=4, max_rules=7))
    check_structure(build_machine(g))


def test_trivial_unfold_mirrors_machine(g2):
    m = build_machine(g2)
    u = trivial_unfold(m)
    assert len(u.states) == len(m.states)
    assert u.delta == m.delta
    assert u.finals == m.finals
