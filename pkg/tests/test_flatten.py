from hypothesis import given, settings, strategies as st

from fsapprox import fsa
from fsapprox.flatten import flatten, pop_table
from fsapprox.grammar import N, prune
from fsapprox.lr0 import DottedRule, build_machine
from fsapprox.oracle import enumerate_language
from fsapprox.unfold import trivial_unfold, unfold

import randgrammars
from conftest import names


def reference_pops(u):
    """Pop(p) straight from the definition, scanning completed items of p."""
    g = u.machine.grammar
    pops = {p: set() for p in range(len(u.states))}
    for p in range(len(u.states)):
        for r, dot in u.items(p):
            rule = g.rules[r]
            if r == 0 or dot != len(rule.rhs):
                continue
            for origin in range(len(u.states)):
                if DottedRule(r, 0) not in u.items(origin):
                    continue
                q = origin
                for sym in rule.rhs:
                    q = u.delta.get((q, sym))
                    if q is None:
                        break
                if q == p and (origin, rule.lhs) in u.delta:
                    pops[p].add(u.delta[origin, rule.lhs])
    return pops


def state_with(u, g, text, dot):
    r = next(i for i, rule in enumerate(g.rules) if str(rule) == text)
    return [p for p in range(len(u.states)) if DottedRule(r, dot) in u.items(p)]


def test_g1_pops(g1):
    m = build_machine(g1)
    u = trivial_unfold(m)
    pops = pop_table(u)
    g = m.grammar
    after_a = u.delta[0, N("a")]
    (aa_done,) = state_with(u, g, "a => a, `a", 2)
    (s_done,) = state_with(u, g, "s => a, `b", 2)
    assert pops[aa_done] == {after_a}
    # the epsilon rule completes in the initial state, popping to its own A-successor
    assert pops[0] == {after_a}
    assert pops[s_done] == {u.delta[0, N("s")]}
    assert u.delta[0, N("s")] in u.finals


def test_g2_unfolded_copies_pop_apart(g2):
    m = build_machine(g2)
    u = unfold(m)
    pops = pop_table(u)
    copies = state_with(u, m.grammar, "x => `c", 1)
    assert len(copies) == 2
    targets = [pops[p] for p in copies]
    assert all(len(t) == 1 for t in targets)
    assert targets[0] != targets[1]
    # with the trivial congruence the single copy pops to both
    t = trivial_unfold(m)
    (single,) = state_with(t, m.grammar, "x => `c", 1)
    assert len(pop_table(t)[single]) == 2


def test_pop_table_matches_definition(g1, g2, anbn, acb, np_grammar):
    for g in (g1, g2, anbn, acb, np_grammar):
        m = build_machine(g)
        for u in (unfold(m), trivial_unfold(m)):
            assert pop_table(u) == reference_pops(u)


def test_g1_flattens_to_a_star_b(g1):
    dfa = fsa.minimize(fsa.determinize(names(flatten(unfold(build_machine(g1))))))
    hand = fsa.Dfa(["a", "b"], 2, 0, {1}, {(0, "a"): 0, (0, "b"): 1})
    assert fsa.size(dfa) == (2, 2)
    assert fsa.equivalent(dfa, hand)


def test_g2_with_and_without_unfolding(g2):
    m = build_machine(g2)
    exact = names(flatten(unfold(m)))
    loose = names(flatten(trivial_unfold(m)))
    assert fsa.enumerate_accepted(exact, 8) == [("a", "c", "a"), ("b", "c", "b")]
    assert fsa.enumerate_accepted(loose, 8) == [
        ("a", "c", "a"),
        ("a", "c", "b"),
        ("b", "c", "a"),
        ("b", "c", "b"),
    ]


def check_flattening(g):
    m = build_machine(g)
    for u in (unfold(m), trivial_unfold(m)):
        nfa = flatten(u)
        assert nfa.n_states == len(u.states)
        assert nfa.start == u.start and nfa.finals == u.finals
        shifts = {(p, x, q) for (p, x), q in u.delta.items() if x in g.terminals}
        labeled = {t for t in nfa.transitions if t[1] is not fsa.EPS}
        assert labeled == shifts
        assert all(not getattr(x, "nonterminal", False) for _, x, _ in nfa.transitions)
        eps = {(p, q) for p, x, q in nfa.transitions if x is fsa.EPS}
        assert eps == {(p, q) for p, qs in pop_table(u).items() for q in qs}
        words = enumerate_language(g, 6)
        assert fsa.rejected(names(nfa), words) == []


@given(st.randoms(use_true_random=False))
@settings(max_examples=40, deadline=None)
def test_flattening_invariants_random(rng):
    check_flattening(prune(randgrammars.general(rng, max_nts=4, max_rules=8)))


def test_flattening_invariants_named(g1, g2, anbn, acb, np_grammar):
    for g in (g1, g2, anbn, acb, np_grammar):
        check_flattening(g)
