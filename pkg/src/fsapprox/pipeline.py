"""End-to-end compilation: instantiate, prune, decompose, approximate, recombine, minimize."""

import logging
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import fsa
from .apsg import instantiate, parse_apsg
from .decompose import approximate_component, components, defining_subgrammar, recombine
from .grammar import is_empty, parse_cfg, prune
from .unfold import DEFAULT_MAX_UNFOLDED_STATES

log = logging.getLogger(__name__)

# Figures published for the bundled English-fragment grammar (appendix.apsg).
REFERENCE_STATS = {
    "cfg_nonterminals": 78,
    "cfg_rules": 157,
    "flattened_states": 2615,
    "flattened_transitions": 4096,
    "dfa_states": 16,
    "dfa_transitions": 97,
    "seconds": 1.78,
}


@dataclass
class CompileOptions:
    decompose: bool = True
    unfold: bool = True
    minimize: bool = True
    max_unfolded_states: int = DEFAULT_MAX_UNFOLDED_STATES
    max_dfa_states: int = fsa.DEFAULT_MAX_DFA_STATES
    right_linear_exemption: bool = True


@dataclass
class CompileReport:
    instantiated_nonterminals: int = None
    instantiated_rules: int = None
    cfg_nonterminals: int = 0
    cfg_rules: int = 0
    components: int = 0
    lr0_states: int = 0
    unfolded_states: int = 0
    nfa_states: int = 0
    nfa_transitions: int = 0
    recombined_states: int = 0
    recombined_transitions: int = 0
    dfa_states: int = 0
    dfa_transitions: int = 0
    seconds: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    parts: list = field(default_factory=list)  # (owner name, linearity, lr0, unfolded, nfa, dfa size)

    def format(self, timing=True, reference=False):
        lines = []
        if self.instantiated_nonterminals is not None:
            lines.append(
                f"instantiated CFG: {self.instantiated_nonterminals} nonterminals, "
                f"{self.instantiated_rules} rules "
                f"(with LR(0) start rule: {self.instantiated_nonterminals + 1}, {self.instantiated_rules + 1})"
            )
        lines += [
            f"pruned CFG: {self.cfg_nonterminals} nonterminals, {self.cfg_rules} rules",
            f"components approximated: {self.components}",
            f"LR(0) states: {self.lr0_states}",
            f"unfolded states: {self.unfolded_states}",
            f"flattened NFA: {self.nfa_states} states, {self.nfa_transitions} transitions",
            f"recombined NFA: {self.recombined_states} states, {self.recombined_transitions} transitions",
            f"final DFA: {self.dfa_states} states, {self.dfa_transitions} transitions",
        ]
        for owner, lin, lr0, unf, nfa_size, dfa_size in self.parts:
            lines.append(
                f"  aut({owner}): {lin}, lr0={lr0}, unfolded={unf}, "
                f"nfa={nfa_size[0]}/{nfa_size[1]}, dfa={dfa_size[0]}/{dfa_size[1]}"
            )
        if timing:
            for stage, secs in self.seconds.items():
                lines.append(f"time {stage}: {secs:.3f}s")
        if reference:
            r = REFERENCE_STATS
            lines.append(
                "reference (published, English-fragment example): "
                f"CFG {r['cfg_nonterminals']} nonterminals/{r['cfg_rules']} rules; "
                f"flattened {r['flattened_states']} states/{r['flattened_transitions']} transitions; "
                f"DFA {r['dfa_states']} states/{r['dfa_transitions']} transitions; {r['seconds']}s"
            )
        for w in self.warnings:
            lines.append(f"warning: {w}")
        return "\n".join(lines) + "\n"


def load_grammar(path=None, text=None, kind=None, report=None):
    """Read a ``.cfg`` or ``.apsg`` grammar and return a plain CFG.

    ``kind`` is "cfg" or "apsg"; when omitted it comes from the file suffix,
    falling back to "apsg" if the text contains feature syntax.
    """
    if text is None:
        text = Path(path).read_text()
    if kind is None:
        suffix = Path(path).suffix.lower() if path else ""
        if suffix in (".cfg", ".apsg"):
            kind = suffix[1:]
        else:
            kind = "apsg" if ("#[" in text or "\ncat " in "\n" + text) else "cfg"
    if kind == "cfg":
        return parse_cfg(text)
    t0 = time.perf_counter()
    g = instantiate(parse_apsg(text))
    if report is not None:
        report.instantiated_nonterminals = len(g.nonterminals)
        report.instantiated_rules = len(g.rules)
        report.seconds["instantiate"] = time.perf_counter() - t0
    return g


def _to_names(aut):
    return fsa.relabel(aut, lambda sym: sym.name)


def compile_grammar(g, options=None, report=None):
    """Compile a CFG into a DFA (labels are terminal names) accepting a superset of ``L(g)``."""
    options = options or CompileOptions()
    report = report if report is not None else CompileReport()
    t0 = time.perf_counter()
    g = prune(g)
    if is_empty(g):
        report.warnings.append(f"start symbol {g.start.name} derives no terminal string; language is empty")
    report.cfg_nonterminals = len(g.nonterminals)
    report.cfg_rules = len(g.rules)
    report.seconds["prune"] = time.perf_counter() - t0

    approx = dict(
        unfold_stacks=options.unfold,
        minimize=options.minimize,
        max_unfolded_states=options.max_unfolded_states,
        right_linear_exemption=options.right_linear_exemption,
        max_dfa_states=options.max_dfa_states,
    )
    t1 = time.perf_counter()
    if options.decompose:
        comps = components(g)
        comp_of = {x: c for c in comps for x in c.members}
        needed = {g.start} | {p for c in comps for p in c.pseudoterminals}
        subs = {}
        for comp in comps:
            for x in sorted(comp.members & needed):
                subs[x] = approximate_component(defining_subgrammar(g, comp_of[x], x), **approx)
    else:
        subs = {g.start: approximate_component(g, **approx)}
    report.components = len(subs)
    for x, sub in subs.items():
        report.lr0_states += sub.lr0_states
        report.unfolded_states += sub.unfolded_states
        report.nfa_states += sub.nfa_states
        report.nfa_transitions += sub.nfa_transitions
        report.parts.append((
            x.name, sub.linearity.value, sub.lr0_states, sub.unfolded_states,
            (sub.nfa_states, sub.nfa_transitions), fsa.size(sub.dfa),
        ))
    report.seconds["approximate"] = time.perf_counter() - t1

    t2 = time.perf_counter()
    if options.decompose:
        nfa = recombine(subs, g.start, alphabet=g.terminals)
        report.recombined_states, report.recombined_transitions = fsa.size(nfa)
    else:
        nfa = subs[g.start].dfa.to_nfa()
        report.recombined_states, report.recombined_transitions = fsa.size(nfa)
    report.seconds["recombine"] = time.perf_counter() - t2

    t3 = time.perf_counter()
    dfa = fsa.determinize(_to_names(nfa), options.max_dfa_states)
    if options.minimize:
        dfa = fsa.minimize(dfa)
    report.seconds["determinize+minimize"] = time.perf_counter() - t3
    report.dfa_states, report.dfa_transitions = fsa.size(dfa)
    report.seconds["total"] = sum(v for k, v in report.seconds.items() if k != "total")
    return dfa
