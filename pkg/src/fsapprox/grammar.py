"""Context-free grammars: data model, text syntax and useless-symbol pruning."""

import logging
from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import GrammarSemanticError
from .syntax import TokenStream

log = logging.getLogger(__name__)

EPS_NAME = "eps"


class Symbol(NamedTuple):
    """A grammar symbol.

    Terminals and nonterminals live in separate namespaces, so ``T("a")``
    and ``N("a")`` are different symbols.  Tuple ordering puts terminals
    before nonterminals, then orders by name.
    """

    nonterminal: bool
    name: str

    def __str__(self):
        return self.name if self.nonterminal else "`" + self.name


def T(name):
    return Symbol(False, name)


def N(name):
    return Symbol(True, name)


class Rule(NamedTuple):
    lhs: Symbol
    rhs: tuple

    def __str__(self):
        body = ", ".join(map(str, self.rhs)) if self.rhs else "[]"
        return f"{self.lhs.name} => {body}"


@dataclass(frozen=True)
class Grammar:
    """An immutable CFG.

    ``terminals`` is the set of symbols treated as terminals by the
    algorithms.  It normally holds only ``T(...)`` symbols, but defining
    subgrammars also put pseudoterminals (``N(...)`` symbols of other
    components) there.
    """

    terminals: frozenset
    nonterminals: frozenset
    start: Symbol
    rules: tuple
    _by_lhs: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "terminals", frozenset(self.terminals))
        object.__setattr__(self, "nonterminals", frozenset(self.nonterminals))
        object.__setattr__(self, "rules", tuple(Rule(r[0], tuple(r[1])) for r in self.rules))
        if self.start not in self.nonterminals:
            raise GrammarSemanticError(f"start symbol {self.start.name} is not a nonterminal")
        overlap = self.terminals & self.nonterminals
        if overlap:
            raise GrammarSemanticError(f"symbols both terminal and nonterminal: {sorted(overlap)}")
        if T(EPS_NAME) in self.terminals:
            raise GrammarSemanticError(f"{EPS_NAME!r} is reserved and cannot be a terminal")
        by_lhs = {}
        seen = set()
        for rule in self.rules:
            if rule.lhs not in self.nonterminals:
                raise GrammarSemanticError(f"rule lhs {rule.lhs} is not a nonterminal")
            for sym in rule.rhs:
                if sym not in self.terminals and sym not in self.nonterminals:
                    raise GrammarSemanticError(f"rule {rule} uses undeclared symbol {sym}")
            if rule in seen:
                raise GrammarSemanticError(f"duplicate rule {rule}")
            seen.add(rule)
            by_lhs.setdefault(rule.lhs, []).append(rule)
        object.__setattr__(self, "_by_lhs", {k: tuple(v) for k, v in by_lhs.items()})

    def rules_for(self, lhs):
        return self._by_lhs.get(lhs, ())

    def is_terminal(self, sym):
        return sym in self.terminals

    def symbol_order(self, sym):
        """Sort key: terminals first, then nonterminals, each by name."""
        return (sym not in self.terminals, sym.name, sym.nonterminal)

    def __str__(self):
        return format_cfg(self)


def _parse_items(ts):
    """Parse one alternative: a comma-separated item list, possibly ``[]``."""
    items = []
    while True:
        tok = ts.peek()
        if tok.kind == "terminal":
            ts.next()
            if tok.text == EPS_NAME:
                raise ts.error(f"{EPS_NAME!r} is reserved and cannot be a terminal", tok)
            items.append(T(tok.text))
        elif tok.kind == "name":
            ts.next()
            items.append(N(tok.text))
        elif ts.at("punct", "["):
            ts.next()
            ts.expect("punct", "]")
        else:
            raise ts.error(f"expected a category, terminal or [], found {tok.describe()}")
        if not ts.accept("punct", ","):
            return tuple(items)


def parse_cfg(text):
    """Read a grammar in the CFG text format.

    >>> g = parse_cfg("start s. s => `a.")
    >>> [str(r) for r in g.rules]
    ['s => `a']
    """
    ts = TokenStream(text)
    start = None
    rules = []
    seen = set()
    while not ts.at("eof"):
        tok = ts.peek()
        if tok.kind == "name" and tok.text == "start" and ts.peek(1).kind == "name":
            ts.next()
            name = ts.next()
            ts.expect("punct", ".")
            if start is not None:
                raise ts.error("duplicate start declaration", tok)
            start = N(name.text)
            continue
        lhs = ts.expect("name", what="a category name")
        ts.expect("arrow", what="'=>'")
        while True:
            alt_tok = ts.peek()
            rule = Rule(N(lhs.text), _parse_items(ts))
            if rule in seen:
                raise ts.error(f"duplicate rule {rule}", alt_tok)
            seen.add(rule)
            rules.append(rule)
            if not ts.accept("punct", "|"):
                break
        ts.expect("punct", ".", what="'.' or '|'")
    if start is None:
        raise GrammarSemanticError("missing 'start' declaration")
    if not any(r.lhs == start for r in rules):
        raise GrammarSemanticError(f"start symbol {start.name} is not defined by any rule")
    terminals = {s for r in rules for s in r.rhs if not s.nonterminal}
    nonterminals = {start} | {r.lhs for r in rules}
    nonterminals |= {s for r in rules for s in r.rhs if s.nonterminal}
    return Grammar(terminals, nonterminals, start, rules)


def format_cfg(g):
    """Render ``g`` in the CFG text format, one rule per line."""
    lines = [f"start {g.start.name}."]
    lines.extend(f"{rule}." for rule in g.rules)
    return "\n".join(lines) + "\n"


def productive_symbols(g):
    productive = set()
    changed = True
    while changed:
        changed = False
        for rule in g.rules:
            if rule.lhs in productive:
                continue
            if all(s in g.terminals or s in productive for s in rule.rhs):
                productive.add(rule.lhs)
                changed = True
    return productive


def reachable_symbols(g, keep=None):
    """Nonterminals reachable from the start, following only rules accepted by ``keep``."""
    seen = {g.start}
    stack = [g.start]
    while stack:
        for rule in g.rules_for(stack.pop()):
            if keep is not None and not keep(rule):
                continue
            for s in rule.rhs:
                if s in g.nonterminals and s not in seen:
                    seen.add(s)
                    stack.append(s)
    return seen


def prune(g):
    """Remove unproductive and unreachable nonterminals (in that order).

    Terminals that no longer occur in any rule are dropped as well.  When
    the start symbol is unproductive the result has no rules at all.
    """
    productive = productive_symbols(g)
    if g.start not in productive:
        log.warning("start symbol %s derives no terminal string; language is empty", g.start.name)
        return Grammar(frozenset(), {g.start}, g.start, ())

    def useful_rule(rule):
        return all(s in g.terminals or s in productive for s in rule.rhs)

    reachable = reachable_symbols(g, keep=useful_rule)
    rules = [r for r in g.rules if r.lhs in reachable and useful_rule(r)]
    terminals = {s for r in rules for s in r.rhs if s in g.terminals}
    return Grammar(terminals, reachable, g.start, rules)


def is_empty(g):
    return g.start not in productive_symbols(g)
