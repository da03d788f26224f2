"""Feature-based phrase-structure grammars with finite feature domains.

A category may carry feature constraints::

    cat np#[n=(s,p), p=(1,2,3), c=(s,o)].
    start s.
    s => np#[n=!, p=!, c=s], vp#[n=!, p=!].

Constraint values are a constant (``c=s``), a value set (``p=(1,2)``), a
capitalized variable shared across the rule (``n=N``) or ``!``, which copies
the left-hand-side feature of the same name.  :func:`instantiate` expands
every rule over all consistent value assignments, producing a plain CFG.
"""

import itertools
from dataclasses import dataclass, field

from .errors import GrammarSemanticError
from .grammar import EPS_NAME, Grammar, N, Rule, T
from .syntax import TokenStream


@dataclass(frozen=True)
class Variable:
    name: str


@dataclass(frozen=True)
class Value:
    value: str


@dataclass(frozen=True)
class ValueSet:
    values: tuple


@dataclass(frozen=True)
class Inherit:
    pass


@dataclass(frozen=True)
class FeatureConstraint:
    feature: str
    spec: object  # Variable | Value | ValueSet | Inherit


@dataclass(frozen=True)
class FeatureDecl:
    category: str
    features: dict  # feature name -> tuple of values, in declaration order


@dataclass(frozen=True)
class CategoryTerm:
    name: str
    constraints: tuple = ()
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class ApsgRule:
    lhs: CategoryTerm
    rhs: tuple  # of CategoryTerm or terminal Symbol


@dataclass(frozen=True)
class ApsgGrammar:
    declarations: tuple
    start: str
    rules: tuple

    def features_of(self, category):
        for decl in self.declarations:
            if decl.category == category:
                return decl.features
        return {}


def _plain_name(ts, what):
    tok = ts.expect("name", what=what)
    if "#" in tok.text or "'" in tok.text:
        raise ts.error(f"invalid name {tok.text!r}", tok)
    return tok


def _value(ts):
    tok = ts.peek()
    if tok.kind in ("name", "value") and "#" not in tok.text and "'" not in tok.text:
        return ts.next().text
    raise ts.error(f"expected a feature value, found {tok.describe()}")


def _value_list(ts):
    ts.expect("punct", "(")
    values = [_value(ts)]
    while ts.accept("punct", ","):
        values.append(_value(ts))
    ts.expect("punct", ")")
    return tuple(values)


def _constraint(ts):
    feat = _plain_name(ts, "a feature name").text
    ts.expect("punct", "=")
    tok = ts.peek()
    if tok.kind == "var":
        ts.next()
        return FeatureConstraint(feat, Variable(tok.text))
    if ts.accept("punct", "!"):
        return FeatureConstraint(feat, Inherit())
    if ts.at("punct", "("):
        return FeatureConstraint(feat, ValueSet(_value_list(ts)))
    return FeatureConstraint(feat, Value(_value(ts)))


def _category_term(ts):
    tok = _plain_name(ts, "a category name")
    constraints = []
    if ts.at("punct", "#"):
        ts.next()
        ts.expect("punct", "[")
        if not ts.at("punct", "]"):
            constraints.append(_constraint(ts))
            while ts.accept("punct", ","):
                constraints.append(_constraint(ts))
        ts.expect("punct", "]")
    return CategoryTerm(tok.text, tuple(constraints), tok.line, tok.column)


def _declaration(ts):
    ts.next()  # 'cat'
    name = _plain_name(ts, "a category name")
    features = {}
    if ts.accept("punct", "#"):
        ts.expect("punct", "[")
        while True:
            ftok = _plain_name(ts, "a feature name")
            ts.expect("punct", "=")
            values = _value_list(ts)
            if ftok.text in features:
                raise GrammarSemanticError(f"feature {ftok.text!r} declared twice", ftok.line, ftok.column)
            if len(set(values)) != len(values):
                raise GrammarSemanticError(f"duplicate values for feature {ftok.text!r}", ftok.line, ftok.column)
            features[ftok.text] = values
            if not ts.accept("punct", ","):
                break
        ts.expect("punct", "]")
    ts.expect("punct", ".")
    return name, FeatureDecl(name.text, features)


def _body(ts):
    alternatives = []
    items = []
    while True:
        tok = ts.peek()
        if tok.kind == "terminal":
            ts.next()
            if tok.text == EPS_NAME:
                raise ts.error(f"{EPS_NAME!r} is reserved and cannot be a terminal", tok)
            items.append(T(tok.text))
        elif tok.kind == "name":
            items.append(_category_term(ts))
        elif ts.at("punct", "["):
            ts.next()
            ts.expect("punct", "]")
        else:
            raise ts.error(f"expected a category, terminal or [], found {tok.describe()}")
        if ts.accept("punct", ","):
            continue
        alternatives.append(tuple(items))
        items = []
        if not ts.accept("punct", "|"):
            return alternatives


def _semantic(message, term):
    return GrammarSemanticError(message, term.line or None, term.column or None)


def _check(grammar):
    declared = {d.category: d.features for d in grammar.declarations}
    for rule in grammar.rules:
        lhs_features = declared.get(rule.lhs.name, {})
        terms = [rule.lhs] + [t for t in rule.rhs if isinstance(t, CategoryTerm)]
        for i, term in enumerate(terms):
            features = declared.get(term.name, {})
            seen = set()
            for c in term.constraints:
                if c.feature not in features:
                    raise _semantic(f"feature {c.feature!r} is not declared for category {term.name!r}", term)
                if c.feature in seen:
                    raise _semantic(f"feature {c.feature!r} constrained twice on {term.name!r}", term)
                seen.add(c.feature)
                domain = features[c.feature]
                spec = c.spec
                if isinstance(spec, Value):
                    bad = [spec.value] if spec.value not in domain else []
                elif isinstance(spec, ValueSet):
                    bad = [v for v in spec.values if v not in domain]
                else:
                    bad = []
                if bad:
                    raise _semantic(f"value {bad[0]!r} not declared for feature {c.feature!r} of {term.name!r}", term)
                if isinstance(spec, Inherit):
                    if i == 0:
                        raise _semantic("'!' may only appear on right-hand-side categories", term)
                    if c.feature not in lhs_features:
                        raise _semantic(
                            f"{term.name}#[{c.feature}=!] inherits from {rule.lhs.name!r}, "
                            f"which has no feature {c.feature!r}",
                            term,
                        )
    categories = {d.category for d in grammar.declarations}
    for rule in grammar.rules:
        categories.add(rule.lhs.name)
        categories.update(t.name for t in rule.rhs if isinstance(t, CategoryTerm))
    if grammar.start not in categories:
        raise GrammarSemanticError(f"start category {grammar.start!r} is never declared or used")


def parse_apsg(text):
    """Read the feature-grammar notation into an :class:`ApsgGrammar` (no expansion yet)."""
    ts = TokenStream(text)
    declarations = []
    declared = set()
    start = None
    rules = []
    while not ts.at("eof"):
        tok = ts.peek()
        if tok.kind == "name" and tok.text == "cat" and ts.peek(1).kind == "name":
            name, decl = _declaration(ts)
            if decl.category in declared:
                raise GrammarSemanticError(f"category {decl.category!r} declared twice", name.line, name.column)
            declared.add(decl.category)
            declarations.append(decl)
        elif tok.kind == "name" and tok.text == "start" and ts.peek(1).kind == "name":
            ts.next()
            name = _plain_name(ts, "a category name")
            ts.expect("punct", ".")
            if start is not None:
                raise ts.error("duplicate start declaration", tok)
            start = name.text
        else:
            lhs = _category_term(ts)
            ts.expect("arrow", what="'=>'")
            for alt in _body(ts):
                rules.append(ApsgRule(lhs, alt))
            ts.expect("punct", ".", what="'.' or '|'")
    if start is None:
        raise GrammarSemanticError("missing 'start' declaration")
    grammar = ApsgGrammar(tuple(declarations), start, tuple(rules))
    _check(grammar)
    return grammar


def render_category(name, assignment):
    """``np`` + ``{"n": "s", "p": "3"}`` -> ``np#n=s#p=3`` (assignment order kept)."""
    return name + "".join(f"#{f}={v}" for f, v in assignment.items())


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # keep the earlier cell as representative so group order follows cell order
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def _expand_rule(grammar, rule):
    """Yield (lhs name, rhs symbols) for every consistent assignment of ``rule``."""
    occurrences = [rule.lhs] + list(rule.rhs)
    cell_id = {}  # (occurrence index, feature) -> position in canonical cell order
    domains = []
    uf = _UnionFind()
    var_nodes = {}
    pending = []
    for i, occ in enumerate(occurrences):
        if not isinstance(occ, CategoryTerm):
            continue
        constraints = {c.feature: c.spec for c in occ.constraints}
        for feat, domain in grammar.features_of(occ.name).items():
            cell = cell_id[i, feat] = len(domains)
            uf.find(cell)
            spec = constraints.get(feat)
            if isinstance(spec, Value):
                allowed = {spec.value}
            elif isinstance(spec, ValueSet):
                allowed = set(spec.values)
            else:
                allowed = None
            domains.append([v for v in domain if allowed is None or v in allowed])
            if isinstance(spec, (Variable, Inherit)):
                pending.append((cell, spec, feat))
    for cell, spec, feat in pending:
        if isinstance(spec, Variable):
            # variable nodes rank after every cell, so a cell stays the group representative
            node = var_nodes.setdefault(spec.name, len(domains) + len(var_nodes))
            uf.union(cell, node)
        else:
            uf.union(cell, cell_id[0, feat])

    groups = {}
    for cell in range(len(domains)):
        root = uf.find(cell)
        if root not in groups:
            groups[root] = list(domains[cell])
        else:
            allowed = set(domains[cell])
            groups[root] = [v for v in groups[root] if v in allowed]
    roots = sorted(groups)
    for combo in itertools.product(*(groups[r] for r in roots)):
        value_of = dict(zip(roots, combo))
        rendered = []
        for i, occ in enumerate(occurrences):
            if isinstance(occ, CategoryTerm):
                features = grammar.features_of(occ.name)
                assignment = {f: value_of[uf.find(cell_id[i, f])] for f in features}
                rendered.append(N(render_category(occ.name, assignment)))
            else:
                rendered.append(occ)
        yield rendered[0], tuple(rendered[1:])


def instantiate(grammar):
    """Expand ``grammar`` into an equivalent CFG.

    The result has a fresh start symbol (the start category name with a
    ``'`` suffix) with one rule per instance of the start category.
    Identical instantiated rules are merged.
    """
    rules = []
    seen = set()

    def add(rule):
        if rule not in seen:
            seen.add(rule)
            rules.append(rule)

    body = []
    for src in grammar.rules:
        for lhs, rhs in _expand_rule(grammar, src):
            body.append(Rule(lhs, rhs))

    names = {r.lhs.name for r in body} | {s.name for r in body for s in r.rhs if s.nonterminal}
    start_features = grammar.features_of(grammar.start)
    start_instances = [
        N(render_category(grammar.start, dict(zip(start_features, combo))))
        for combo in itertools.product(*start_features.values())
    ]
    names.update(s.name for s in start_instances)
    fresh = grammar.start + "'"
    while fresh in names:
        fresh += "'"
    start = N(fresh)
    for inst in start_instances:
        add(Rule(start, (inst,)))
    for rule in body:
        add(rule)

    terminals = {s for r in rules for s in r.rhs if not s.nonterminal}
    nonterminals = {start} | {r.lhs for r in rules} | {s for r in rules for s in r.rhs if s.nonterminal}
    return Grammar(terminals, nonterminals, start, rules)
