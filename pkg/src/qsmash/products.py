"""Builders for composite algebras: cross products, braided tensor products,
and their mixed compositions.

Cross rules realize the exchange law a g = g_(1) (a <| g_(2)); braided
exchange rules are user-supplied finite tables (the universal R-matrix never
materializes).  Every generated presentation is admissibility-checked at
construction and ships with a local-confluence report.
"""

from __future__ import annotations

from .scalars import Scalar
from .ncpoly import NCPoly, EMPTY_WORD, merge_alphabets
from .rewrite import Rule, Presentation, critical_pairs
from .actions import ActionTable, act_word_letter, check_module_algebra, extend_action_adjoint
from .reports import Report

__all__ = [
    "BuildError",
    "CrossPresentation",
    "BraidedPresentation",
    "build_cross",
    "build_braided",
    "build_mixed",
    "read_action_from_cross",
    "generate_cross_rules",
]


class BuildError(RuntimeError):
    pass


class CrossPresentation:
    """Combined presentation of a cross product with its provenance."""

    def __init__(self, base, algebra, hopf, action, reports):
        self.base = base
        self.algebra = algebra
        self.hopf = hopf
        self.action = action
        self.reports = reports

    def __getattr__(self, item):
        return getattr(self.base, item)

    def __repr__(self):
        return f"CrossPresentation({self.base!r})"


class BraidedPresentation:
    """Combined presentation of a braided tensor product."""

    def __init__(self, base, factor1, factor2, exchange, reports):
        self.base = base
        self.factor1 = factor1
        self.factor2 = factor2
        self.exchange = tuple(exchange)
        self.reports = reports

    def __getattr__(self, item):
        return getattr(self.base, item)

    def __repr__(self):
        return f"BraidedPresentation({self.base!r})"


def generate_cross_rules(algebra, h, table):
    """Cross rules a g -> sum g_(1) (a <| g_(2)) for all letter pairs.

    Requires every first coproduct slot to be a word of length <= 1 so the
    generated rules are admissible under the cross order.
    """
    rules = []
    for g in h.h_letters():
        delta = h.coproduct_word((g,))
        for (u, _v) in delta.terms:
            if len(u) > 1:
                raise BuildError(
                    f"coproduct of {g} has first slot {' '.join(u)}; "
                    "cross rules need first-slot length <= 1")
        for a in algebra.alphabet.names():
            rhs = NCPoly.zero()
            for (u, v), c in delta.terms.items():
                acted = act_word_letter((a,), v[0], table, h, algebra) if len(v) == 1 \
                    else _act_along(a, v, table, h, algebra)
                # acted parts are reduced in the algebra and u has length <= 1,
                # so each rhs word is already normal-ordered
                rhs = rhs + (NCPoly.from_word(u) * algebra.normal_form(acted)).scale(c)
            rules.append(Rule((a, g), rhs))
    return rules


def _act_along(a, hw, table, h, algebra):
    out = NCPoly.from_gen(a)
    for g in hw:
        nxt = NCPoly.zero()
        for w, c in out.terms.items():
            nxt = nxt + act_word_letter(w, g, table, h, algebra).scale(c)
        out = nxt
    return out


def build_cross(algebra, h, table, *, name=None, max_overlap=3,
                require_module_algebra=True, require_confluent=True):
    """Cross product of a module algebra with a Hopf algebra."""
    reports = {}
    if require_module_algebra:
        ma = check_module_algebra(algebra, h, table)
        reports["module-algebra"] = ma
        if not ma.passed:
            raise BuildError(
                "action table fails the module-algebra axioms; "
                f"first failure: {ma.failures()[0].name}")
    cross_rules = generate_cross_rules(algebra, h, table)
    alphabet = merge_alphabets([h.base.alphabet, algebra.alphabet],
                               block_order=("H", "A", "A1", "A2"))
    rules = [Rule(r.lhs, r.rhs) for r in h.base.rules]
    rules += [Rule(r.lhs, r.rhs) for r in algebra.rules]
    rules += cross_rules
    base = Presentation(alphabet, rules, order="cross", name=name)
    conf = critical_pairs(base, max_overlap_len=max(max_overlap, base._max_lhs))
    reports["confluence"] = conf
    if require_confluent and not conf.passed:
        raise BuildError(
            f"cross product is not locally confluent: {conf.failures()[0].name}")
    return CrossPresentation(base, algebra, h, table, reports)


def read_action_from_cross(cross):
    """Recover the action table from generated cross rules by contracting the
    H prefix with the counit (round-trip check for build_cross)."""
    h = cross.hopf
    algebra = cross.algebra
    a_letters = set(algebra.alphabet.names())
    entries = {}
    rule_map = {r.lhs: r.rhs for r in cross.base.rules}
    for a in algebra.alphabet.names():
        for g in h.h_letters():
            rhs = rule_map.get((a, g))
            if rhs is None:
                raise BuildError(f"no cross rule for pair ({a}, {g})")
            acc = NCPoly.zero()
            for w, c in rhs.terms.items():
                k = 0
                while k < len(w) and w[k] not in a_letters:
                    k += 1
                h_part, a_part = w[:k], w[k:]
                if any(x not in a_letters for x in a_part):
                    raise BuildError(f"cross rule for ({a}, {g}) is not normal-ordered")
                acc = acc + NCPoly.from_word(a_part, c * h.counit_word(h_part))
            entries[(a, g)] = algebra.normal_form(acc)
    return ActionTable(entries)


def build_braided(factor1, factor2, exchange, *, name=None, max_overlap=3,
                  order="cross", require_confluent=True):
    """Braided tensor product with user-supplied exchange rules.

    Exchange rules must cover every (factor2 letter, factor1 letter) pair and
    normal-order factor1 to the left of factor2.
    """
    needed = {(b, a) for b in factor2.alphabet.names() for a in factor1.alphabet.names()}
    got = {r.lhs for r in exchange if len(r.lhs) == 2}
    missing = needed - got
    if missing:
        raise BuildError(f"exchange table misses pairs: {sorted(missing)[:4]} ...")
    extra = got - needed
    if extra:
        raise BuildError(f"exchange lhs is not (factor2, factor1): {sorted(extra)[:4]}")
    alphabet = merge_alphabets([factor1.alphabet, factor2.alphabet],
                               block_order=("H", "A", "A1", "A2"))
    rules = [Rule(r.lhs, r.rhs) for r in factor1.rules]
    rules += [Rule(r.lhs, r.rhs) for r in factor2.rules]
    rules += list(exchange)
    base = Presentation(alphabet, rules, order=order, name=name)
    reports = {}
    conf = critical_pairs(base, max_overlap_len=max(max_overlap, base._max_lhs))
    reports["confluence"] = conf
    if require_confluent and not conf.passed:
        raise BuildError(
            f"braided product is not locally confluent: {conf.failures()[0].name}")
    return BraidedPresentation(base, factor1, factor2, exchange, reports)


def trivial_exchange(factor1, factor2):
    """All letters of the two factors commute."""
    return [Rule((b, a), NCPoly.from_word((a, b)))
            for b in factor2.alphabet.names() for a in factor1.alphabet.names()]


MIXED_KINDS = ("cross-tensor", "tensor-cross", "braided-cross")


def build_mixed(kind, *, algebra1=None, algebra2=None, h=None, action=None,
                exchange=None, name=None, max_overlap=3, require_confluent=True):
    """Mixed products by composition.

    cross-tensor:  (A1 x| H) braided-tensor A2; the exchange table must cover
                   A2 letters against both A1 and H letters.
    tensor-cross:  A1 braided-tensor (A2 x| H); exchange covers (A2 u H) x A1.
    braided-cross: (A1 braided-tensor A2) x| H; the action table must cover
                   all letters of both factors.
    """
    if kind == "cross-tensor":
        cross = build_cross(algebra1, h, action, max_overlap=max_overlap)
        inner = cross.base
        needed = {(b, x) for b in algebra2.alphabet.names() for x in inner.alphabet.names()}
        got = {r.lhs for r in exchange}
        if needed - got:
            raise BuildError(f"exchange table misses pairs: {sorted(needed - got)[:4]}")
        alphabet = merge_alphabets([inner.alphabet, algebra2.alphabet],
                                   block_order=("H", "A", "A1", "A2"))
        rules = [Rule(r.lhs, r.rhs) for r in inner.rules] + list(exchange)
        base = Presentation(alphabet, rules, order="cross", name=name)
    elif kind == "tensor-cross":
        cross = build_cross(algebra2, h, action, max_overlap=max_overlap)
        inner = cross.base
        needed = {(x, a) for x in inner.alphabet.names() for a in algebra1.alphabet.names()}
        got = {r.lhs for r in exchange}
        if needed - got:
            raise BuildError(f"exchange table misses pairs: {sorted(needed - got)[:4]}")
        alphabet = merge_alphabets([algebra1.alphabet, inner.alphabet],
                                   block_order=("A1", "H", "A", "A2"))
        # normal order puts A1 left of H, H left of A2: H braids past factor 1
        ranks = {"A1": 0, "H": 1, "A": 2, "A2": 2}
        rules = [Rule(r.lhs, r.rhs) for r in inner.rules] + list(exchange)
        base = Presentation(alphabet, rules, order="cross", name=name, block_ranks=ranks)
    elif kind == "braided-cross":
        braided = build_braided(algebra1, algebra2, exchange, max_overlap=max_overlap)
        inner = braided.base
        cross = build_cross(inner, h, action, max_overlap=max_overlap)
        base = cross.base
    else:
        raise BuildError(f"unknown mixed kind {kind!r}; expected one of {MIXED_KINDS}")
    conf = critical_pairs(base, max_overlap_len=max(max_overlap, base._max_lhs))
    if require_confluent and not conf.passed:
        raise BuildError(f"mixed product not locally confluent: {conf.failures()[0].name}")
    return base, conf
