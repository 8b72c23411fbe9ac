"""Terminating rewrite systems on noncommutative polynomials.

A Presentation bundles an alphabet, a composite word order and a list of
oriented rules.  Construction verifies rule admissibility (every right-hand
word strictly below the left-hand word in every context) and the presence of
both cancellation rules for each declared inverse pair.  Normal forms are
computed by leftmost or rightmost redex contraction with a hard step limit;
local confluence is checked, never assumed.
"""

from __future__ import annotations

import os

from .ncpoly import NCPoly, EMPTY_WORD, CompositeOrder, Alphabet
from .reports import Check, Report

__all__ = [
    "RewriteError",
    "InadmissibleRuleError",
    "PresentationError",
    "StepLimitExceeded",
    "Rule",
    "Presentation",
    "check_admissible",
    "critical_pairs",
]

DEFAULT_STEP_LIMIT = 10 ** 6
_CACHE_CAP = 400_000


class RewriteError(RuntimeError):
    pass


class InadmissibleRuleError(RewriteError):
    def __init__(self, rule, word):
        self.rule = rule
        self.word = word
        super().__init__(
            f"rule {' '.join(rule.lhs)} -> ... is not admissible: "
            f"rhs word {' '.join(word) or '1'} does not strictly decrease"
        )


class PresentationError(RewriteError):
    pass


class StepLimitExceeded(RewriteError):
    def __init__(self, limit):
        super().__init__(f"rewrite step limit of {limit} exceeded")
        self.limit = limit


class Rule:
    """Oriented rewrite rule lhs -> rhs with lhs a nonempty word."""

    __slots__ = ("lhs", "rhs")

    def __init__(self, lhs, rhs):
        object.__setattr__(self, "lhs", tuple(lhs))
        object.__setattr__(self, "rhs", rhs if isinstance(rhs, NCPoly) else NCPoly(rhs))

    def __setattr__(self, *a):
        raise AttributeError("Rule is immutable")

    def __eq__(self, other):
        return isinstance(other, Rule) and self.lhs == other.lhs and self.rhs == other.rhs

    def __hash__(self):
        return hash(self.lhs)

    def __repr__(self):
        from .parser import format_word, format_poly
        return f"Rule({format_word(self.lhs)} -> {format_poly(self.rhs)})"


def step_limit_from_env(default=DEFAULT_STEP_LIMIT):
    raw = os.environ.get("QSMASH_STEP_LIMIT")
    if raw:
        try:
            return int(raw)
        except ValueError:
            pass
    return default


class Presentation:
    """Alphabet + order + admissible rules; doubles as the algebra object."""

    def __init__(self, alphabet, rules, order="cross", name=None, block_ranks=None,
                 validate=True):
        if isinstance(order, CompositeOrder):
            self.order = order
            if order.alphabet is not alphabet and order.alphabet != alphabet:
                raise PresentationError("order built over a different alphabet")
        else:
            self.order = CompositeOrder(alphabet, kind=order, block_ranks=block_ranks)
        self.alphabet = alphabet
        self.name = name
        rules = list(rules)
        for r in rules:
            alphabet.check_word(r.lhs)
            for w in r.rhs.terms:
                alphabet.check_word(w)
        # canonical rule order makes reports independent of input permutation
        rules.sort(key=lambda r: (self.order.sort_key(r.lhs), sorted(r.rhs.terms)))
        self.rules = tuple(rules)
        if validate:
            self._validate()
        index = {}
        for r in self.rules:
            index.setdefault(r.lhs[0], []).append(r)
        self._index = index
        self._max_lhs = max((len(r.lhs) for r in self.rules), default=1)
        self._nf_cache = {"leftmost": {}, "rightmost": {}}

    # -- validation ---------------------------------------------------------
    def _validate(self):
        for r in self.rules:
            if len(r.lhs) == 0:
                raise PresentationError("rule with empty left-hand side")
            for w in r.rhs.terms:
                if not self.order.strictly_decreases(w, r.lhs):
                    raise InadmissibleRuleError(r, w)
        lhs_set = {r.lhs for r in self.rules}
        for g in self.alphabet:
            if g.inverse_of is not None:
                pair = (g.name, g.inverse_of)
                if pair not in lhs_set:
                    raise PresentationError(
                        f"missing cancellation rule {g.name} {g.inverse_of} -> 1")
                # both orientations required; the partner generator supplies the
                # mirrored pair when iterated, so checking one direction per
                # generator covers a b and b a.

    def blocks(self):
        return self.alphabet.blocks()

    # -- structure helpers ----------------------------------------------------
    def restrict(self, names, name=None):
        """Sub-presentation on a subset of letters (rules fully inside it)."""
        keep = set(names)
        alph = self.alphabet.restrict(keep)
        rules = [r for r in self.rules
                 if set(r.lhs) <= keep and all(set(w) <= keep for w in r.rhs.terms)]
        return Presentation(alph, rules, order=self.order.kind, name=name,
                            block_ranks=self.order.block_ranks)

    def check_poly(self, e):
        for w in e.terms:
            self.alphabet.check_word(w)

    # -- rewriting ------------------------------------------------------------
    def find_redex(self, word, strategy="leftmost"):
        """(position, rule) of the chosen redex, or None."""
        n = len(word)
        index = self._index
        positions = range(n) if strategy == "leftmost" else range(n - 1, -1, -1)
        for i in positions:
            for r in index.get(word[i], ()):
                m = len(r.lhs)
                if i + m <= n and word[i:i + m] == r.lhs:
                    return i, r
        return None

    def is_normal_word(self, word):
        return self.find_redex(word) is None

    def normal_form_word(self, word, strategy="leftmost", step_limit=None):
        """Normal form of a single word as an NCPoly."""
        self.alphabet.check_word(word)
        limit = step_limit if step_limit is not None else step_limit_from_env()
        cache = self._nf_cache[strategy]
        budget = [limit, limit]
        return self._nf_word(tuple(word), strategy, cache, budget)

    def _nf_word(self, w0, strategy, cache, budget):
        hit = cache.get(w0)
        if hit is not None:
            return hit
        # iterative memoized reduction; frames: [word, expansion, idx, acc]
        stack = [[w0, None, 0, None]]
        result = None
        while stack:
            frame = stack[-1]
            word, expansion, idx, acc = frame
            if expansion is None:
                hit = cache.get(word)
                if hit is not None:
                    result = hit
                    stack.pop()
                    continue
                redex = self.find_redex(word, strategy)
                if redex is None:
                    nf = NCPoly({word: 1})
                    if len(cache) < _CACHE_CAP:
                        cache[word] = nf
                    result = nf
                    stack.pop()
                    continue
                budget[0] -= 1
                if budget[0] < 0:
                    raise StepLimitExceeded(budget[1])
                i, rule = redex
                prefix, suffix = word[:i], word[i + len(rule.lhs):]
                frame[1] = [(prefix + rw + suffix, rc) for rw, rc in rule.rhs.terms.items()]
                frame[3] = {}
                continue
            if idx > 0:
                # a child just finished: fold result into the accumulator
                child_coeff = expansion[idx - 1][1]
                for w, c in result.terms.items():
                    s = acc.get(w)
                    s = c * child_coeff if s is None else s + c * child_coeff
                    if s.is_zero():
                        acc.pop(w, None)
                    else:
                        acc[w] = s
            if idx < len(expansion):
                frame[2] = idx + 1
                stack.append([expansion[idx][0], None, 0, None])
                continue
            nf = NCPoly(acc)
            if len(cache) < _CACHE_CAP:
                cache[word] = nf
            result = nf
            stack.pop()
        return result

    def normal_form(self, e, strategy="leftmost", step_limit=None):
        """Normal form of an NCPoly; linear in e."""
        if not isinstance(e, NCPoly):
            raise TypeError("normal_form expects an NCPoly")
        self.check_poly(e)
        limit = step_limit if step_limit is not None else step_limit_from_env()
        cache = self._nf_cache[strategy]
        budget = [limit, limit]
        acc = {}
        for w, c in e.terms.items():
            nf = self._nf_word(w, strategy, cache, budget)
            for w2, c2 in nf.terms.items():
                s = acc.get(w2)
                s = c * c2 if s is None else s + c * c2
                if s.is_zero():
                    acc.pop(w2, None)
                else:
                    acc[w2] = s
        return NCPoly(acc)

    def nf(self, e, **kw):
        return self.normal_form(e, **kw)

    def reduces_to_zero(self, e):
        return self.normal_form(e).is_zero()

    def mul_nf(self, *polys):
        out = NCPoly.one()
        for p in polys:
            out = out * p
        return self.normal_form(out)

    def commutator(self, a, b):
        return self.normal_form(a * b - b * a)

    # -- enumeration ------------------------------------------------------------
    def normal_words(self, max_len, letters=None):
        """All rewrite-irreducible words of length <= max_len (sorted)."""
        letters = tuple(letters) if letters is not None else self.alphabet.names()
        out = [EMPTY_WORD]
        layer = [EMPTY_WORD]
        for _ in range(max_len):
            nxt = []
            for w in layer:
                for x in letters:
                    cand = w + (x,)
                    # w is already normal, so a new redex must end at the new letter
                    n = len(cand)
                    ok = True
                    for i in range(max(0, n - self._max_lhs), n):
                        for r in self._index.get(cand[i], ()):
                            if i + len(r.lhs) == n and cand[i:] == r.lhs:
                                ok = False
                                break
                        if not ok:
                            break
                    if ok:
                        nxt.append(cand)
            out.extend(nxt)
            layer = nxt
        out.sort(key=self.order.sort_key)
        return out

    def __repr__(self):
        return (f"Presentation({self.name or 'anonymous'}: "
                f"{len(self.alphabet)} generators, {len(self.rules)} rules)")


# ---------------------------------------------------------------------------
# diagnostics
# ---------------------------------------------------------------------------

def check_admissible(alphabet, rules, order="cross", block_ranks=None):
    """Report on rule admissibility without raising (spec diagnostic)."""
    from .parser import format_word
    if isinstance(order, CompositeOrder):
        ord_obj = order
    else:
        ord_obj = CompositeOrder(alphabet, kind=order, block_ranks=block_ranks)
    checks = []
    for k, r in enumerate(rules):
        residuals = []
        if len(r.lhs) == 0:
            residuals.append({"context": "lhs", "expression": "empty left-hand side"})
        else:
            for w in r.rhs.terms:
                if not ord_obj.strictly_decreases(w, r.lhs):
                    residuals.append({
                        "context": format_word(r.lhs),
                        "expression": format_word(w),
                    })
        checks.append(Check(
            name=f"rule-{format_word(r.lhs)}",
            status="pass" if not residuals else "fail",
            residuals=residuals,
        ))
    return Report(check="admissibility", checks=checks)


def _overlaps(l1, l2):
    """Proper overlaps: nonempty proper suffix of l1 equals a prefix of l2."""
    out = []
    for k in range(1, min(len(l1), len(l2))):
        if l1[len(l1) - k:] == l2[:k]:
            out.append(k)
    return out


def critical_pairs(p, max_overlap_len=None):
    """Resolve all overlap and inclusion ambiguities up to the length bound.

    Every ambiguity word is reduced along both branches; the Report lists
    each ambiguity and, when the two normal forms differ, the offending pair.
    """
    from .parser import format_word, format_poly
    if max_overlap_len is None:
        max_overlap_len = max(3, p._max_lhs)
    if max_overlap_len < p._max_lhs:
        raise ValueError("max_overlap_len must be at least the longest rule lhs")
    checks = []
    rules = p.rules
    seen = set()

    def _resolve(word, i1, r1, i2, r2, kind):
        key = (word, i1, r1.lhs, i2, r2.lhs)
        if key in seen:
            return
        seen.add(key)
        left = NCPoly({word[:i1]: 1}) * r1.rhs * NCPoly({word[i1 + len(r1.lhs):]: 1})
        right = NCPoly({word[:i2]: 1}) * r2.rhs * NCPoly({word[i2 + len(r2.lhs):]: 1})
        nf_left = p.normal_form(left)
        nf_right = p.normal_form(right)
        residuals = []
        if nf_left != nf_right:
            residuals.append({
                "context": format_word(word),
                "expression": f"{format_poly(nf_left)}  !=  {format_poly(nf_right)}",
            })
        checks.append(Check(
            name=f"{kind}-{format_word(word)}",
            status="pass" if not residuals else "fail",
            residuals=residuals,
        ))

    for r1 in rules:
        for r2 in rules:
            for k in _overlaps(r1.lhs, r2.lhs):
                word = r1.lhs + r2.lhs[k:]
                if r1 is r2 and word == r1.lhs:
                    continue
                if len(word) <= max_overlap_len:
                    _resolve(word, 0, r1, len(r1.lhs) - k, r2, "overlap")
            if r1 is not r2 and len(r2.lhs) < len(r1.lhs):
                # inclusion: r2.lhs occurs inside r1.lhs
                for i in range(len(r1.lhs) - len(r2.lhs) + 1):
                    if r1.lhs[i:i + len(r2.lhs)] == r2.lhs:
                        if len(r1.lhs) <= max_overlap_len:
                            _resolve(r1.lhs, 0, r1, i, r2, "inclusion")
    checks.sort(key=lambda c: c.name)
    return Report(check="local-confluence", checks=checks)
