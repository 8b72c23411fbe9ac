"""Free noncommutative polynomials over Q(q, eta).

Words are tuples of generator names; polynomials map words to Scalars.
A CompositeOrder supplies the staged word order (block counts, block-rank
inversions, length, lex by precedence) used both for comparisons and for
rewrite-rule admissibility.
"""

from __future__ import annotations

from dataclasses import dataclass

from .scalars import Scalar, ONE as S_ONE

__all__ = [
    "AlphabetError",
    "UnknownGeneratorError",
    "Generator",
    "Alphabet",
    "NCPoly",
    "TensorPoly",
    "CompositeOrder",
    "EMPTY_WORD",
]

BLOCKS = ("H", "A", "A1", "A2")

EMPTY_WORD = ()


class AlphabetError(ValueError):
    """Inconsistent alphabet declaration."""


class UnknownGeneratorError(KeyError):
    """A word uses a letter outside the alphabet at hand."""


@dataclass(frozen=True)
class Generator:
    name: str
    block: str
    prec: int
    inverse_of: str | None = None

    def __post_init__(self):
        if self.block not in BLOCKS:
            raise AlphabetError(f"unknown block {self.block!r} for generator {self.name!r}")


class Alphabet:
    """Ordered set of generators with unique names and precedences."""

    def __init__(self, gens):
        gens = tuple(sorted(gens, key=lambda g: g.prec))
        by_name = {}
        precs = set()
        for g in gens:
            if g.name in ("q", "eta"):
                raise AlphabetError(f"{g.name!r} is reserved for the coefficient field")
            if g.name in by_name:
                raise AlphabetError(f"duplicate generator {g.name!r}")
            if g.prec in precs:
                raise AlphabetError(f"duplicate precedence {g.prec} ({g.name!r})")
            by_name[g.name] = g
            precs.add(g.prec)
        for g in gens:
            if g.inverse_of is not None:
                partner = by_name.get(g.inverse_of)
                if partner is None:
                    raise AlphabetError(f"{g.name!r}: inverse {g.inverse_of!r} not declared")
                if partner.inverse_of != g.name:
                    raise AlphabetError(f"inverse pairing of {g.name!r} is not symmetric")
        self.gens = gens
        self._by_name = by_name

    def __contains__(self, name):
        return name in self._by_name

    def __getitem__(self, name):
        try:
            return self._by_name[name]
        except KeyError:
            raise UnknownGeneratorError(name) from None

    def __iter__(self):
        return iter(self.gens)

    def __len__(self):
        return len(self.gens)

    def names(self):
        return tuple(g.name for g in self.gens)

    def blocks(self):
        return tuple(sorted({g.block for g in self.gens}))

    def block_of(self, name):
        return self[name].block

    def letters_of_block(self, *blocks):
        return tuple(g.name for g in self.gens if g.block in blocks)

    def check_word(self, word):
        for letter in word:
            if letter not in self._by_name:
                raise UnknownGeneratorError(letter)

    def restrict(self, names):
        keep = set(names)
        gens = []
        for g in self.gens:
            if g.name in keep:
                inv = g.inverse_of if g.inverse_of in keep else None
                gens.append(Generator(g.name, g.block, g.prec, inv))
        return Alphabet(gens)

    def __eq__(self, other):
        return isinstance(other, Alphabet) and self.gens == other.gens

    def __repr__(self):
        return f"Alphabet({', '.join(self.names())})"


def merge_alphabets(parts, block_order):
    """Merge alphabets, re-basing precedences so blocks follow block_order.

    Relative precedence inside each block is preserved.  Raises on duplicate
    generator names.
    """
    rank = {b: i for i, b in enumerate(block_order)}
    gens = []
    for alph in parts:
        gens.extend(alph.gens)
    names = [g.name for g in gens]
    if len(set(names)) != len(names):
        dup = sorted({n for n in names if names.count(n) > 1})
        raise AlphabetError(f"duplicate generators when merging alphabets: {dup}")
    for g in gens:
        if g.block not in rank:
            raise AlphabetError(f"block {g.block!r} not covered by block order {block_order}")
    gens.sort(key=lambda g: (rank[g.block], g.prec))
    return Alphabet([Generator(g.name, g.block, i + 1, g.inverse_of) for i, g in enumerate(gens)])


# ---------------------------------------------------------------------------
# NCPoly
# ---------------------------------------------------------------------------

def _coerce_scalar(c):
    if isinstance(c, Scalar):
        return c
    if isinstance(c, int):
        return Scalar.from_int(c)
    raise TypeError(f"cannot use {type(c).__name__} as a coefficient")


class NCPoly:
    """Finite Scalar-linear combination of words."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        t = {}
        if terms:
            for w, c in terms.items():
                c = _coerce_scalar(c)
                if not c.is_zero():
                    t[tuple(w)] = c
        object.__setattr__(self, "terms", t)

    def __setattr__(self, *a):
        raise AttributeError("NCPoly is immutable")

    # -- constructors
    @staticmethod
    def zero():
        return NC_ZERO

    @staticmethod
    def one():
        return NC_ONE

    @staticmethod
    def from_word(word, coeff=1):
        return NCPoly({tuple(word): coeff})

    @staticmethod
    def from_gen(name, coeff=1):
        return NCPoly({(name,): coeff})

    @staticmethod
    def from_scalar(c):
        return NCPoly({EMPTY_WORD: c})

    # -- structure
    def is_zero(self):
        return not self.terms

    def is_one(self):
        return self.terms == {EMPTY_WORD: S_ONE}

    def is_scalar(self):
        """True when the poly is a multiple of the unit word (incl. zero)."""
        return not self.terms or set(self.terms) == {EMPTY_WORD}

    def scalar_part(self):
        return self.terms.get(EMPTY_WORD, Scalar.from_int(0))

    def words(self):
        return self.terms.keys()

    def letters(self):
        out = set()
        for w in self.terms:
            out.update(w)
        return out

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, int):
            other = NCPoly.from_scalar(Scalar.from_int(other))
        return isinstance(other, NCPoly) and self.terms == other.terms

    def __len__(self):
        return len(self.terms)

    # -- ring operations
    def __add__(self, other):
        if isinstance(other, (int, Scalar)):
            other = NCPoly.from_scalar(_coerce_scalar(other))
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out.get(w)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(w, None)
            else:
                out[w] = s
        return NCPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return NCPoly({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Scalar)):
            other = NCPoly.from_scalar(_coerce_scalar(other))
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = _coerce_scalar(c)
        if c.is_zero():
            return NC_ZERO
        return NCPoly({w: v * c for w, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Scalar)):
            return self.scale(other)
        out = {}
        for u, cu in self.terms.items():
            for v, cv in other.terms.items():
                w = u + v
                c = cu * cv
                s = out.get(w)
                s = c if s is None else s + c
                if s.is_zero():
                    out.pop(w, None)
                else:
                    out[w] = s
        return NCPoly(out)

    def __rmul__(self, other):
        if isinstance(other, (int, Scalar)):
            return self.scale(other)
        return NotImplemented

    def __repr__(self):
        from .parser import format_poly
        return f"NCPoly({format_poly(self)})"


NC_ZERO = NCPoly()
NC_ONE = NCPoly({EMPTY_WORD: 1})


def poly_mul(p1, p2, alphabet=None):
    """Bilinear concatenation product; optionally validates letters."""
    if alphabet is not None:
        for p in (p1, p2):
            for w in p.terms:
                alphabet.check_word(w)
    return p1 * p2


# ---------------------------------------------------------------------------
# TensorPoly
# ---------------------------------------------------------------------------

class TensorPoly:
    """Element of the tensor square: Scalar combination of word pairs."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        t = {}
        if terms:
            for (u, v), c in terms.items():
                c = _coerce_scalar(c)
                if not c.is_zero():
                    t[(tuple(u), tuple(v))] = c
        object.__setattr__(self, "terms", t)

    def __setattr__(self, *a):
        raise AttributeError("TensorPoly is immutable")

    @staticmethod
    def zero():
        return TensorPoly()

    @staticmethod
    def one():
        return TensorPoly({(EMPTY_WORD, EMPTY_WORD): 1})

    @staticmethod
    def of(left, right):
        """Tensor product of two NCPolys."""
        out = {}
        for u, cu in left.terms.items():
            for v, cv in right.terms.items():
                c = cu * cv
                prev = out.get((u, v))
                s = c if prev is None else prev + c
                if s.is_zero():
                    out.pop((u, v), None)
                else:
                    out[(u, v)] = s
        return TensorPoly(out)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, TensorPoly) and self.terms == other.terms

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s
        return TensorPoly(out)

    def __neg__(self):
        return TensorPoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = _coerce_scalar(c)
        if c.is_zero():
            return TensorPoly()
        return TensorPoly({k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Scalar)):
            return self.scale(other)
        out = {}
        for (u1, v1), c1 in self.terms.items():
            for (u2, v2), c2 in other.terms.items():
                k = (u1 + u2, v1 + v2)
                c = c1 * c2
                s = out.get(k)
                s = c if s is None else s + c
                if s.is_zero():
                    out.pop(k, None)
                else:
                    out[k] = s
        return TensorPoly(out)

    __rmul__ = scale

    def map_slots(self, f1, f2):
        """Apply NCPoly-valued maps to the two slots and expand bilinearly."""
        out = TensorPoly()
        for (u, v), c in self.terms.items():
            out = out + TensorPoly.of(f1(u), f2(v)).scale(c)
        return out

    def __repr__(self):
        from .parser import format_tensor
        return f"TensorPoly({format_tensor(self)})"


def tensor_mul(t1, t2, alphabet=None):
    if alphabet is not None:
        for t in (t1, t2):
            for (u, v) in t.terms:
                alphabet.check_word(u)
                alphabet.check_word(v)
    return t1 * t2


# ---------------------------------------------------------------------------
# CompositeOrder
# ---------------------------------------------------------------------------

CROSS_KEYS = ("h_letter_count", "misordering_count", "length", "lex_by_precedence")
DEGLEX_KEYS = ("length", "lex_by_precedence")

# Default block ranks: normal words put H left of the A-family, and the first
# braided factor left of the second.
DEFAULT_BLOCK_RANKS = {"H": 0, "A": 1, "A1": 1, "A2": 2}


class CompositeOrder:
    """Strict total order on words, staged by the configured keys.

    kind 'cross' uses (h_letter_count, misordering_count, length, lex);
    the misordering count is the number of block-rank inversions, which for
    presentations with blocks H and A is exactly the number of A-letters
    occurring left of an H-letter.  kind 'deglex' uses (length, lex).
    """

    def __init__(self, alphabet, kind="cross", block_ranks=None):
        if kind not in ("cross", "deglex"):
            raise ValueError(f"unknown order kind {kind!r}")
        self.alphabet = alphabet
        self.kind = kind
        self.keys = CROSS_KEYS if kind == "cross" else DEGLEX_KEYS
        ranks = dict(DEFAULT_BLOCK_RANKS)
        if block_ranks:
            ranks.update(block_ranks)
        self.block_ranks = ranks
        self._prec = {g.name: g.prec for g in alphabet.gens}
        self._rank = {g.name: ranks[g.block] for g in alphabet.gens}
        self._is_h = {g.name: g.block == "H" for g in alphabet.gens}

    # -- key pieces
    def h_count(self, word):
        is_h = self._is_h
        return sum(1 for x in word if is_h[x])

    def rank_counts(self, word):
        counts = {}
        rank = self._rank
        for x in word:
            r = rank[x]
            counts[r] = counts.get(r, 0) + 1
        return counts

    def misordering(self, word):
        """Number of letter pairs (i<j) with rank(w[i]) > rank(w[j])."""
        rank = self._rank
        inv = 0
        seen = {}
        for x in word:
            r = rank[x]
            for r2, n in seen.items():
                if r2 > r:
                    inv += n
            seen[r] = seen.get(r, 0) + 1
        return inv

    def prec_tuple(self, word):
        prec = self._prec
        return tuple(prec[x] for x in word)

    def sort_key(self, word):
        self.alphabet.check_word(word)
        if self.kind == "cross":
            return (self.h_count(word), self.misordering(word), len(word), self.prec_tuple(word))
        return (len(word), self.prec_tuple(word))

    def compare(self, w1, w2):
        """-1, 0 or 1; 0 only for identical words."""
        k1, k2 = self.sort_key(w1), self.sort_key(w2)
        if k1 < k2:
            return -1
        if k1 > k2:
            return 1
        return 0

    def lex_less(self, w1, w2):
        return self.prec_tuple(w1) < self.prec_tuple(w2)

    # -- admissibility
    def strictly_decreases(self, new_word, old_word):
        """True iff u·new·v < u·old·v for every context (u, v).

        This is the staged, context-uniform decrease required of rewrite
        rules; the extra context terms only enter through the misordering
        key, whose change in context (u, v) is
        inv(new)-inv(old) + sum_r c_r(u)*A_r + sum_r c_r(v)*B_r with
        A_r = sum_{s<r} dn_s and B_r = sum_{s>r} dn_s.
        """
        if self.kind == "deglex":
            dlen = len(new_word) - len(old_word)
            if dlen < 0:
                return True
            if dlen > 0:
                return False
            return self.lex_less(new_word, old_word)

        dh = self.h_count(new_word) - self.h_count(old_word)
        if dh < 0:
            return True
        if dh > 0:
            return False
        n_new = self.rank_counts(new_word)
        n_old = self.rank_counts(old_word)
        ranks = sorted(set(self.block_ranks.values()))
        dn = {r: n_new.get(r, 0) - n_old.get(r, 0) for r in ranks}
        for r in ranks:
            a_r = sum(dn[s] for s in ranks if s < r)
            b_r = sum(dn[s] for s in ranks if s > r)
            if a_r > 0 or b_r > 0:
                return False
        dinv = self.misordering(new_word) - self.misordering(old_word)
        if dinv > 0:
            return False
        if dinv < 0:
            return True
        dlen = len(new_word) - len(old_word)
        if dlen < 0:
            return True
        if dlen > 0:
            return False
        return self.lex_less(new_word, old_word)

    def __repr__(self):
        return f"CompositeOrder(kind={self.kind!r})"


def compare(order, w1, w2):
    """Spec-level comparison entry point."""
    return order.compare(w1, w2)
