"""Realization maps, decoupling maps, and the verification tool-kit.

The decoupled image of an H generator g is g_(1) phi(S g_(2)), computed in
the cross product and certified to commute with the module algebra.  The
bounded-degree decomposition and centralizer computations run exact linear
algebra over Q(q, eta) on normal-word coordinates.
"""

from __future__ import annotations

from .scalars import Scalar
from .ncpoly import NCPoly, EMPTY_WORD
from .reports import Report
from .actions import act_poly

__all__ = [
    "DecoupleError",
    "RealizationMap",
    "DecoupledGenerator",
    "check_realization",
    "zeta",
    "zeta_poly",
    "check_commutant",
    "check_identity",
    "check_central",
    "verify_decomposition",
    "centralizer_basis",
    "in_span",
    "check_unbraiding",
    "LinearSpan",
]


class DecoupleError(RuntimeError):
    pass


class RealizationMap:
    """Algebra map from a cross product into its module algebra, fixing it.

    images holds the values on the H-side letters; letters of the codomain
    map to themselves when fixes_A is set.  The image of an inverse letter
    may be derived automatically when its partner's image is an invertible
    monomial.
    """

    def __init__(self, images, domain, codomain, fixes_A=True):
        self.domain = domain
        self.codomain = codomain
        self.fixes_A = fixes_A
        self.images = dict(images)
        self._fill_inverse_images()
        self.verified = False

    def _fill_inverse_images(self):
        from .actions import _invert_monomial
        for g in self.domain.alphabet:
            if g.name in self.images or g.inverse_of is None:
                continue
            partner = self.images.get(g.inverse_of)
            if partner is None:
                continue
            inv = _invert_monomial(self.codomain.normal_form(partner), self.codomain)
            if inv is None:
                raise DecoupleError(
                    f"image of {g.inverse_of!r} is not an invertible monomial; "
                    f"cannot derive the image of {g.name!r}")
            self.images[g.name] = inv

    def image_of_letter(self, name):
        img = self.images.get(name)
        if img is not None:
            return img
        if self.fixes_A and name in self.codomain.alphabet:
            return NCPoly.from_gen(name)
        raise DecoupleError(f"no realization image for letter {name!r}")

    def apply(self, e):
        """Image of a domain polynomial, reduced in the codomain."""
        out = NCPoly.zero()
        for w, c in e.terms.items():
            prod = NCPoly.one()
            for letter in w:
                prod = prod * self.image_of_letter(letter)
            out = out + prod.scale(c)
        return self.codomain.normal_form(out)


def check_realization(phi):
    """Morphism check: every defining rule of the domain maps to an identity
    of the codomain; letterwise identity on the fixed subalgebra."""
    from .parser import format_word
    report = Report(check="realization")
    if phi.fixes_A:
        for name in phi.codomain.alphabet.names():
            img = phi.image_of_letter(name)
            report.add_zero_check(
                f"fixes-{name}", img - NCPoly.from_gen(name),
                context=name, order=phi.codomain.order)
    for r in phi.domain.rules:
        residual = phi.apply(NCPoly({r.lhs: 1})) - phi.apply(r.rhs)
        residual = phi.codomain.normal_form(residual)
        report.add_zero_check(
            f"rule-{format_word(r.lhs)}", residual,
            context=format_word(r.lhs), order=phi.codomain.order)
    if report.passed:
        phi.verified = True
    return report


class DecoupledGenerator:
    """An H generator together with its commutant image in the cross product."""

    __slots__ = ("source", "image")

    def __init__(self, source, image):
        self.source = source
        self.image = image

    def __repr__(self):
        from .parser import format_poly
        return f"DecoupledGenerator({self.source} -> {format_poly(self.image)})"


def zeta(gen_name, phi, h, cross, check=True):
    """Decoupled image zeta(g) = g_(1) phi(S g_(2)), reduced in the cross
    product; the commutant property against every codomain letter is checked
    before returning."""
    base = cross.base if hasattr(cross, "base") else cross
    delta = h.coproduct_word((gen_name,))
    total = NCPoly.zero()
    for (u, v), c in delta.terms.items():
        s_v = h.antipode_word(v)
        phi_sv = phi.apply(s_v)
        total = total + (NCPoly.from_word(u) * phi_sv).scale(c)
    image = base.normal_form(total)
    dg = DecoupledGenerator(gen_name, image)
    if check:
        rep = check_commutant([image], phi.codomain.alphabet.names(), base,
                              names=[gen_name])
        if not rep.passed:
            fail = rep.failures()[0]
            raise DecoupleError(
                f"zeta({gen_name}) does not commute: {fail.residuals[0]['expression']}")
    return dg


def zeta_poly(e, zetas, cross):
    """Multiplicative extension of zeta along an H polynomial.

    zetas maps source letters to their decoupled images.
    """
    base = cross.base if hasattr(cross, "base") else cross
    out = NCPoly.zero()
    for w, c in e.terms.items():
        prod = NCPoly.one()
        for letter in w:
            if letter not in zetas:
                raise DecoupleError(f"no decoupled image for {letter!r}")
            prod = prod * zetas[letter]
        out = out + prod.scale(c)
    return base.normal_form(out)


def check_commutant(elems, others, p, names=None):
    """All commutators [elem, letter] reduce to zero."""
    from .parser import format_poly
    report = Report(check="commutant")
    for k, e in enumerate(elems):
        label = names[k] if names else f"elem{k}"
        for x in others:
            res = p.normal_form(e * NCPoly.from_gen(x) - NCPoly.from_gen(x) * e)
            report.add_zero_check(f"[{label},{x}]", res,
                                  context=f"[{label}, {x}]", order=p.order)
    return report


def check_identity(lhs, rhs, p):
    """Normal form of lhs - rhs; the zero polynomial means the identity holds."""
    return p.normal_form(lhs - rhs)


def check_central(e, p, name="element"):
    """Commutators of e with every generator of p."""
    return check_commutant([e], p.alphabet.names(), p, names=[name])


# ---------------------------------------------------------------------------
# exact linear algebra over Q(q, eta)
# ---------------------------------------------------------------------------

class LinearSpan:
    """Incremental row echelon over Scalar coordinates indexed by words."""

    def __init__(self, order):
        self.order = order
        self.rows = {}           # pivot word -> {word: Scalar} with pivot coeff 1

    def _reduce(self, vec):
        vec = dict(vec)
        while vec:
            pivot = max(vec, key=self.order.sort_key)
            row = self.rows.get(pivot)
            if row is None:
                return vec, pivot
            c = vec[pivot]
            for w, v in row.items():
                s = vec.get(w)
                s = -(v * c) if s is None else s - v * c
                if s.is_zero():
                    vec.pop(w, None)
                else:
                    vec[w] = s
        return vec, None

    def add(self, vec):
        """Insert a vector; True if it extended the span."""
        rem, pivot = self._reduce(vec)
        if pivot is None:
            return False
        inv = rem[pivot].inverse()
        self.rows[pivot] = {w: c * inv for w, c in rem.items()}
        return True

    def contains(self, vec):
        rem, pivot = self._reduce(vec)
        return pivot is None

    @property
    def rank(self):
        return len(self.rows)


def _formal_words(letters, length):
    if length == 0:
        yield EMPTY_WORD
        return
    for w in _formal_words(letters, length - 1):
        for x in letters:
            yield w + (x,)


def verify_decomposition(cross, zetas, degree_bound, window=None, report_name=None,
                         early_stop=True):
    """Bounded-degree decomposition check by exact rank comparison.

    zetas is one group (Theorem-1 style) or an ordered sequence of groups
    (Theorem-2 style: the product is zeta-group-1 word, then group-2 word,
    then a module-algebra word).  Formal zeta words run over the normal words
    of the corresponding H sub-presentation; products are enumerated up to
    total letter length degree_bound + window, where a zeta letter counts 1.
    The check passes when every cross normal word of length <= degree_bound
    lies in the span.
    """
    from .parser import format_word
    base = cross.base if hasattr(cross, "base") else cross
    groups = list(zetas)
    if groups and isinstance(groups[0], DecoupledGenerator):
        groups = [groups]
    image_len = max((max((len(w) for w in dg.image.terms), default=1)
                     for grp in groups for dg in grp), default=1)
    if window is None:
        window = 2 * image_len
    budget = degree_bound + window

    a_letters = [g.name for g in base.alphabet if g.block != "H"]
    targets = base.normal_words(degree_bound)

    # formal zeta words per group, indexed by length: normal words of the
    # H sub-presentation spanned by the group's source letters
    group_words = []
    for grp in groups:
        sources = [dg.source for dg in grp]
        sub = base.restrict([g for g in sources])
        by_len = {}
        for w in sub.normal_words(min(budget, degree_bound)):
            by_len.setdefault(len(w), []).append(w)
        group_words.append((by_len, {dg.source: dg.image for dg in grp}))

    span = LinearSpan(base.order)
    outstanding = set(targets)

    def _sync_outstanding():
        done = [t for t in outstanding if span.contains({t: Scalar.from_int(1)})]
        outstanding.difference_update(done)
        return not outstanding

    a_words_by_len = {}
    for w in base.normal_words(budget, letters=a_letters):
        a_words_by_len.setdefault(len(w), []).append(w)

    def _zeta_combos(total_zeta_len):
        """All ways to split total_zeta_len across the ordered groups."""
        def rec(i, remaining, acc):
            if i == len(group_words):
                if remaining == 0:
                    yield tuple(acc)
                return
            by_len, _ = group_words[i]
            for l, words in by_len.items():
                if l <= remaining:
                    for w in words:
                        acc.append(w)
                        yield from rec(i + 1, remaining - l, acc)
                        acc.pop()
        yield from rec(0, total_zeta_len, [])

    products_tried = 0
    added_since_sync = 0
    done = False
    znf_cache = {}
    for tier in range(0, budget + 1):
        if done:
            break
        for j in range(0, tier + 1):
            if done:
                break
            a_len = tier - j
            if a_len not in a_words_by_len:
                continue
            for zparts in _zeta_combos(j):
                if done:
                    break
                znf = znf_cache.get(zparts)
                if znf is None:
                    zimage = NCPoly.one()
                    for gi, zw in enumerate(zparts):
                        imgs = group_words[gi][1]
                        for letter in zw:
                            zimage = zimage * imgs[letter]
                    znf = base.normal_form(zimage)
                    znf_cache[zparts] = znf
                if znf.is_zero():
                    continue
                for aw in a_words_by_len[a_len]:
                    prod = base.normal_form(znf * NCPoly.from_word(aw))
                    products_tried += 1
                    if span.add(prod.terms):
                        added_since_sync += 1
                    if early_stop and added_since_sync >= 25:
                        added_since_sync = 0
                        if _sync_outstanding():
                            done = True
                            break
    _sync_outstanding()

    report = Report(check=report_name or "decomposition")
    report.meta.update({
        "degree_bound": degree_bound,
        "window": window,
        "products_enumerated": products_tried,
        "span_rank": span.rank,
        "targets": len(targets),
    })
    if outstanding:
        witness = min(outstanding, key=base.order.sort_key)
        report.add("span-covers-normal-words", "fail", [{
            "context": f"degree<={degree_bound}",
            "expression": f"normal word not in span: {format_word(witness)}",
        }], covered=len(targets) - len(outstanding))
    else:
        report.add("span-covers-normal-words", "pass",
                   covered=len(targets))
    return report


def centralizer_basis(p, subset, degree_bound):
    """Basis of the degree-bounded centralizer of the given letters.

    Exact nullspace over Q(q, eta): unknowns are coefficients of the normal
    words of length <= degree_bound; constraints are the commutators with
    every letter of subset.
    """
    base = p.base if hasattr(p, "base") else p
    words = base.normal_words(degree_bound)
    index = {w: i for i, w in enumerate(words)}
    n = len(words)
    # constraint rows: dict[var index -> Scalar]
    rows = []
    for g in subset:
        columns = []
        for w in words:
            com = base.normal_form(
                NCPoly.from_word(w) * NCPoly.from_gen(g)
                - NCPoly.from_gen(g) * NCPoly.from_word(w))
            columns.append(com.terms)
        out_words = sorted({ow for col in columns for ow in col},
                           key=base.order.sort_key)
        for ow in out_words:
            row = {}
            for i, col in enumerate(columns):
                c = col.get(ow)
                if c is not None and not c.is_zero():
                    row[i] = c
            if row:
                rows.append(row)
    # gaussian elimination to reduced row echelon form over variable indices
    pivots = {}
    for row in rows:
        row = dict(row)
        while row:
            j = min(row)
            if j not in pivots:
                inv = row[j].inverse()
                pivots[j] = {k: v * inv for k, v in row.items()}
                break
            lead = row[j]
            for k, v in pivots[j].items():
                s = row.get(k)
                s = -(v * lead) if s is None else s - v * lead
                if s.is_zero():
                    row.pop(k, None)
                else:
                    row[k] = s
    # back-substitute to make the echelon reduced
    for j in sorted(pivots, reverse=True):
        for i in list(pivots):
            if i == j:
                continue
            row = pivots[i]
            c = row.get(j)
            if c is None or c.is_zero():
                continue
            for k, v in pivots[j].items():
                s = row.get(k)
                s = -(v * c) if s is None else s - v * c
                if s.is_zero():
                    row.pop(k, None)
                else:
                    row[k] = s
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for f in free:
        vec = {f: Scalar.from_int(1)}
        for j, row in pivots.items():
            c = row.get(f)
            if c is not None and not c.is_zero():
                vec[j] = -c
        poly = NCPoly({words[i]: c for i, c in vec.items()})
        basis.append(poly)
    basis.sort(key=lambda e: base.order.sort_key(
        max(e.terms, key=base.order.sort_key)))
    return basis


def in_span(vec_poly, basis, order):
    """Exact membership of a polynomial in the span of basis polynomials."""
    span = LinearSpan(order)
    for b in basis:
        span.add(b.terms)
    return span.contains(vec_poly.terms)


def check_unbraiding(chi, br, degree_bound=None):
    """Theorem-3 checks for an unbraiding table chi: factor-2 letters to
    elements of the braided product.

    (i) morphism: every factor-2 rule maps to an identity;
    (ii) commutant: [chi(a2), a1] = 0 for all letter pairs;
    (iii) optional bounded-degree spanning of the braided product by
          factor1-word * chi-image products.
    """
    from .parser import format_word, format_poly
    base = br.base
    report = Report(check="unbraiding")

    def chi_poly(e):
        out = NCPoly.zero()
        for w, c in e.terms.items():
            prod = NCPoly.one()
            for letter in w:
                img = chi.get(letter)
                if img is None:
                    raise DecoupleError(f"no chi entry for {letter!r}")
                prod = prod * img
            out = out + prod.scale(c)
        return base.normal_form(out)

    for r in br.factor2.rules:
        residual = base.normal_form(chi_poly(NCPoly({r.lhs: 1})) - chi_poly(r.rhs))
        report.add_zero_check(f"morphism-{format_word(r.lhs)}", residual,
                              context=format_word(r.lhs), order=base.order)
    for a2 in br.factor2.alphabet.names():
        img = base.normal_form(chi.get(a2, NCPoly.from_gen(a2)))
        for a1 in br.factor1.alphabet.names():
            res = base.normal_form(img * NCPoly.from_gen(a1)
                                   - NCPoly.from_gen(a1) * img)
            report.add_zero_check(f"commutant-[chi({a2}),{a1}]", res,
                                  context=f"[chi({a2}), {a1}]", order=base.order)
    if degree_bound is not None:
        span = LinearSpan(base.order)
        a1_letters = br.factor1.alphabet.names()
        a2_letters = br.factor2.alphabet.names()
        image_len = max((max((len(w) for w in chi[x].terms), default=1)
                         for x in a2_letters if x in chi), default=1)
        budget = degree_bound + 2 * image_len
        a1_words = br.factor1.normal_words(budget)
        a2_words = br.factor2.normal_words(budget)
        targets = base.normal_words(degree_bound)
        outstanding = set(targets)
        for w1 in a1_words:
            for w2 in a2_words:
                if len(w1) + len(w2) > budget:
                    continue
                img = chi_poly(NCPoly.from_word(w2))
                prod = base.normal_form(NCPoly.from_word(w1) * img)
                if span.add(prod.terms):
                    outstanding = {t for t in outstanding
                                   if not span.contains({t: Scalar.from_int(1)})}
                    if not outstanding:
                        break
            if not outstanding:
                break
        if outstanding:
            witness = min(outstanding, key=base.order.sort_key)
            report.add("spanning", "fail", [{
                "context": f"degree<={degree_bound}",
                "expression": f"normal word not in span: {format_word(witness)}",
            }])
        else:
            report.add("spanning", "pass", covered=len(targets))
    return report
