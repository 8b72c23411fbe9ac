"""Hopf-algebra structure on a presentation: coproduct, counit, antipode.

Tables are input data on generators; extensions to arbitrary elements follow
multiplicativity (coproduct, counit) and antimultiplicativity (antipode).
check_hopf_axioms certifies the tables rather than trusting them.
"""

from __future__ import annotations

from .scalars import Scalar
from .ncpoly import NCPoly, TensorPoly, EMPTY_WORD
from .reports import Check, Report

__all__ = ["MissingTableEntry", "HopfData", "check_hopf_axioms"]


class MissingTableEntry(KeyError):
    def __init__(self, table, key):
        super().__init__(f"no {table} entry for {key!r}")
        self.table = table
        self.key = key


class HopfData:
    """Presentation of block-H letters plus coproduct/counit/antipode tables."""

    def __init__(self, base, coproduct, counit, antipode):
        self.base = base
        self.coproduct = dict(coproduct)
        self.counit = dict(counit)
        self.antipode = dict(antipode)
        for g in self.h_letters():
            if g not in self.coproduct:
                raise MissingTableEntry("coproduct", g)
            if g not in self.counit:
                raise MissingTableEntry("counit", g)
            if g not in self.antipode:
                raise MissingTableEntry("antipode", g)

    def h_letters(self):
        return self.base.alphabet.letters_of_block("H")

    # -- coproduct ---------------------------------------------------------
    def coproduct_word(self, w):
        """Multiplicative extension, both slots reduced to normal form."""
        out = TensorPoly.one()
        for letter in w:
            t = self.coproduct.get(letter)
            if t is None:
                raise MissingTableEntry("coproduct", letter)
            out = out * t
        return self._reduce_tensor(out)

    def coproduct_poly(self, e):
        out = TensorPoly()
        for w, c in e.terms.items():
            out = out + self.coproduct_word(w).scale(c)
        return out

    def _reduce_tensor(self, t):
        nf = self.base.normal_form
        out = TensorPoly()
        for (u, v), c in t.terms.items():
            out = out + TensorPoly.of(nf(NCPoly({u: 1})), nf(NCPoly({v: 1}))).scale(c)
        return out

    def iterated_coproduct(self, w, slots):
        """(slots-1)-fold coproduct of a word: dict[tuple of words -> Scalar]."""
        if slots < 1:
            raise ValueError("need at least one slot")
        out = {(tuple(w),): Scalar.from_int(1)}
        for i in range(slots - 1):
            nxt = {}
            for words, c in out.items():
                # expand the last slot; Sweedler sums are coassociative so the
                # choice of slot is immaterial (and is itself axiom-checked)
                head = words[:-1]
                t = self.coproduct_word(words[-1])
                for (u, v), c2 in t.terms.items():
                    key = head + (u, v)
                    s = nxt.get(key)
                    cc = c * c2
                    s = cc if s is None else s + cc
                    if s.is_zero():
                        nxt.pop(key, None)
                    else:
                        nxt[key] = s
            out = nxt
        return out

    # -- counit -------------------------------------------------------------
    def counit_word(self, w):
        c = Scalar.from_int(1)
        for letter in w:
            e = self.counit.get(letter)
            if e is None:
                raise MissingTableEntry("counit", letter)
            c = c * e
            if c.is_zero():
                break
        return c

    def counit_poly(self, e):
        total = Scalar.from_int(0)
        for w, c in e.terms.items():
            total = total + c * self.counit_word(w)
        return total

    # -- antipode -------------------------------------------------------------
    def antipode_word(self, w):
        out = NCPoly.one()
        for letter in reversed(w):
            s = self.antipode.get(letter)
            if s is None:
                raise MissingTableEntry("antipode", letter)
            out = out * s
        return self.base.normal_form(out)

    def antipode_poly(self, e):
        out = NCPoly.zero()
        for w, c in e.terms.items():
            out = out + self.antipode_word(w).scale(c)
        return self.base.normal_form(out)

    # -- subalgebras -------------------------------------------------------------
    def is_closed_subset(self, names):
        """True when coproduct/antipode tables stay inside the subset."""
        keep = set(names)
        for g in keep:
            gen = self.base.alphabet[g]
            if gen.inverse_of is not None and gen.inverse_of not in keep:
                return False
            for (u, v) in self.coproduct[g].terms:
                if not (set(u) <= keep and set(v) <= keep):
                    return False
            if not self.antipode[g].letters() <= keep:
                return False
        return True

    def restrict(self, names, name=None):
        """Hopf data on a closed subset of generators (e.g. a Borel half)."""
        keep = set(names)
        if not self.is_closed_subset(keep):
            raise ValueError(f"subset {sorted(keep)} is not closed under the Hopf tables")
        sub = self.base.restrict(keep, name=name)
        return HopfData(
            sub,
            {g: self.coproduct[g] for g in keep},
            {g: self.counit[g] for g in keep},
            {g: self.antipode[g] for g in keep},
        )


def _apply_delta_slot(h, terms3, slot):
    """Apply the coproduct to one slot of a dict[word-tuples -> Scalar]."""
    out = {}
    for words, c in terms3.items():
        t = h.coproduct_word(words[slot])
        for (u, v), c2 in t.terms.items():
            key = words[:slot] + (u, v) + words[slot + 1:]
            s = out.get(key)
            cc = c * c2
            s = cc if s is None else s + cc
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s
    return out


def check_hopf_axioms(h):
    """Verify coassociativity, counit and antipode laws on every generator,
    and that coproduct/counit/antipode respect every defining rule."""
    from .parser import format_poly, format_word, format_tensor
    base = h.base
    nf = base.normal_form
    report = Report(check="hopf-axioms")

    for g in h.h_letters():
        word = (g,)
        delta = h.coproduct_word(word)
        # coassociativity
        left = _apply_delta_slot(h, delta.terms, 0)
        right = _apply_delta_slot(h, delta.terms, 1)
        diff = dict(left)
        for k, c in right.items():
            s = diff.get(k)
            s = -c if s is None else s - c
            if s.is_zero():
                diff.pop(k, None)
            else:
                diff[k] = s
        if diff:
            expr = "; ".join(
                f"{format_word(u)} (x) {format_word(v)} (x) {format_word(w)}"
                for (u, v, w) in sorted(diff))
            report.add(f"coassoc-{g}", "fail",
                       [{"context": g, "expression": expr}])
        else:
            report.add(f"coassoc-{g}", "pass")
        # counit laws
        left_cu = NCPoly.zero()
        right_cu = NCPoly.zero()
        for (u, v), c in delta.terms.items():
            left_cu = left_cu + NCPoly({v: c * h.counit_word(u)})
            right_cu = right_cu + NCPoly({u: c * h.counit_word(v)})
        target = nf(NCPoly({word: 1}))
        report.add_zero_check(f"counit-left-{g}", nf(left_cu) - target, context=g,
                              order=base.order)
        report.add_zero_check(f"counit-right-{g}", nf(right_cu) - target, context=g,
                              order=base.order)
        # antipode laws
        conv_left = NCPoly.zero()
        conv_right = NCPoly.zero()
        for (u, v), c in delta.terms.items():
            conv_left = conv_left + (h.antipode_word(u) * NCPoly({v: 1})).scale(c)
            conv_right = conv_right + (NCPoly({u: 1}) * h.antipode_word(v)).scale(c)
        eps = NCPoly.from_scalar(h.counit_word(word))
        report.add_zero_check(f"antipode-left-{g}", nf(conv_left) - eps, context=g,
                              order=base.order)
        report.add_zero_check(f"antipode-right-{g}", nf(conv_right) - eps, context=g,
                              order=base.order)

    for r in base.rules:
        tag = format_word(r.lhs)
        lhs_poly = NCPoly({r.lhs: 1})
        # coproduct is an algebra map iff it kills every rule
        d = h.coproduct_poly(lhs_poly) - h.coproduct_poly(r.rhs)
        d = h._reduce_tensor(d)
        if d.is_zero():
            report.add(f"coproduct-rule-{tag}", "pass")
        else:
            report.add(f"coproduct-rule-{tag}", "fail",
                       [{"context": tag, "expression": format_tensor(d, base.order)}])
        # counit is an algebra map
        ce = h.counit_poly(lhs_poly) - h.counit_poly(r.rhs)
        if ce.is_zero():
            report.add(f"counit-rule-{tag}", "pass")
        else:
            from .parser import format_scalar
            report.add(f"counit-rule-{tag}", "fail",
                       [{"context": tag, "expression": format_scalar(ce)}])
        # antipode consistency (antihomomorphism descends to the quotient)
        sa = nf(h.antipode_poly(lhs_poly) - h.antipode_poly(r.rhs))
        report.add_zero_check(f"antipode-rule-{tag}", sa, context=tag, order=base.order)

    return report
