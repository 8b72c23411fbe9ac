"""Right module-algebra actions: tables, extensions, and axiom checks.

The table stores one entry per (acted letter, H letter) pair; products in the
module algebra split through iterated coproducts, and H words act by
iterated single-letter actions.  Inverse-letter entries can be derived from
the cancellation constraints, and the adjoint extension turns a cross
product into an H-module algebra over itself.
"""

from __future__ import annotations

from .scalars import Scalar
from .ncpoly import NCPoly, EMPTY_WORD
from .hopf import MissingTableEntry
from .reports import Report

__all__ = [
    "ActionTable",
    "ActionError",
    "act_word",
    "act_poly",
    "check_module_algebra",
    "derive_inverse_action",
    "extend_action_adjoint",
    "trivial_action",
]


class ActionError(ValueError):
    pass


class ActionTable:
    """Map (acted letter, H letter) -> NCPoly over the acted alphabet."""

    def __init__(self, entries):
        self.entries = {k: v for k, v in entries.items()}

    def get(self, a, g):
        e = self.entries.get((a, g))
        if e is None:
            raise MissingTableEntry("action", (a, g))
        return e

    def with_entries(self, extra):
        merged = dict(self.entries)
        merged.update(extra)
        return ActionTable(merged)

    def acted_letters(self):
        return sorted({a for a, _ in self.entries})

    def items(self):
        return self.entries.items()

    def __eq__(self, other):
        return isinstance(other, ActionTable) and self.entries == other.entries


def trivial_action(acted_letters, h):
    """a <| g := counit(g) * a."""
    entries = {}
    for a in acted_letters:
        for g in h.h_letters():
            entries[(a, g)] = NCPoly.from_gen(a).scale(h.counit[g])
    return ActionTable(entries)


def act_word_letter(word, g, table, h, module):
    """(a_1 ... a_n) <| g via the (n-1)-fold coproduct of g; reduced."""
    if not word:
        return NCPoly.from_scalar(h.counit_word((g,)))
    if len(word) == 1:
        return module.normal_form(table.get(word[0], g))
    slots = h.iterated_coproduct((g,), len(word))
    out = NCPoly.zero()
    for slot_words, c in slots.items():
        prod = NCPoly.one()
        for letter, hw in zip(word, slot_words):
            factor = _act_letter_word(letter, hw, table, h, module)
            if factor.is_zero():
                prod = NCPoly.zero()
                break
            prod = prod * factor
        if not prod.is_zero():
            out = out + prod.scale(c)
    return module.normal_form(out)


def _act_letter_word(letter, hw, table, h, module):
    """Single acted letter under an H word: iterate a <| (g g') = (a <| g) <| g'."""
    cur = NCPoly.from_gen(letter)
    for g in hw:
        cur = act_poly(cur, (g,), table, h, module)
        if cur.is_zero():
            break
    return cur


def act_poly(e, hw, table, h, module):
    """Extension of the table to polynomials and H words; result reduced."""
    cur = e
    for g in hw:
        out = NCPoly.zero()
        for w, c in cur.terms.items():
            out = out + act_word_letter(w, g, table, h, module).scale(c)
        cur = out
        if cur.is_zero():
            break
    return module.normal_form(cur)


def check_module_algebra(module, h, table):
    """Eq-style module-algebra laws as a diagnostic report.

    (i) every module rule is killed by every H generator;
    (ii) acting by an H rule's two sides agrees on every acted letter;
    (iii) the unit of H acts as the identity.
    """
    from .parser import format_word
    report = Report(check="module-algebra")
    acted = table.acted_letters()
    for r in module.rules:
        diff = NCPoly({r.lhs: 1}) - r.rhs
        for g in h.h_letters():
            res = act_poly(diff, (g,), table, h, module)
            report.add_zero_check(
                f"rule-{format_word(r.lhs)}-acted-{g}", res,
                context=f"({format_word(r.lhs)} - rhs) <| {g}", order=module.order)
    for r in h.base.rules:
        for a in acted:
            lhs_act = act_poly(NCPoly.from_gen(a), r.lhs, table, h, module)
            rhs_act = NCPoly.zero()
            for w, c in r.rhs.terms.items():
                rhs_act = rhs_act + act_poly(NCPoly.from_gen(a), w, table, h, module).scale(c)
            report.add_zero_check(
                f"hrule-{format_word(r.lhs)}-on-{a}",
                module.normal_form(lhs_act - rhs_act),
                context=f"{a} <| ({format_word(r.lhs)})", order=module.order)
    for a in acted:
        res = act_poly(NCPoly.from_gen(a), EMPTY_WORD, table, h, module) - NCPoly.from_gen(a)
        report.add_zero_check(f"unit-acts-trivially-{a}", module.normal_form(res),
                              context=a, order=module.order)
    return report


def derive_inverse_action(table, gen_name, h, module):
    """Table entries for the inverse of gen_name forced by cancellation.

    Solves 1 <| g = counit(g) with Eq-(coproduct) splitting, letter by
    letter: group-like g need the image of gen_name to be an invertible
    monomial; otherwise the only unknown-carrying coproduct term must be
    1 (x) g.
    """
    gen = module.alphabet[gen_name]
    if gen.inverse_of is None:
        raise ActionError(f"{gen_name!r} has no declared inverse")
    inv = gen.inverse_of
    known = dict(table.entries)
    pending = list(h.h_letters())
    derived = {}
    progress = True
    while pending and progress:
        progress = False
        for g in list(pending):
            delta = h.coproduct_word((g,))
            is_group_like = delta.terms == {((g,), (g,)): Scalar.from_int(1)}
            if is_group_like:
                img = module.normal_form(table.get(gen_name, g))
                inv_img = _invert_monomial(img, module)
                if inv_img is None:
                    raise ActionError(
                        f"cannot invert {gen_name} <| {g}; action not extendable")
                derived[(inv, g)] = inv_img
                known[(inv, g)] = inv_img
                pending.remove(g)
                progress = True
                continue
            # need: sum over Delta(g) of (gen <| u) (inv <| v) = counit(g).
            # isolate the 1 (x) g term; all other second slots must be known.
            unit_term = None
            rest = []
            solvable = True
            for (u, v), c in delta.terms.items():
                if u == EMPTY_WORD and v == (g,):
                    unit_term = c
                elif all((inv, x) in known for x in v):
                    rest.append(((u, v), c))
                else:
                    solvable = False
                    break
            if not solvable or unit_term is None:
                continue
            acc = NCPoly.from_scalar(h.counit_word((g,)))
            tbl = ActionTable(known)
            for (u, v), c in rest:
                left = _act_letter_word(gen_name, u, tbl, h, module)
                right = _act_letter_word(inv, v, tbl, h, module)
                acc = acc - (left * right).scale(c)
            # unit_term * gen * (inv <| g) = acc  =>  inv <| g = inv * acc / c
            entry = module.normal_form(
                NCPoly.from_gen(inv).scale(unit_term.inverse()) * acc)
            derived[(inv, g)] = entry
            known[(inv, g)] = entry
            pending.remove(g)
            progress = True
    if pending:
        raise ActionError(
            f"cannot derive inverse action for {inv!r} on {pending}; not extendable")
    return derived


def _invert_monomial(e, module):
    """Inverse of c*w when every letter of the single word w is invertible."""
    if len(e.terms) != 1:
        return None
    (word, c), = e.terms.items()
    letters = []
    for x in reversed(word):
        gen = module.alphabet[x]
        if gen.inverse_of is None:
            return None
        letters.append(gen.inverse_of)
    return module.normal_form(NCPoly.from_word(tuple(letters), c.inverse()))


def extend_action_adjoint(cross, h):
    """Adjoint extension: an H letter x acted by g maps to S(g_(1)) x g_(2),
    computed in the cross product; A letters keep their table entries."""
    base_table = cross.action
    pres = cross.base
    entries = dict(base_table.entries)
    h_letters = h.h_letters()
    for x in h_letters:
        for g in h_letters:
            delta = h.coproduct_word((g,))
            total = NCPoly.zero()
            for (u, v), c in delta.terms.items():
                total = total + (h.antipode_word(u) * NCPoly.from_word((x,) + v)).scale(c)
            entries[(x, g)] = pres.normal_form(total)
    return ActionTable(entries)
