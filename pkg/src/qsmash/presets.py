"""Bundled, pre-verified presentations and map tables.

Loading a bundle re-runs admissibility (at construction), local confluence,
Hopf-axiom and module-algebra checks; a bundle failing any of them raises.
Bundles are plain text in the same formats users write.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .ncpoly import Alphabet
from .rewrite import Rule, Presentation, critical_pairs
from .hopf import HopfData, check_hopf_axioms
from .actions import ActionTable, check_module_algebra
from .products import CrossPresentation, BraidedPresentation
from .decouple import RealizationMap
from .parser import parse_bundle_file

__all__ = ["PresetError", "PresetBundle", "load_preset", "preset_path",
           "list_expected_identities", "PRESET_FILES", "PRESET_ALIASES"]

PRESETS_DIR = Path(__file__).parent / "presets"

PRESET_FILES = {
    "uq_so3": "uq_so3.alg",
    "rq3": "rq3.alg",
    "rq3_cross": "rq3_cross.bundle",
    "rq3_sphere_cross": "rq3_sphere_cross.bundle",
    "classical_so3_weyl": "classical_so3_weyl.bundle",
    "trivial_braided": "trivial_braided.bundle",
    "phi_variants": "phi_variants.map",
}

PRESET_ALIASES = {
    "classical": "classical_so3_weyl",
    "sphere": "rq3_sphere_cross",
}


class PresetError(RuntimeError):
    pass


@dataclass
class PresetBundle:
    name: str
    presentation: Presentation
    algebra: Presentation | None = None
    hopf: HopfData | None = None
    action: ActionTable | None = None
    cross: CrossPresentation | None = None
    braided: BraidedPresentation | None = None
    subalgebras: dict = field(default_factory=dict)
    realizations: dict = field(default_factory=dict)   # (variant, tag) -> RealizationMap
    chi: dict = field(default_factory=dict)            # letter -> NCPoly
    identities: list = field(default_factory=list)     # (tag, lhs_str, rhs_str)
    validation: dict = field(default_factory=dict)     # check name -> Report

    def variants(self):
        return sorted({v for (v, _t) in self.realizations})

    def realization(self, variant, tag):
        key = (variant, tag)
        if key not in self.realizations:
            raise PresetError(f"bundle {self.name} has no map variant {key}")
        return self.realizations[key]


def preset_path(name):
    name = PRESET_ALIASES.get(name, name)
    fname = PRESET_FILES.get(name)
    if fname is None:
        raise PresetError(f"unknown preset {name!r}; known: {sorted(PRESET_FILES)}")
    return PRESETS_DIR / fname


def resolve_input_path(path_str):
    """Resolve a user-supplied path, falling back to the packaged presets.

    'presets/rq3.alg', 'rq3.alg' and bare preset names all reach the bundled
    files when no such file exists relative to the working directory.
    """
    p = Path(path_str)
    if p.exists():
        return p
    candidates = [PRESETS_DIR / p.name]
    stem = p.name.split(".")[0]
    if stem in PRESET_ALIASES:
        candidates.append(PRESETS_DIR / (PRESET_FILES[PRESET_ALIASES[stem]]))
    if stem in PRESET_FILES:
        candidates.append(PRESETS_DIR / PRESET_FILES[stem])
    for c in candidates:
        if c.exists():
            return c
    raise FileNotFoundError(path_str)


_CACHE = {}


def load_preset(name, validate=True):
    """Load and fully validate a bundled preset (cached)."""
    name = PRESET_ALIASES.get(name, name)
    key = (name, validate)
    if key in _CACHE:
        return _CACHE[key]
    if name == "phi_variants":
        bundle = _load_phi_variants(validate=validate)
    else:
        bundle = load_bundle_file(preset_path(name), validate=validate, name=name)
    _CACHE[key] = bundle
    return bundle


def load_bundle_file(path, validate=True, name=None, max_overlap=3):
    """Assemble a PresetBundle from a bundle file and validate it."""
    sections = parse_bundle_file(path)
    bname = name or sections.name or Path(path).stem
    alphabet = sections.alphabet()
    order_kind = sections.order_kind or "cross"
    rules = [Rule(lhs, rhs) for lhs, rhs in sections.rules]
    presentation = Presentation(alphabet, rules, order=order_kind, name=bname)
    validation = {}

    if validate:
        conf = critical_pairs(presentation, max_overlap_len=max(
            max_overlap, presentation._max_lhs))
        validation["confluence"] = conf
        if not conf.passed:
            raise PresetError(
                f"preset {bname}: critical pair fails: {conf.failures()[0].name}")

    blocks = set(alphabet.blocks())
    algebra = hopf = action = cross = braided = None

    if "H" in blocks:
        h_letters = alphabet.letters_of_block("H")
        h_base = presentation.restrict(h_letters, name=f"{bname}:H")
        if sections.cop:
            hopf = HopfData(h_base, sections.cop, sections.counit, sections.antipode)
            if validate:
                hrep = check_hopf_axioms(hopf)
                validation["hopf-axioms"] = hrep
                if not hrep.passed:
                    raise PresetError(
                        f"preset {bname}: Hopf axiom fails: {hrep.failures()[0].name}")
        a_letters = [g.name for g in alphabet if g.block != "H"]
        if a_letters:
            algebra = presentation.restrict(a_letters, name=f"{bname}:A")
    if sections.acts and hopf is not None and algebra is not None:
        action = ActionTable(sections.acts)
        if validate:
            marep = check_module_algebra(algebra, hopf, action)
            validation["module-algebra"] = marep
            if not marep.passed:
                raise PresetError(
                    f"preset {bname}: module-algebra fails: {marep.failures()[0].name}")
        cross = CrossPresentation(presentation, algebra, hopf, action,
                                  dict(validation))

    if {"A1", "A2"} <= blocks and "H" not in blocks:
        f1 = presentation.restrict(alphabet.letters_of_block("A1"), name=f"{bname}:A1")
        f2 = presentation.restrict(alphabet.letters_of_block("A2"), name=f"{bname}:A2")
        a1 = set(f1.alphabet.names())
        a2 = set(f2.alphabet.names())
        exchange = [r for r in presentation.rules
                    if len(r.lhs) == 2 and r.lhs[0] in a2 and r.lhs[1] in a1]
        braided = BraidedPresentation(presentation, f1, f2, exchange, dict(validation))

    bundle = PresetBundle(
        name=bname, presentation=presentation, algebra=algebra, hopf=hopf,
        action=action, cross=cross, braided=braided,
        subalgebras=dict(sections.subalgebras),
        identities=list(sections.identities),
        validation=validation)

    for variant, tags in sections.maps.items():
        for tag, images in tags.items():
            if tag == "chi":
                bundle.chi.update(images)
                continue
            bundle.realizations[(variant, tag)] = _make_realization(
                bundle, tag, images)
    return bundle


def _make_realization(bundle, tag, images):
    pres = bundle.presentation
    if bundle.algebra is None:
        raise PresetError(f"bundle {bundle.name}: map table but no module algebra")
    codomain = bundle.algebra
    if tag == "full":
        domain = pres
    elif tag in ("plus", "minus"):
        sub = bundle.subalgebras.get(tag)
        if sub is None:
            raise PresetError(f"bundle {bundle.name}: no subalgebra tagged {tag!r}")
        keep = list(codomain.alphabet.names()) + list(sub)
        domain = pres.restrict(keep, name=f"{bundle.name}:{tag}")
    else:
        raise PresetError(f"unknown map tag {tag!r}")
    return RealizationMap(images, domain, codomain, fixes_A=True)


def _load_phi_variants(validate=True):
    base = load_preset("rq3_cross", validate=validate)
    bundle = PresetBundle(
        name="phi_variants", presentation=base.presentation,
        algebra=base.algebra, hopf=base.hopf, action=base.action,
        cross=base.cross, subalgebras=base.subalgebras,
        identities=[], validation=dict(base.validation))
    # the map file carries no gen lines; parse against the cross alphabet
    raw = parse_bundle_file(preset_path("phi_variants"),
                            alphabet=base.presentation.alphabet)
    for variant, tags in raw.maps.items():
        for tag, images in tags.items():
            bundle.realizations[(variant, tag)] = _make_realization(bundle, tag, images)
    return bundle


def list_expected_identities(bundle):
    """Machine-readable verification agenda: (lhs, rhs, paper_tag) triples."""
    return [(lhs, rhs, tag) for (tag, lhs, rhs) in bundle.identities]
