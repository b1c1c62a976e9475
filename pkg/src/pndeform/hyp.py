"""Scenario checker for the determinant, image, ordinarity and level shapes.

A scenario describes a mod p^n representation by images on finitely many
labeled elements: global image generators, plus per-place inertia
generators and a Frobenius lift, each carrying its cyclotomic value chi
and the auxiliary character value psi.  The checks are named C1 to C4
plus the split unramified shape used for the fixed-weight application:

  C1  every image has determinant psi * chi^(k-1), and psi is trivial on
      inertia at p;
  C2  the mod-p image contains SL_2 of the residue field, and for p = 3
      the mod p^n image contains a transvection;
  C3  the place at p is ordinary with unramified diagonal characters and
      the two diagonal characters are distinguished mod p;
  C4  each ramified place away from p has the prescribed shape (twisted
      Steinberg when p divides the inertia image, split with unramified
      second character otherwise), and unramified places = 1 mod p carry
      Frobenius of order divisible by p.

Verdicts are values: pass, fail with a concrete witness, or
not-applicable.  Nothing here raises on a failed hypothesis.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .errors import CapExceeded, InvalidRepresentation, SchemaError
from .grp import DEFAULT_CAP, closure, contains_sl2
from .linalg import nullspace
from .mat import (
    LocalElement,
    Mat2,
    diagonalizations,
    is_transvection,
    ordinary_form,
    triangularizations,
)
from .ring import GaloisRing, RingElem, is_prime

SCHEMA_VERSION = 1


# ---------------------------------------------------------------------------
# scenario data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LabeledImage:
    label: str
    mat: Mat2
    chi: RingElem
    psi: RingElem


@dataclass(frozen=True)
class Place:
    label: str
    residue: Optional[int]  # None for the infinite place
    ramified: bool
    frobenius: Optional[str]
    inertia: tuple

    @property
    def is_infinite(self) -> bool:
        return self.residue is None


@dataclass
class Scenario:
    ring: GaloisRing
    weight: int
    claims: tuple
    elements: dict
    global_generators: tuple
    places: tuple
    complex_conjugation: Optional[str] = None

    # -- access ---------------------------------------------------------------

    def image(self, label: str) -> LabeledImage:
        return self.elements[label]

    def place_at_p(self) -> Optional[Place]:
        for pl in self.places:
            if pl.residue == self.ring.p:
                return pl
        return None

    def place_labels(self, place: Place) -> list:
        labels = list(place.inertia)
        if place.frobenius is not None:
            labels.append(place.frobenius)
        return labels

    def local_elements(self, place: Place) -> list:
        out = []
        for lab in place.inertia:
            e = self.elements[lab]
            out.append(LocalElement(lab, e.mat, e.chi, True))
        if place.frobenius is not None:
            e = self.elements[place.frobenius]
            out.append(LocalElement(place.frobenius, e.mat, e.chi, False))
        return out

    # -- (de)serialization ------------------------------------------------------

    @staticmethod
    def from_dict(obj: dict) -> "Scenario":
        try:
            version = obj["schema_version"]
            if version != SCHEMA_VERSION:
                raise SchemaError(f"unsupported schema_version {version}")
            rp = obj["ring"]
            ring = GaloisRing(int(rp["p"]), int(rp["n"]), int(rp.get("m", 1)))
            weight = int(obj["weight"])
            if weight < 2:
                raise SchemaError("weight must be an integer >= 2")
            claims = tuple(obj.get("claims", ["A"]))
            if not claims or any(c not in ("A", "B") for c in claims):
                raise SchemaError(f"claims must be a subset of ['A','B'], got {claims}")
            elements = {}
            for label, rec in obj["elements"].items():
                mat = Mat2.deserialize(rec["matrix"], ring)
                chi = RingElem.deserialize(rec["chi"], ring)
                psi = RingElem.deserialize(rec["psi"], ring)
                elements[label] = LabeledImage(label, mat, chi, psi)
            gens = tuple(obj["global_generators"])
            places = []
            for rec in obj["places"]:
                residue = rec["residue"]
                if residue == "infinity":
                    residue = None
                else:
                    residue = int(residue)
                    if not is_prime(residue):
                        raise SchemaError(f"place residue {residue} is not prime")
                frob = rec.get("frobenius")
                places.append(Place(rec["label"], residue, bool(rec["ramified"]),
                                    frob, tuple(rec.get("inertia", ()))))
            conj = obj.get("complex_conjugation")
            sc = Scenario(ring, weight, claims, elements, gens, tuple(places), conj)
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"malformed scenario: {exc}") from exc
        sc._validate()
        return sc

    def _validate(self):
        for lab in self.global_generators:
            if lab not in self.elements:
                raise SchemaError(f"unknown generator label {lab}")
        for pl in self.places:
            for lab in self.place_labels(pl):
                if lab not in self.elements:
                    raise SchemaError(f"unknown label {lab} at place {pl.label}")
        if self.complex_conjugation is not None \
                and self.complex_conjugation not in self.elements:
            raise SchemaError("unknown complex conjugation label")
        if not self.global_generators:
            raise SchemaError("scenario needs global image generators")
        for e in self.elements.values():
            if not e.mat.is_invertible():
                raise InvalidRepresentation(f"image of {e.label} is not invertible")
            if not e.chi.is_unit() or not e.psi.is_unit():
                raise InvalidRepresentation(f"character values of {e.label} must be units")

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "claims": list(self.claims),
            "ring": {"p": self.ring.p, "n": self.ring.n, "m": self.ring.m},
            "weight": self.weight,
            "elements": {
                lab: {
                    "matrix": e.mat.serialize(),
                    "chi": e.chi.serialize(),
                    "psi": e.psi.serialize(),
                }
                for lab, e in sorted(self.elements.items())
            },
            "global_generators": list(self.global_generators),
            "places": [
                {
                    "label": pl.label,
                    "residue": "infinity" if pl.residue is None else pl.residue,
                    "ramified": pl.ramified,
                    "frobenius": pl.frobenius,
                    "inertia": list(pl.inertia),
                }
                for pl in self.places
            ],
            "complex_conjugation": self.complex_conjugation,
        }

    @staticmethod
    def load(path: str) -> "Scenario":
        try:
            with open(path) as fh:
                obj = json.load(fh)
        except OSError as exc:
            raise SchemaError(f"cannot read scenario: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise SchemaError(f"scenario is not valid JSON: {exc}") from exc
        return Scenario.from_dict(obj)


# ---------------------------------------------------------------------------
# verdicts
# ---------------------------------------------------------------------------

PASS = "pass"
FAIL = "fail"
NOT_APPLICABLE = "not-applicable"


@dataclass
class Verdict:
    status: str
    witness: Optional[str] = None
    details: dict = field(default_factory=dict)

    @staticmethod
    def ok(**details) -> "Verdict":
        return Verdict(PASS, None, details)

    @staticmethod
    def fail(witness: str, **details) -> "Verdict":
        return Verdict(FAIL, witness, details)

    @staticmethod
    def na() -> "Verdict":
        return Verdict(NOT_APPLICABLE)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def serialize(self) -> dict:
        out = {"status": self.status}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.details:
            out["details"] = self.details
        return out


@dataclass
class HypothesisReport:
    c1: Verdict
    c2: Verdict
    c3: Verdict
    c4: Verdict
    b_shape: Verdict
    conductor: dict
    oddness: dict = field(default_factory=dict)

    @property
    def all_pass(self) -> bool:
        verdicts = [self.c1, self.c2, self.c3, self.c4, self.b_shape]
        return all(v.status != FAIL for v in verdicts)

    def verdict_map(self) -> dict:
        return {"C1": self.c1, "C2": self.c2, "C3": self.c3, "C4": self.c4,
                "B-shape": self.b_shape}

    def serialize(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "verdicts": {k: v.serialize() for k, v in self.verdict_map().items()},
            "artin_conductor": self.conductor,
            "oddness": self.oddness,
            "all_pass": self.all_pass,
        }


# ---------------------------------------------------------------------------
# the individual checks
# ---------------------------------------------------------------------------

def check_c1(s: Scenario) -> Verdict:
    """Fixed determinant psi * chi^(k-1); psi unramified at p."""
    k = s.weight
    for lab, e in sorted(s.elements.items()):
        expected = e.psi * e.chi ** (k - 1)
        if e.mat.det() != expected:
            return Verdict.fail(
                f"det(image({lab})) != psi*chi^(k-1)",
                label=lab, det=list(e.mat.det().coeffs),
                expected=list(expected.coeffs))
    place_p = s.place_at_p()
    if place_p is not None:
        for lab in place_p.inertia:
            if s.elements[lab].psi != s.ring.one:
                return Verdict.fail(f"psi ramified at p (label {lab})", label=lab)
    return Verdict.ok()


def check_c2(s: Scenario, cap: int = DEFAULT_CAP) -> Verdict:
    """Residual image contains SL_2; transvection in the image for p = 3."""
    gens = [s.elements[lab].mat for lab in s.global_generators]
    reduced = [g.reduce(1) for g in gens]
    if not contains_sl2(reduced, cap):
        return Verdict.fail("mod-p image does not contain SL_2")
    if s.ring.p == 3:
        grp = closure(gens, cap)
        if not any(is_transvection(m) for m in grp.elements):
            return Verdict.fail("transvection not found in the mod p^n image",
                                searched=len(grp))
        return Verdict.ok(transvection_found=True, image_order=len(grp))
    return Verdict.ok()


def check_c3(s: Scenario) -> Verdict:
    """Ordinary shape at p with mod-p distinguished diagonal characters."""
    place_p = s.place_at_p()
    if place_p is None:
        return Verdict.fail("no place at p in the scenario")
    elements = s.local_elements(place_p)
    k = s.weight
    form = ordinary_form(s.ring, elements, k)
    if form is None:
        return Verdict.fail("no ordinary form at p (no stable line with "
                            "unramified diagonal characters)")
    def differs(f1, f2):
        return any(f1(e).residue() != f2(e).residue() for e in elements)

    psi1, psi2 = form.psi1, form.psi2
    if not differs(lambda e: psi1[e.label] * e.chi ** (k - 1),
                   lambda e: psi2[e.label]):
        return Verdict.fail("psi1*chi^(k-1) = psi2 mod p")
    if not differs(lambda e: psi1[e.label] * e.chi ** (k - 2),
                   lambda e: psi2[e.label]):
        return Verdict.fail("psi1*chi^(k-2) = psi2 mod p")
    for e in elements:
        if e.is_inertia:
            continue
        if psi1[e.label] * psi2[e.label] != s.elements[e.label].psi:
            return Verdict.fail(f"psi1*psi2 != psi at label {e.label}")
    return Verdict.ok(
        psi1={lab: list(v.coeffs) for lab, v in sorted(psi1.items())},
        psi2={lab: list(v.coeffs) for lab, v in sorted(psi2.items())},
    )


def _matrix_order_mod_p(mat: Mat2, bound: int = 10_000) -> int:
    m = mat.reduce(1)
    ident = Mat2.identity(m.ring)
    acc = m
    for order in range(1, bound + 1):
        if acc == ident:
            return order
        acc = acc * m
    raise CapExceeded("matrix order exceeds bound")


def _inertia_image_order(s: Scenario, place: Place) -> int:
    mats = [s.elements[lab].mat.reduce(1) for lab in place.inertia]
    if not mats:
        return 1
    return len(closure(mats, cap=100_000))


def _steinberg_shape_ok(s: Scenario, place: Place) -> Optional[str]:
    """Twisted Steinberg: triangular with d1 = chi^(k-1)*d2, d2 unramified."""
    elements = s.local_elements(place)
    k = s.weight
    one = s.ring.one
    for tri in triangularizations(s.ring, [e.mat for e in elements]):
        ok = True
        for e, d1, d2 in zip(elements, tri.diag1, tri.diag2):
            if e.is_inertia and d2 != one:
                ok = False
                break
            if d1 != e.chi ** (k - 1) * d2:
                ok = False
                break
        if ok:
            return None
    return "no triangular form (chi^(k-1)*delta, *; 0, delta) with delta unramified"


def _split_shape_ok(s: Scenario, place: Place,
                    check_psi_factor: bool = True) -> Optional[str]:
    """Split form delta^{-1} chi^(k-1) psi (+) delta with delta unramified."""
    from .ring import invert

    elements = s.local_elements(place)
    one = s.ring.one
    k = s.weight
    for dia in diagonalizations(s.ring, [e.mat for e in elements]):
        ok = True
        for e, d1, d2 in zip(elements, dia.diag1, dia.diag2):
            if e.is_inertia and d2 != one:
                ok = False
                break
            if check_psi_factor:
                expected = invert(d2) * e.chi ** (k - 1) * s.elements[e.label].psi
                if d1 != expected:
                    ok = False
                    break
        if ok:
            return None
    return "no split form delta^{-1}*chi^(k-1)*psi (+) delta with delta unramified"


def check_c4(s: Scenario) -> Verdict:
    """Shapes at ramified places away from p, and the q = 1 mod p order test."""
    p = s.ring.p
    details = {}
    for place in s.places:
        if place.is_infinite or place.residue == p:
            continue
        if place.ramified:
            inertia_order = _inertia_image_order(s, place)
            if inertia_order % p == 0:
                witness = _steinberg_shape_ok(s, place)
                details[place.label] = {"branch": "p | #residual inertia"}
            else:
                witness = _split_shape_ok(s, place)
                details[place.label] = {"branch": "p does not divide #residual inertia"}
            if witness is not None:
                return Verdict.fail(f"place {place.label}: {witness}",
                                    **details)
        else:
            if place.residue % p == 1 and place.frobenius is not None:
                order = _matrix_order_mod_p(s.elements[place.frobenius].mat)
                details[place.label] = {"frobenius_order_mod_p": order}
                if order % p != 0:
                    return Verdict.fail(
                        f"place {place.label}: q = 1 mod p but residual "
                        f"Frobenius order {order} is prime to p", **details)
    return Verdict.ok(**details)


def check_theorem_b_shape(s: Scenario) -> Verdict:
    """Unramified split diagonal shape at p with the fixed-weight congruence."""
    place_p = s.place_at_p()
    if place_p is None:
        return Verdict.fail("no place at p in the scenario")
    ring = s.ring
    p, n = ring.p, ring.n
    ident = Mat2.identity(ring)
    for lab in place_p.inertia:
        if s.elements[lab].mat != ident:
            return Verdict.fail(f"ramified at p: inertia image {lab} != 1 mod p^n",
                                label=lab)
    # split with both characters unramified; inertia is trivial here so the
    # delta^{-1} chi^(k-1) psi factor shape is not imposed, only splitness
    split = _split_shape_ok(s, place_p, check_psi_factor=False)
    if split is not None:
        return Verdict.fail(f"at p: {split}")
    k_hi = p ** n * (p - 1) + 1
    k_lo = p ** (n - 1) * (p - 1) + 1
    congruences = {}
    for name, k in (("declared", s.weight), ("k = p^n(p-1)+1", k_hi),
                    ("k = p^(n-1)(p-1)+1", k_lo)):
        ok = all(s.elements[lab].chi ** (k - 1) == ring.one
                 for lab in place_p.inertia)
        congruences[name] = {"k": k, "chi_power_trivial_on_inertia": ok}
    if not congruences["declared"]["chi_power_trivial_on_inertia"]:
        return Verdict.fail("chi^(k-1) nontrivial on inertia at p for the "
                            "declared weight", **congruences)
    return Verdict.ok(**congruences)


# ---------------------------------------------------------------------------
# conductor and assembled report
# ---------------------------------------------------------------------------

def artin_conductor_tame(s: Scenario) -> dict:
    """Tame part of the conductor from residual inertia fixed spaces."""
    from .linalg import FieldOps

    k = s.ring.residue_field()
    F = FieldOps(k.p, k.m, k.modulus)
    exponents = {}
    value = 1
    for place in s.places:
        if place.is_infinite or place.residue == s.ring.p or not place.ramified:
            continue
        rows = []
        for lab in place.inertia:
            m = s.elements[lab].mat.reduce(1)
            rows.append((F.sub(F.encode(m.a), 1), F.encode(m.b)))
            rows.append((F.encode(m.c), F.sub(F.encode(m.d), 1)))
        fixed = len(nullspace(F, rows, 2))
        e = 2 - fixed
        exponents[place.label] = e
        value *= place.residue ** e
    return {
        "value": value,
        "exponents": exponents,
        "squarefree": all(e <= 1 for e in exponents.values()),
        "prime_to_p": value % s.ring.p != 0,
    }


def oddness_shape(s: Scenario) -> dict:
    """R2 shape of the declared conjugation element (derived data only).

    Oddness itself is declared, not derived; the check is that the
    declared element has image conjugate to diag(-1, 1) with chi = -1.
    """
    from .grp import TrackedElement, check_r2_element

    if s.complex_conjugation is None:
        return {"declared": False}
    e = s.elements[s.complex_conjugation]
    ok = check_r2_element(TrackedElement(e.mat, e.chi))
    return {"declared": True, "label": s.complex_conjugation, "r2_shape_ok": ok}


def run_checks(s: Scenario, cap: int = DEFAULT_CAP) -> HypothesisReport:
    b_shape = check_theorem_b_shape(s) if "B" in s.claims else Verdict.na()
    return HypothesisReport(
        c1=check_c1(s),
        c2=check_c2(s, cap),
        c3=check_c3(s),
        c4=check_c4(s),
        b_shape=b_shape,
        conductor=artin_conductor_tame(s),
        oddness=oddness_shape(s),
    )
