"""Bundled scenario fixtures: passing templates plus single-mutation variants.

Every fixture is produced programmatically so the JSON files under
scenarios/ can be regenerated bit-for-bit (scripts/make_scenarios.py).
The passing templates model an ordinary weight-2 shape at p, a twisted
Steinberg place, a split tame place and an unramified place with
Frobenius order divisible by p; each mutation breaks exactly one
checker clause and flips exactly one verdict.
"""

from __future__ import annotations

import copy
import json
import os

from .grp import find_sl2f3_section
from .mat import Mat2
from .ring import GaloisRing


def _elem(ring: GaloisRing, mat_entries, chi: int, psi: int) -> dict:
    mat = Mat2(ring, *mat_entries)
    return {
        "matrix": mat.serialize(),
        "chi": ring.elem(chi).serialize(),
        "psi": ring.elem(psi).serialize(),
    }


def build_theorem_a_p5() -> dict:
    """Passing template at p = 5, n = 2, weight 2.

    Places: ordinary at 5, twisted Steinberg at 11, split tame at 3,
    unramified at 31 with Frobenius of order 5 mod 5.
    """
    R = GaloisRing(5, 2)
    elements = {
        "g0": _elem(R, (1, 1, 0, 1), 1, 1),
        "g1": _elem(R, (1, 0, 1, 1), 1, 1),
        "i_p": _elem(R, (2, 1, 0, 1), 2, 1),
        "frob_p": _elem(R, (2, 0, 0, 1), 1, 2),
        "i_q1": _elem(R, (1, 1, 0, 1), 1, 1),
        "frob_q1": _elem(R, (11, 0, 0, 1), 11, 1),
        "i_q2": _elem(R, (24, 0, 0, 1), 1, 24),
        "frob_q2": _elem(R, (6, 0, 0, 2), 3, 4),
        "frob_q3": _elem(R, (1, 1, 0, 1), 6, 21),
        "conj": _elem(R, (24, 0, 0, 1), 24, 1),
    }
    return {
        "schema_version": 1,
        "claims": ["A"],
        "ring": {"p": 5, "n": 2, "m": 1},
        "weight": 2,
        "elements": elements,
        "global_generators": ["g0", "g1"],
        "places": [
            {"label": "p", "residue": 5, "ramified": True,
             "frobenius": "frob_p", "inertia": ["i_p"]},
            {"label": "q1", "residue": 11, "ramified": True,
             "frobenius": "frob_q1", "inertia": ["i_q1"]},
            {"label": "q2", "residue": 3, "ramified": True,
             "frobenius": "frob_q2", "inertia": ["i_q2"]},
            {"label": "q3", "residue": 31, "ramified": False,
             "frobenius": "frob_q3", "inertia": []},
        ],
        "complex_conjugation": "conj",
    }


def build_theorem_a_p3() -> dict:
    """Passing template at p = 3, n = 2, weight 2 (transvection included)."""
    R = GaloisRing(3, 2)
    elements = {
        "g0": _elem(R, (1, 1, 0, 1), 1, 1),
        "g1": _elem(R, (1, 0, 1, 1), 1, 1),
        "i_p": _elem(R, (2, 1, 0, 1), 2, 1),
        "frob_p": _elem(R, (2, 0, 0, 1), 1, 2),
        "i_q1": _elem(R, (1, 1, 0, 1), 1, 1),
        "frob_q1": _elem(R, (7, 0, 0, 1), 7, 1),
        "conj": _elem(R, (8, 0, 0, 1), 8, 1),
    }
    return {
        "schema_version": 1,
        "claims": ["A"],
        "ring": {"p": 3, "n": 2, "m": 1},
        "weight": 2,
        "elements": elements,
        "global_generators": ["g0", "g1"],
        "places": [
            {"label": "p", "residue": 3, "ramified": True,
             "frobenius": "frob_p", "inertia": ["i_p"]},
            {"label": "q1", "residue": 7, "ramified": True,
             "frobenius": "frob_q1", "inertia": ["i_q1"]},
        ],
        "complex_conjugation": "conj",
    }


def build_theorem_b_p5() -> dict:
    """Passing split unramified-at-p template, weight p^(n-1)(p-1)+1 = 21."""
    R = GaloisRing(5, 2)
    elements = {
        "g0": _elem(R, (1, 1, 0, 1), 1, 1),
        "g1": _elem(R, (1, 0, 1, 1), 1, 1),
        "i_p": _elem(R, (1, 0, 0, 1), 2, 1),
        "frob_p": _elem(R, (3, 0, 0, 2), 1, 6),
        "i_q1": _elem(R, (1, 1, 0, 1), 1, 1),
        "frob_q1": _elem(R, (2, 0, 0, 2), 11, 4),
        "conj": _elem(R, (24, 0, 0, 1), 24, 24),
    }
    return {
        "schema_version": 1,
        "claims": ["B"],
        "ring": {"p": 5, "n": 2, "m": 1},
        "weight": 21,
        "elements": elements,
        "global_generators": ["g0", "g1"],
        "places": [
            {"label": "p", "residue": 5, "ramified": False,
             "frobenius": "frob_p", "inertia": ["i_p"]},
            {"label": "q1", "residue": 11, "ramified": True,
             "frobenius": "frob_q1", "inertia": ["i_q1"]},
        ],
        "complex_conjugation": "conj",
    }


# ---------------------------------------------------------------------------
# single-mutation negatives
# ---------------------------------------------------------------------------

def _with(base: dict, **edits) -> dict:
    out = copy.deepcopy(base)
    for label, rec in edits.items():
        out["elements"][label] = rec
    return out


def build_mutations() -> dict:
    """name -> (scenario dict, name of the single verdict expected to flip)."""
    R5 = GaloisRing(5, 2)
    a5 = build_theorem_a_p5()
    a3 = build_theorem_a_p3()
    b5 = build_theorem_b_p5()
    out = {}

    # C1: determinant equation broken on a global-only label
    m = copy.deepcopy(a5)
    m["elements"]["g0"]["psi"] = R5.elem(2).serialize()
    out["c1_det_mismatch"] = (m, "C1")

    # C1: psi ramified at p
    m = copy.deepcopy(a5)
    m["elements"]["i_p"]["psi"] = R5.elem(6).serialize()
    out["c1_psi_ramified_at_p"] = (m, "C1")

    # C2: reducible (upper-triangular) global image
    m = _with(a5, g1=_elem(R5, (2, 0, 0, 13), 1, 1))
    out["c2_not_irreducible"] = (m, "C2")

    # C2 at p = 3: mod-3 surjective complement with no transvection
    section = find_sl2f3_section()
    R3 = GaloisRing(3, 2)
    s, t = section.generators
    m = _with(
        a3,
        g0={"matrix": s.serialize(), "chi": R3.one.serialize(),
            "psi": R3.one.serialize()},
        g1={"matrix": t.serialize(), "chi": R3.one.serialize(),
            "psi": R3.one.serialize()},
    )
    out["c2_no_transvection_p3"] = (m, "C2")

    # C3: both diagonal characters trivial, chi^(k-2) congruence fails
    m = _with(a5, frob_p=_elem(R5, (1, 0, 0, 1), 1, 1))
    out["c3_violation"] = (m, "C3")

    # C3: residually irreducible at p (companion of x^2 - x + 2)
    m = _with(a5, i_p=_elem(R5, (0, 23, 1, 1), 2, 1))
    out["c3_not_ordinary"] = (m, "C3")

    # C4: split place with both diagonal inertia characters ramified
    m = _with(a5, i_q2=_elem(R5, (4, 0, 0, 2), 1, 8))
    out["c4_split_ramified_twist"] = (m, "C4")

    # C4: Steinberg place with the diagonal characters swapped
    m = _with(a5, frob_q1=_elem(R5, (1, 0, 0, 11), 11, 1))
    out["c4_steinberg_shape"] = (m, "C4")

    # C4: unramified q = 1 mod p with Frobenius of order prime to p
    m = _with(a5, frob_q3=_elem(R5, (24, 0, 0, 1), 6, 4))
    out["c4_frob_order"] = (m, "C4")

    # B-shape: inertia at p nontrivial mod p^n (but trivial mod p)
    m = _with(b5, i_p=_elem(R5, (1, 5, 0, 1), 2, 1))
    out["b_shape_ramified_at_p"] = (m, "B-shape")

    return out


def all_fixtures() -> dict:
    """name -> scenario dict for everything that ships under scenarios/."""
    out = {
        "theorem_a_p5": build_theorem_a_p5(),
        "theorem_a_p3": build_theorem_a_p3(),
        "theorem_b_p5": build_theorem_b_p5(),
    }
    for name, (scenario, _flip) in build_mutations().items():
        out[name] = scenario
    return out


def write_fixtures(directory: str) -> list:
    os.makedirs(directory, exist_ok=True)
    written = []
    for name, obj in sorted(all_fixtures().items()):
        path = os.path.join(directory, f"{name}.json")
        with open(path, "w") as fh:
            json.dump(obj, fh, indent=1, sort_keys=True)
            fh.write("\n")
        written.append(path)
    return written
