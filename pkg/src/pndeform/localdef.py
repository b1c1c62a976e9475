"""Local deformation conditions and the tame versal-ring oracle.

`classify_tame_case` reproduces the trichotomy of versal presentations
for lifts of an unramified residual pair sigma -> diag(q*alpha, 1/alpha),
tau -> 1 with determinant fixed to the cyclotomic values (q on sigma,
1 on tau).  `enumerate_lifts` is the independent oracle: it enumerates
every lift pair over W/p^n satisfying the tame relation A B A^{-1} = B^q
and the determinant condition, and partitions the survivors into strict
equivalence classes (simultaneous conjugation by matrices = 1 mod p).
`verify_presentation` then matches ideal points of the claimed
presentation against the enumerated classes one by one.

Dimension bookkeeping for the global ledger lives in `tangent_dims` and
`check_substantial`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Callable, Optional, Sequence

from .coh import AdjointModule, h0
from .errors import (
    CapExceeded,
    DistinguishednessViolated,
    HypothesisViolated,
    InvalidRepresentation,
    InvalidResidual,
    MismatchFound,
)
from .mat import LocalElement, Mat2, h_poly, ordinary_form
from .ring import GaloisRing, RingElem, invert, is_prime, teichmuller

DEFAULT_PAIR_CAP = 40_000_000


# ---------------------------------------------------------------------------
# condition descriptors
# ---------------------------------------------------------------------------

class ConditionTag:
    AT_P = "AtP"
    WILD = "RamifiedPrimeToP_WildPart"       # p divides the inertia image
    TAME = "RamifiedPrimeToP_TamePart"       # inertia image of prime-to-p order
    UNRAM_AUX = "UnramifiedAux"
    RAM_AUX = "RamakrishnaAux"

    ALL = (AT_P, WILD, TAME, UNRAM_AUX, RAM_AUX)


@dataclass
class LocalCondition:
    """Per-place deformation condition with its dimension contract."""

    tag: str
    k: int = 2
    residual_semisimple: bool = False
    chibar_trivial: bool = False
    tangent_dim: Optional[int] = None
    h0_dim: Optional[int] = None


@dataclass
class SubstantialVerdict:
    """Two verdicts: the literal tangent inequality and the designation.

    Every condition tag handled here is designated substantial by the
    classification it comes from, while the literal inequality
    tangent >= h0 + 1 only holds for the condition at p.  Both are
    reported; truthiness follows the literal inequality.
    """

    inequality: bool
    designated: bool
    tag: str

    def __bool__(self) -> bool:
        return self.inequality


def check_substantial(cond: LocalCondition) -> SubstantialVerdict:
    if cond.tangent_dim is None or cond.h0_dim is None:
        raise ValueError("dimensions not populated")
    ineq = cond.tangent_dim >= cond.h0_dim + 1
    return SubstantialVerdict(ineq, cond.tag in ConditionTag.ALL, cond.tag)


def _character_differs_mod_p(elements: Sequence[LocalElement],
                             lhs: Callable, rhs: Callable) -> bool:
    """True when the two character value maps differ at some label mod p."""
    return any(lhs(e).residue() != rhs(e).residue() for e in elements)


def tangent_dims(cond: LocalCondition, ring: GaloisRing,
                 elements: Sequence[LocalElement],
                 psi1: Optional[dict] = None, psi2: Optional[dict] = None):
    """(tangent_dim, h0_dim) for the condition at this place.

    h0 is dim H^0 of the trace-zero adjoint under the reduced images.
    At p the tangent dimension is 1 + h0 after the distinguishedness
    checks; away from p it equals h0.
    """
    module = AdjointModule.for_ring(ring, 0)
    acts = [module.action_matrix(e.mat) for e in elements]
    h0_dim, _ = h0(acts, module.field, module.dim)

    if cond.tag == ConditionTag.AT_P:
        if psi1 is None or psi2 is None:
            form = ordinary_form(ring, list(elements), cond.k)
            if form is None:
                raise InvalidRepresentation("no ordinary form at p")
            psi1, psi2 = form.psi1, form.psi2
        k = cond.k

        def d1(e):
            return psi1[e.label] * e.chi ** (k - 1)

        def d2_chi(e):
            return psi2[e.label] * e.chi

        def d1_km2(e):
            return psi1[e.label] * e.chi ** (k - 2)

        def d2(e):
            return psi2[e.label]

        if not _character_differs_mod_p(elements, d1, d2_chi):
            raise DistinguishednessViolated("chi^(k-1) psi1 = chi psi2 mod p")
        if not _character_differs_mod_p(elements, d1, d2):
            raise DistinguishednessViolated("psi1 chi^(k-1) = psi2 mod p")
        if not _character_differs_mod_p(elements, d1_km2, d2):
            raise DistinguishednessViolated("psi1 chi^(k-2) = psi2 mod p")
        dims = (1 + h0_dim, h0_dim)
    elif cond.tag == ConditionTag.WILD:
        if cond.residual_semisimple and cond.chibar_trivial:
            raise HypothesisViolated(
                "semi-simple residual needs a nontrivial twisting character")
        dims = (h0_dim, h0_dim)
    elif cond.tag in (ConditionTag.TAME, ConditionTag.UNRAM_AUX,
                      ConditionTag.RAM_AUX):
        dims = (h0_dim, h0_dim)
    else:
        raise ValueError(f"unknown condition tag {cond.tag}")
    cond.tangent_dim, cond.h0_dim = dims
    return dims


# ---------------------------------------------------------------------------
# tame case classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TameCase:
    """Which versal presentation applies to (q, alpha) at the prime p."""

    p: int
    q: int
    alpha: int
    label: str  # "I" | "II" | "III" | "other"
    q_is_1_mod_p: bool
    q_is_m1_mod_p: bool
    alpha_sq_is_1: bool
    q_sq_alpha_sq_is_1: bool


@dataclass
class VersalPresentation:
    """Symbolic ring presentation with exact evaluators over W/p^n.

    `sigma_at` / `tau_at` substitute a point of the maximal ideal into
    the displayed matrices; `ideal_at` evaluates the relation ideal.
    Substituting any ideal point yields matrices satisfying the tame
    relation with determinants (q, 1).
    """

    ring_desc: str
    variables: list
    ideal_desc: list
    sigma_desc: str
    tau_desc: str
    notes: list
    _sigma_at: Callable = dc_field(repr=False, default=None)
    _tau_at: Callable = dc_field(repr=False, default=None)
    _ideal_at: Callable = dc_field(repr=False, default=None)

    def sigma_at(self, ring: GaloisRing, point) -> Mat2:
        return self._sigma_at(ring, point)

    def tau_at(self, ring: GaloisRing, point) -> Mat2:
        return self._tau_at(ring, point)

    def ideal_at(self, ring: GaloisRing, point) -> list:
        return self._ideal_at(ring, point)

    def serialize(self) -> dict:
        return {
            "ring": self.ring_desc,
            "variables": list(self.variables),
            "ideal": list(self.ideal_desc),
            "sigma": self.sigma_desc,
            "tau": self.tau_desc,
            "notes": list(self.notes),
        }


def _principal_sqrt(u: RingElem) -> RingElem:
    """Square root of a unit congruent to 1 mod p, itself = 1 mod p."""
    R = u.ring
    assert u.residue() == R.residue_field().one
    inv2 = invert(R.elem(2))
    s = R.one
    for _ in range(R.n):
        s = (s + u * invert(s)) * inv2
    assert s * s == u
    return s


def _alpha_hat(ring: GaloisRing, alpha: int) -> RingElem:
    k = ring.residue_field()
    return teichmuller(k.elem(alpha), ring)


def classify_tame_case(q: int, alpha: int, p: int):
    """Case label and versal presentation for the tame place (q, alpha).

    Requires q prime, q != p, alpha a unit mod p, and q*alpha != 1/alpha
    in the residue field (HypothesisViolated otherwise).  The fourth
    residual possibility (alpha^2 != 1 but q^2 alpha^2 = 1) carries no
    presentation here and is labeled "other".
    """
    if not is_prime(q) or q == p:
        raise ValueError(f"q must be a prime different from p, got {q}")
    if alpha % p == 0:
        raise ValueError("alpha must be a unit in the residue field")
    a = alpha % p
    if (q * a * a) % p == 1:
        raise HypothesisViolated(f"q*alpha = alpha^{{-1}} mod {p}")
    alpha_sq_1 = (a * a) % p == 1
    q_sq_a_sq_1 = (q * q * a * a) % p == 1
    q1 = q % p == 1
    qm1 = q % p == p - 1
    if not alpha_sq_1 and not q_sq_a_sq_1:
        label = "I"
    elif alpha_sq_1 and not q1 and not qm1:
        label = "II"
    elif alpha_sq_1 and qm1:
        label = "III"
    else:
        label = "other"
    case = TameCase(p, q, alpha % p, label, q1, qm1, alpha_sq_1, q_sq_a_sq_1)
    return case, _presentation_for(case)


def _presentation_for(case: TameCase) -> Optional[VersalPresentation]:
    p, q = case.p, case.q

    def ahat(ring):
        return _alpha_hat(ring, case.alpha)

    if case.label == "I":
        if case.q_is_1_mod_p:
            def sigma_at(ring, pt):
                u = ahat(ring) * (ring.one + pt["S"])
                return Mat2(ring, ring.elem(q) * u, 0, 0, invert(u))

            def tau_at(ring, pt):
                v = ring.one + pt["T"]
                return Mat2(ring, v, 0, 0, invert(v))

            def ideal_at(ring, pt):
                v = ring.one + pt["T"]
                return [v ** q - v]

            return VersalPresentation(
                "W[[S,T]]/((1+T)^q - (1+T))", ["S", "T"],
                [f"(1+T)^{q} - (1+T)"],
                f"[[{q}*a*(1+S), 0], [0, (a*(1+S))^-1]]",
                "[[1+T, 0], [0, (1+T)^-1]]",
                ["a denotes the multiplicative lift of alpha"],
                sigma_at, tau_at, ideal_at)

        def sigma_at(ring, pt):
            u = ahat(ring) * (ring.one + pt["S"])
            return Mat2(ring, ring.elem(q) * u, 0, 0, invert(u))

        def tau_at(ring, pt):
            return Mat2.identity(ring)

        def ideal_at(ring, pt):
            return []

        return VersalPresentation(
            "W[[S]]", ["S"], [],
            f"[[{q}*a*(1+S), 0], [0, (a*(1+S))^-1]]",
            "[[1, 0], [0, 1]]",
            ["a denotes the multiplicative lift of alpha"],
            sigma_at, tau_at, ideal_at)

    if case.label == "II":
        def sigma_at(ring, pt):
            u = ring.one + pt["S"]
            a = ahat(ring)
            return Mat2(ring, ring.elem(q) * u * a, 0, 0, invert(u) * a)

        def tau_at(ring, pt):
            return Mat2(ring, 1, pt["T"], 0, 1)

        def ideal_at(ring, pt):
            return [pt["S"] * pt["T"]]

        return VersalPresentation(
            "W[[S,T]]/(S*T)", ["S", "T"], ["S*T"],
            f"a*[[{q}*(1+S), 0], [0, (1+S)^-1]]",
            "[[1, T], [0, 1]]",
            ["a denotes the multiplicative lift of alpha",
             f"frobenius upper-left scale factor taken as q = {q}"],
            sigma_at, tau_at, ideal_at)

    if case.label == "III":
        hq = h_poly(q)

        def trace_root(ring, pt):
            return _principal_sqrt(ring.one + pt["T1"] * pt["T2"])

        def sigma_at(ring, pt):
            u = ring.one + pt["S"]
            a = ahat(ring)
            return Mat2(ring, ring.elem(q) * u * a, 0, 0, invert(u) * a)

        def tau_at(ring, pt):
            r = trace_root(ring, pt)
            return Mat2(ring, r, pt["T1"], pt["T2"], r)

        def ideal_at(ring, pt):
            u = ring.one + pt["S"]
            hval = hq.eval_ring(ring.elem(2) * trace_root(ring, pt))
            qe = ring.elem(q)
            return [pt["T1"] * (qe * u * u - hval),
                    pt["T2"] * (ring.one - qe * u * u * hval)]

        return VersalPresentation(
            "W[[S,T1,T2]]/J", ["S", "T1", "T2"],
            [f"T1*({q}*(1+S)^2 - h{q}(2*sqrt(1+T1*T2)))",
             f"T2*(1 - {q}*(1+S)^2*h{q}(2*sqrt(1+T1*T2)))"],
            f"a*[[{q}*(1+S), 0], [0, (1+S)^-1]]",
            "[[sqrt(1+T1*T2), T1], [T2, sqrt(1+T1*T2)]]",
            ["a denotes the multiplicative lift of alpha",
             "sqrt is the branch congruent to 1 mod p"],
            sigma_at, tau_at, ideal_at)

    return None


# ---------------------------------------------------------------------------
# exhaustive lift enumeration over W/p^n
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LiftClass:
    """Strict-equivalence class with its lexicographically least pair."""

    sigma: Mat2
    tau: Mat2
    orbit_size: int


@dataclass
class LiftEnumeration:
    ring: GaloisRing
    q: int
    sigma_bar: Mat2
    tau_bar: Mat2
    classes: list
    pair_count: int

    def class_index_of(self, sigma: Mat2, tau: Mat2) -> Optional[int]:
        return self._pair_to_class.get((sigma.key(), tau.key()))


def _enc4(M: Mat2):
    return (M.a.coeffs[0], M.b.coeffs[0], M.c.coeffs[0], M.d.coeffs[0])


def _mmul(x, y, pn):
    a, b, c, d = x
    e, f, g, h = y
    return ((a * e + b * g) % pn, (a * f + b * h) % pn,
            (c * e + d * g) % pn, (c * f + d * h) % pn)


def _minv(x, pn):
    a, b, c, d = x
    det = (a * d - b * c) % pn
    di = pow(det, -1, pn)
    return ((d * di) % pn, (-b * di) % pn, (-c * di) % pn, (a * di) % pn)


def _mpow(x, e, pn):
    r = (1, 0, 0, 1)
    while e:
        if e & 1:
            r = _mmul(r, x, pn)
        x = _mmul(x, x, pn)
        e >>= 1
    return r


def enumerate_lifts(sigma_bar: Mat2, tau_bar: Mat2, n: int, q: int,
                    det_sigma: Optional[int] = None, det_tau: int = 1,
                    cap: int = DEFAULT_PAIR_CAP) -> LiftEnumeration:
    """All strict-equivalence classes of lift pairs of the residual pair.

    Lifts are pairs (A, B) over W/p^n reducing to (sigma_bar, tau_bar)
    with A B A^{-1} = B^q and determinants det_sigma (default q) and
    det_tau.  Classes are orbits under simultaneous conjugation by all
    matrices congruent to 1 mod p; representatives are the
    lexicographically least encoded pairs, independent of enumeration
    sharding.
    """
    k = sigma_bar.ring
    if k.n != 1 or k.m != 1:
        raise InvalidResidual("residual pair must live over a prime field")
    p = k.p
    if det_sigma is None:
        det_sigma = q
    # residual sanity: relation and determinants mod p
    if sigma_bar * tau_bar * sigma_bar.inverse() != tau_bar ** q:
        raise InvalidResidual("residual pair violates the tame relation")
    if sigma_bar.det() != k.elem(det_sigma) or tau_bar.det() != k.elem(det_tau):
        raise InvalidResidual("residual determinants do not match")

    R = GaloisRing(p, n)
    pn = R.pn
    step_count = p ** (n - 1)
    offsets = [p * i for i in range(step_count)]
    # p^(4(n-1)) lift candidates per matrix before the determinant filter
    if step_count ** 8 > cap:
        raise CapExceeded(f"lift enumeration at n={n} exceeds cap {cap}")

    def lifts_of(base: Mat2, det_target: int):
        b = _enc4(base)
        out = []
        for da, db, dc, dd in itertools.product(offsets, repeat=4):
            cand = ((b[0] + da) % pn, (b[1] + db) % pn,
                    (b[2] + dc) % pn, (b[3] + dd) % pn)
            if (cand[0] * cand[3] - cand[1] * cand[2]) % pn == det_target % pn:
                out.append(cand)
        return out

    a_cands = lifts_of(sigma_bar, det_sigma)
    b_cands = lifts_of(tau_bar, det_tau)
    if len(a_cands) * len(b_cands) > cap:
        raise CapExceeded("pair filter exceeds cap")

    b_pow = {b: _mpow(b, q, pn) for b in b_cands}
    survivors = []
    for a in a_cands:
        ainv = _minv(a, pn)
        for b in b_cands:
            if _mmul(_mmul(a, b, pn), ainv, pn) == b_pow[b]:
                survivors.append((a, b))

    # strict equivalence: conjugation by 1 + p*Z
    conjugators = []
    for za, zb, zc, zd in itertools.product(offsets, repeat=4):
        C = ((1 + za) % pn, zb, zc, (1 + zd) % pn)
        conjugators.append((C, _minv(C, pn)))

    unassigned = set(survivors)
    pair_to_class = {}
    classes = []
    for pair in sorted(survivors):
        if pair not in unassigned:
            continue
        a, b = pair
        orbit = set()
        for C, Cinv in conjugators:
            orbit.add((_mmul(_mmul(C, a, pn), Cinv, pn),
                       _mmul(_mmul(C, b, pn), Cinv, pn)))
        rep = min(orbit)
        idx = len(classes)
        classes.append(LiftClass(Mat2(R, *rep[0]), Mat2(R, *rep[1]), len(orbit)))
        for member in orbit:
            key = (Mat2(R, *member[0]).key(), Mat2(R, *member[1]).key())
            pair_to_class[key] = idx
            unassigned.discard(member)

    enum = LiftEnumeration(R, q, sigma_bar, tau_bar, classes, len(survivors))
    enum._pair_to_class = pair_to_class
    return enum


def residual_pair(p: int, q: int, alpha: int):
    """The unramified residual pair sigma -> diag(q alpha, 1/alpha), tau -> 1."""
    k = GaloisRing(p, 1)
    a = k.elem(alpha)
    sigma = Mat2(k, k.elem(q) * a, 0, 0, invert(a))
    return sigma, Mat2.identity(k)


# ---------------------------------------------------------------------------
# presentation vs enumeration
# ---------------------------------------------------------------------------

@dataclass
class PresentationReport:
    case: TameCase
    n: int
    point_count: int
    class_count: int
    fiber_sizes: list
    matched: bool
    notes: list

    def serialize(self) -> dict:
        return {
            "case": self.case.label,
            "p": self.case.p,
            "q": self.case.q,
            "alpha": self.case.alpha,
            "n": self.n,
            "ideal_points": self.point_count,
            "lift_classes": self.class_count,
            "fiber_sizes": self.fiber_sizes,
            "matched": self.matched,
            "notes": self.notes,
        }


def verify_presentation(case: TameCase, presentation: VersalPresentation,
                        enumeration: LiftEnumeration,
                        ideal_override: Optional[Callable] = None) -> PresentationReport:
    """Match ideal points of the presentation against enumerated classes.

    Every ideal point must evaluate to an enumerated lift pair (else the
    displayed relations are too weak) and every strict-equivalence class
    must be hit by at least one point (else they are too strong); either
    failure raises MismatchFound with the offending witnesses.  Fiber
    sizes over the classes are reported: versality promises a surjection
    onto classes, not a bijection, and at precision 3 the fibers are
    genuinely uneven (points may be identified by reparametrization).
    """
    R = enumeration.ring
    p, n = R.p, R.n
    maxideal = [R.elem(p * i) for i in range(p ** (n - 1))]
    ideal_at = ideal_override or presentation.ideal_at
    hits = {}
    points = 0
    bad_points = []
    for combo in itertools.product(maxideal, repeat=len(presentation.variables)):
        pt = dict(zip(presentation.variables, combo))
        if any(not v.is_zero() for v in ideal_at(R, pt)):
            continue
        points += 1
        A = presentation.sigma_at(R, pt)
        B = presentation.tau_at(R, pt)
        idx = enumeration.class_index_of(A, B)
        if idx is None:
            bad_points.append({var: v.coeffs[0] for var, v in pt.items()})
            continue
        hits[idx] = hits.get(idx, 0) + 1
    unmatched = [i for i in range(len(enumeration.classes)) if i not in hits]
    if bad_points:
        raise MismatchFound(
            f"{len(bad_points)} ideal points do not evaluate to lifts",
            witnesses=bad_points)
    if unmatched:
        raise MismatchFound(
            f"{len(unmatched)} lift classes unmatched by ideal points",
            witnesses=[repr(enumeration.classes[i]) for i in unmatched])
    fibers = sorted(set(hits.values()))
    return PresentationReport(case, n, points, len(enumeration.classes),
                              fibers, True, list(presentation.notes))
