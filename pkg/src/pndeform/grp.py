"""Explicit subgroup enumeration in GL_2 over Galois rings.

Closure is breadth-first under right multiplication by the generators in
their given order, so the element ordering (and hence every serialized
artifact) is deterministic.  For residue degree m = 1 the BFS levels are
batched through numpy on integer-encoded matrices, which keeps closures
of size |GL_2(Z/25)| = 300000 comfortably under a second-scale budget;
higher residue degrees take the generic path and are intended only for
small groups.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import CapExceeded, InvalidRepresentation, NotFound
from .mat import Mat2, is_scaled_transvection
from .ring import GaloisRing, RingElem

DEFAULT_CAP = 1_000_000


def _encode_m1(mat: Mat2) -> tuple:
    return (mat.a.coeffs[0], mat.b.coeffs[0], mat.c.coeffs[0], mat.d.coeffs[0])


def _closure_m1(ring: GaloisRing, gens: Sequence[Mat2], cap: int,
                targets: Optional[set] = None):
    """BFS closure over Z/p^n via numpy batches.

    Matrices are encoded as single integers ((a*pn + b)*pn + c)*pn + d so
    the visited set works on plain ints.  Returns (encoded_elements_in_
    insertion_order, all_targets_found).  When `targets` is given, the
    search stops early once every target has appeared.
    """
    pn = ring.pn
    gen_arrays = [
        np.array([[g.a.coeffs[0], g.b.coeffs[0]], [g.c.coeffs[0], g.d.coeffs[0]]],
                 dtype=np.int64)
        for g in gens
    ]

    def enc(a, b, c, d):
        return ((a * pn + b) * pn + c) * pn + d

    ident = enc(1 % pn, 0, 0, 1 % pn)
    seen = {ident}
    order = [ident]
    missing = {enc(*t) for t in targets} - seen if targets is not None else None
    if missing is not None and not missing:
        return order, True
    frontier = np.array([[1 % pn, 0, 0, 1 % pn]], dtype=np.int64)
    while len(frontier):
        fr = frontier.reshape(-1, 2, 2)
        prods = [(fr @ ga) % pn for ga in gen_arrays]
        # interleave so products appear frontier-major, generator-minor
        stacked = np.stack(prods, axis=1).reshape(-1, 4)
        codes = (((stacked[:, 0] * pn + stacked[:, 1]) * pn + stacked[:, 2]) * pn
                 + stacked[:, 3])
        new_rows = []
        for i, code in enumerate(codes.tolist()):
            if code not in seen:
                seen.add(code)
                order.append(code)
                new_rows.append(i)
                if missing is not None:
                    missing.discard(code)
                    if not missing:
                        return order, True
        if len(order) > cap:
            raise CapExceeded(f"closure exceeded cap {cap}")
        frontier = stacked[new_rows]
    return order, (missing is not None and not missing)


def _decode_m1(ring: GaloisRing, code: int) -> Mat2:
    pn = ring.pn
    code, d = divmod(code, pn)
    code, c = divmod(code, pn)
    a, b = divmod(code, pn)
    return Mat2(ring, a, b, c, d)


def _closure_generic(ring: GaloisRing, gens: Sequence[Mat2], cap: int,
                     targets: Optional[set] = None):
    ident = Mat2.identity(ring)
    seen = {ident.key()}
    order = [ident]
    missing = set(targets) - seen if targets is not None else None
    if missing is not None and not missing:
        return order, True
    frontier = [ident]
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = x * g
                key = y.key()
                if key not in seen:
                    seen.add(key)
                    new.append(y)
                    if missing is not None:
                        missing.discard(key)
                        if not missing:
                            return order + new, True
        order.extend(new)
        if len(order) > cap:
            raise CapExceeded(f"closure exceeded cap {cap}")
        frontier = new
    return order, (missing is not None and not missing)


@dataclass
class FiniteMatrixGroup:
    """Explicitly enumerated subgroup of GL_2 over a Galois ring."""

    ring: GaloisRing
    generators: list
    elements: list = field(repr=False)
    order: int = 0

    def __post_init__(self):
        if not self.order:
            self.order = len(self.elements)
        self._index = {m.key(): i for i, m in enumerate(self.elements)}

    def __contains__(self, mat: Mat2) -> bool:
        return mat.key() in self._index

    def index_of(self, mat: Mat2) -> int:
        return self._index[mat.key()]

    def __len__(self) -> int:
        return self.order

    def reduce(self, n2: int) -> "FiniteMatrixGroup":
        return closure([g.reduce(n2) for g in self.generators])

    def serialize(self) -> dict:
        return {
            "ring": {"p": self.ring.p, "n": self.ring.n, "m": self.ring.m},
            "generators": [g.serialize() for g in self.generators],
            "order": self.order,
        }


_closure_cache: dict = {}


def closure(generators: Sequence[Mat2], cap: int = DEFAULT_CAP) -> FiniteMatrixGroup:
    """Breadth-first product closure of the generators.

    Element ordering is the insertion order of the BFS under the given
    generator ordering; as a set the result does not depend on that order.
    """
    if not generators:
        raise ValueError("need at least one generator")
    ring = generators[0].ring
    for g in generators:
        if g.ring != ring:
            raise ValueError("generators over different rings")
        if not g.is_invertible():
            raise InvalidRepresentation(f"generator {g!r} is not invertible")
    cache_key = (ring.key(), tuple(g.key() for g in generators), cap)
    hit = _closure_cache.get(cache_key)
    if hit is not None:
        return hit
    if ring.m == 1:
        codes, _ = _closure_m1(ring, generators, cap)
        elements = [_decode_m1(ring, code) for code in codes]
    else:
        elements, _ = _closure_generic(ring, generators, cap)
    grp = FiniteMatrixGroup(ring, list(generators), elements)
    _closure_cache[cache_key] = grp
    return grp


# ---------------------------------------------------------------------------
# SL2 containment
# ---------------------------------------------------------------------------

def sl2_generators(ring: GaloisRing) -> list:
    """Standard transvections generating SL_2 over the ring.

    For m = 1 the two matrices [[1,1],[0,1]] and [[1,0],[1,1]] suffice;
    in general the elementary matrices over the power basis do.
    """
    gens = []
    for j in range(ring.m):
        theta = ring.elem([0] * j + [1] + [0] * (ring.m - 1 - j))
        gens.append(Mat2(ring, 1, theta, 0, 1))
        gens.append(Mat2(ring, 1, 0, theta, 1))
    return gens


def contains_sl2(group_or_gens, cap: int = DEFAULT_CAP) -> bool:
    """Whether the group contains all of SL_2(W/p^n).

    Decided by membership of the elementary generating set: the group is
    closed, so holding a generating set of SL_2 is equivalent to holding
    SL_2.  Generator-described input is closed breadth-first with an
    early exit once every elementary matrix has been seen.
    """
    if isinstance(group_or_gens, FiniteMatrixGroup):
        grp = group_or_gens
        return all(t in grp for t in sl2_generators(grp.ring))
    gens = list(group_or_gens)
    ring = gens[0].ring
    for g in gens:
        if not g.is_invertible():
            raise InvalidRepresentation(f"generator {g!r} is not invertible")
    targets = sl2_generators(ring)
    if ring.m == 1:
        _, found = _closure_m1(ring, gens, cap, {_encode_m1(t) for t in targets})
    else:
        _, found = _closure_generic(ring, gens, cap, {t.key() for t in targets})
    return found


def kernel_of_reduction(ring: GaloisRing, n2: int) -> list:
    """Elements of GL_2(W/p^n) reducing to the identity mod p^{n2}."""
    out = []
    pn2 = ring.p ** n2
    for a in range(0, ring.pn, pn2):
        for b in range(0, ring.pn, pn2):
            for c in range(0, ring.pn, pn2):
                for d in range(0, ring.pn, pn2):
                    M = Mat2(ring, 1 + a, b, c, 1 + d)
                    if M.is_invertible():
                        out.append(M)
    return out


# ---------------------------------------------------------------------------
# element searches for the auxiliary-prime conditions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TrackedElement:
    """Group element carrying its cyclotomic-character value."""

    mat: Mat2
    chi: RingElem

    def __mul__(self, other: "TrackedElement") -> "TrackedElement":
        return TrackedElement(self.mat * other.mat, self.chi * other.chi)

    def __pow__(self, e: int) -> "TrackedElement":
        return TrackedElement(self.mat ** e, self.chi ** e)

    def key(self):
        return (self.mat.key(), self.chi.coeffs)


def tracked_closure(generators: Sequence[TrackedElement], cap: int = DEFAULT_CAP) -> list:
    """BFS closure of (matrix, chi-value) pairs, insertion order."""
    ring = generators[0].mat.ring
    ident = TrackedElement(Mat2.identity(ring), ring.one)
    seen = {ident.key()}
    order = [ident]
    frontier = [ident]
    while frontier:
        new = []
        for x in frontier:
            for g in generators:
                y = x * g
                if y.key() not in seen:
                    seen.add(y.key())
                    new.append(y)
        order.extend(new)
        if len(order) > cap:
            raise CapExceeded(f"tracked closure exceeded cap {cap}")
        frontier = new
    return order


def find_r1_element(generators: Sequence[TrackedElement],
                    cap: int = DEFAULT_CAP) -> TrackedElement:
    """Element h with image conjugate to a*[[1,1],[0,1]] and chi(h) = 1.

    Follows the finite-image recipe: locate h1 whose image is a scalar
    times a nontrivial unipotent and raise it to the power p^m - 1, which
    kills the prime-to-p character part while keeping the unipotent part
    nontrivial.  Falls back to a direct scan of the closure; raises
    NotFound when the image holds no such element.
    """
    ring = generators[0].mat.ring
    elements = tracked_closure(generators, cap)
    exp = ring.p ** ring.m - 1
    for h1 in elements:
        if is_scaled_transvection(h1.mat) is None:
            continue
        h = h1 ** exp
        if h.chi == ring.one and is_scaled_transvection(h.mat) is not None:
            return h
    for h in elements:
        if h.chi == ring.one and is_scaled_transvection(h.mat) is not None:
            return h
    raise NotFound("no scalar-transvection element with trivial chi value")


def check_r2_element(g: TrackedElement) -> bool:
    """Image conjugate to diag(-1, 1) with chi(g) = -1."""
    from .mat import is_conjugate_to_reflection

    ring = g.mat.ring
    return is_conjugate_to_reflection(g.mat) and g.chi == -ring.one


# ---------------------------------------------------------------------------
# the p = 3 complement search
# ---------------------------------------------------------------------------

def find_sl2f3_section() -> Optional[FiniteMatrixGroup]:
    """Order-24 subgroup of SL_2(Z/9) mapping isomorphically onto SL_2(F_3).

    Searches determinant-1 lifts of the standard order-4 and order-3
    generators for a pair that closes at order 24.  Such a complement
    reduces onto SL_2(F_3) without containing SL_2(Z/9) and holds no
    transvection (those have order 9), so its existence is why the
    transvection hypothesis at p = 3 is not vacuous.  Returns None only
    if the exhaustive search over all lift pairs comes up empty.
    """
    Z9 = GaloisRing(3, 2)

    def det1_lifts(entries):
        out = []
        for da in range(3):
            for db in range(3):
                for dc in range(3):
                    for dd in range(3):
                        cand = Mat2(Z9, entries[0] + 3 * da, entries[1] + 3 * db,
                                    entries[2] + 3 * dc, entries[3] + 3 * dd)
                        if cand.det() == Z9.one:
                            out.append(cand)
        return out

    s_lifts = det1_lifts((0, -1 % 9, 1, 0))
    t_lifts = det1_lifts((1, 1, 0, 1))
    for s in s_lifts:
        for t in t_lifts:
            try:
                grp = closure([s, t], cap=30)
            except CapExceeded:
                continue
            if len(grp) == 24:
                return grp
    return None
