"""2x2 matrix algebra over Galois rings, trace polynomials, normal forms.

The polynomial family h_n is defined over the integers by the three-term
recursion h_{n+2} = T h_{n+1} - h_n with h_1 = 1, h_2 = T; it converts
powers of determinant-1 matrices into linear expressions in the matrix.

Normal-form utilities search the finitely many invariant lines of the
projective line over W/p^n, which is all the structure needed to decide
upper-triangularizability and simultaneous diagonalizability at desk
scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional

from .errors import DeterminantNotOne, IndexOutOfRange, InvalidRepresentation
from .ring import GaloisRing, RingElem, invert


class Mat2:
    """Immutable 2x2 matrix over a GaloisRing, entries row-major (a, b, c, d)."""

    __slots__ = ("ring", "a", "b", "c", "d")

    def __init__(self, ring: GaloisRing, a, b, c, d):
        self.ring = ring
        self.a = ring.elem(a)
        self.b = ring.elem(b)
        self.c = ring.elem(c)
        self.d = ring.elem(d)

    @staticmethod
    def from_rows(ring: GaloisRing, rows) -> "Mat2":
        (a, b), (c, d) = rows
        return Mat2(ring, a, b, c, d)

    @staticmethod
    def identity(ring: GaloisRing) -> "Mat2":
        return Mat2(ring, 1, 0, 0, 1)

    @staticmethod
    def scalar(ring: GaloisRing, s) -> "Mat2":
        return Mat2(ring, s, 0, 0, s)

    # -- arithmetic -----------------------------------------------------------

    def __mul__(self, other):
        if isinstance(other, Mat2):
            if other.ring != self.ring:
                raise ValueError("mixed-ring matrices")
            return Mat2(
                self.ring,
                self.a * other.a + self.b * other.c,
                self.a * other.b + self.b * other.d,
                self.c * other.a + self.d * other.c,
                self.c * other.b + self.d * other.d,
            )
        return Mat2(self.ring, self.a * other, self.b * other, self.c * other, self.d * other)

    __rmul__ = __mul__

    def __add__(self, other: "Mat2") -> "Mat2":
        return Mat2(self.ring, self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d)

    def __sub__(self, other: "Mat2") -> "Mat2":
        return Mat2(self.ring, self.a - other.a, self.b - other.b, self.c - other.c, self.d - other.d)

    def __neg__(self) -> "Mat2":
        return Mat2(self.ring, -self.a, -self.b, -self.c, -self.d)

    def __pow__(self, e: int) -> "Mat2":
        if e < 0:
            return self.inverse() ** (-e)
        result = Mat2.identity(self.ring)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def det(self) -> RingElem:
        return self.a * self.d - self.b * self.c

    def trace(self) -> RingElem:
        return self.a + self.d

    def is_invertible(self) -> bool:
        return self.det().is_unit()

    def inverse(self) -> "Mat2":
        dinv = invert(self.det())
        return Mat2(self.ring, self.d * dinv, -self.b * dinv, -self.c * dinv, self.a * dinv)

    def conjugate_by(self, c: "Mat2") -> "Mat2":
        """c^{-1} * self * c."""
        return c.inverse() * self * c

    def apply(self, v):
        x, y = v
        return (self.a * x + self.b * y, self.c * x + self.d * y)

    def reduce(self, n2: int) -> "Mat2":
        ring = self.ring.with_precision(n2)
        return Mat2(ring, *(ring.elem(e.coeffs) for e in self.entries()))

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def key(self):
        return (self.a.coeffs, self.b.coeffs, self.c.coeffs, self.d.coeffs)

    def serialize(self) -> list:
        return [e.serialize() for e in self.entries()]

    @staticmethod
    def deserialize(obj, ring: GaloisRing | None = None) -> "Mat2":
        elems = [RingElem.deserialize(e, ring) for e in obj]
        return Mat2(elems[0].ring, *elems)

    def __eq__(self, other):
        return isinstance(other, Mat2) and self.ring == other.ring and self.key() == other.key()

    def __hash__(self):
        return hash((self.ring.key(), self.key()))

    def __repr__(self):
        def s(e):
            return e.coeffs[0] if self.ring.m == 1 else list(e.coeffs)
        return f"[[{s(self.a)},{s(self.b)}],[{s(self.c)},{s(self.d)}]]"


# ---------------------------------------------------------------------------
# trace polynomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HPoly:
    """Integer polynomial h_n in T, ascending coefficients, degree n - 1."""

    index: int
    coeffs: tuple

    def eval_int(self, t: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def eval_ring(self, t: RingElem) -> RingElem:
        if t.ring.m == 1:
            acc = 0
            t0, pn = t.coeffs[0], t.ring.pn
            for c in reversed(self.coeffs):
                acc = (acc * t0 + c) % pn
            return t.ring.elem(acc)
        acc = t.ring.zero
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc


@lru_cache(maxsize=None)
def _h_coeffs(n: int) -> tuple:
    if n == 0:
        return (0,)
    if n == 1:
        return (1,)
    if n == 2:
        return (0, 1)
    prev2 = _h_coeffs(n - 2)
    prev1 = _h_coeffs(n - 1)
    shifted = (0,) + prev1  # multiplication by T
    size = max(len(shifted), len(prev2))
    return tuple(
        (shifted[i] if i < len(shifted) else 0) - (prev2[i] if i < len(prev2) else 0)
        for i in range(size)
    )


def h_poly(n: int) -> HPoly:
    """The n-th trace polynomial; defined for n >= 1."""
    if n < 1:
        raise IndexOutOfRange(f"h_poly defined for n >= 1, got {n}")
    return HPoly(n, _h_coeffs(n))


def mat_pow_via_trace(M: Mat2, n: int) -> Mat2:
    """M^n for det(M) = 1 via M^n = h_n(t) M - h_{n-1}(t) I, t = tr M."""
    if n < 1:
        raise IndexOutOfRange(f"exponent must be >= 1, got {n}")
    if M.det() != M.ring.one:
        raise DeterminantNotOne(f"det {M.det()!r} != 1")
    t = M.trace()
    hn = HPoly(n, _h_coeffs(n)).eval_ring(t)
    hn1 = HPoly(n - 1, _h_coeffs(n - 1)).eval_ring(t)
    return M * hn - Mat2.identity(M.ring) * hn1


# ---------------------------------------------------------------------------
# invariant lines and triangular/diagonal normal forms
# ---------------------------------------------------------------------------

def projective_lines(ring: GaloisRing) -> Iterator[tuple]:
    """Primitive vectors representing the points of P^1 over the ring.

    Enumerated as (1, t) for ring elements t, then (s, 1) for s in pR;
    the order is fixed so searches are deterministic.
    """
    one = ring.one
    for t in ring.elements():
        yield (one, t)
    for s in ring.elements():
        if not s.is_unit():
            yield (s, one)
    return


def scaling_factor(mat: Mat2, line: tuple) -> Optional[RingElem]:
    """The unit u with mat * v = u * v if the line spanned by v is invariant."""
    v1, v2 = line
    w1, w2 = mat.apply(line)
    if v1.is_unit():
        u = w1 * invert(v1)
    else:
        u = w2 * invert(v2)
    if (w1 == u * v1) and (w2 == u * v2):
        return u
    return None


def basis_completion(ring: GaloisRing, line: tuple) -> Mat2:
    """Invertible matrix whose first column spans the given line."""
    v1, v2 = line
    if v1.is_unit():
        return Mat2(ring, v1, 0, v2, 1)
    return Mat2(ring, v1, 1, v2, 0)


@dataclass
class Triangularization:
    """Common upper-triangular form of a family of matrices."""

    line: tuple
    conjugator: Mat2
    diag1: list  # first diagonal entry of each conjugated matrix
    diag2: list  # second diagonal entry


def triangularizations(ring: GaloisRing, mats: list) -> Iterator[Triangularization]:
    """All simultaneous upper-triangular forms of the family, by stable line.

    Raises InvalidRepresentation if some matrix is not invertible.
    """
    for M in mats:
        if not M.is_invertible():
            raise InvalidRepresentation(f"non-invertible image {M!r}")
    for line in projective_lines(ring):
        factors = []
        for M in mats:
            u = scaling_factor(M, line)
            if u is None:
                break
            factors.append(u)
        else:
            C = basis_completion(ring, line)
            cinv = C.inverse()
            d2 = [(cinv * M * C).d for M in mats]
            yield Triangularization(line, C, factors, d2)


def diagonalizations(ring: GaloisRing, mats: list) -> Iterator[Triangularization]:
    """Simultaneous diagonal forms: pairs of complementary invariant lines."""
    tris = list(triangularizations(ring, mats))
    for t1 in tris:
        for t2 in tris:
            v, w = t1.line, t2.line
            C = Mat2(ring, v[0], w[0], v[1], w[1])
            if not C.is_invertible():
                continue
            yield Triangularization((v, w), C, t1.diag1, t2.diag1)


# -- conjugacy predicates ------------------------------------------------------

def is_scaled_transvection(M: Mat2) -> Optional[RingElem]:
    """If M is conjugate to a*[[1,1],[0,1]] return the unit a, else None.

    Over a local ring with p odd: the scalar is forced to tr(M)/2, and
    X = a^{-1} M - I must square to zero without vanishing mod p.
    """
    t = M.trace()
    if not t.is_unit():
        return None
    a = t * invert(M.ring.elem(2))
    if M.det() != a * a:
        return None
    X = M * invert(a) - Mat2.identity(M.ring)
    if any(e.is_unit() for e in X.entries()) and all(e.is_zero() for e in (X * X).entries()):
        return a
    return None


def is_transvection(M: Mat2) -> bool:
    a = is_scaled_transvection(M)
    return a is not None and a == M.ring.one


def is_conjugate_to_reflection(M: Mat2) -> bool:
    """Conjugate to diag(-1, 1): trace 0 and determinant -1.

    With p odd, M^2 = I follows by Cayley-Hamilton and the two eigenspace
    projectors (I +- M)/2 are free of rank one, so the criterion is exact
    over W/p^n.
    """
    R = M.ring
    return M.trace().is_zero() and M.det() == -R.one


# ---------------------------------------------------------------------------
# ordinary form at p
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LocalElement:
    """One labeled element of a local (decomposition-group) family."""

    label: str
    mat: Mat2
    chi: RingElem
    is_inertia: bool


@dataclass
class OrdinaryForm:
    """Successful triangularization with ordinary diagonal characters."""

    conjugator: Mat2
    line: tuple
    psi1: dict  # label -> unramified character value on the first diagonal
    psi2: dict  # label -> value on the second diagonal
    diag1: dict
    diag2: dict


def ordinary_form(ring: GaloisRing, elements: list, k: int) -> Optional[OrdinaryForm]:
    """Search for a basis in which the family is (psi1*chi^(k-1), *; 0, psi2).

    psi1, psi2 must be unramified: on inertia elements the diagonal is
    forced to (chi^(k-1), 1).  Returns None when no stable line produces
    that shape; the first suitable line in the fixed enumeration order
    wins, so the output is deterministic.
    """
    mats = [e.mat for e in elements]
    for tri in triangularizations(ring, mats):
        psi1, psi2, diag1, diag2 = {}, {}, {}, {}
        ok = True
        for e, d1, d2 in zip(elements, tri.diag1, tri.diag2):
            chi_pow = e.chi ** (k - 1)
            if e.is_inertia:
                if d1 != chi_pow or d2 != ring.one:
                    ok = False
                    break
                psi1[e.label] = ring.one
                psi2[e.label] = ring.one
            else:
                psi1[e.label] = d1 * invert(chi_pow)
                psi2[e.label] = d2
            diag1[e.label] = d1
            diag2[e.label] = d2
        if ok:
            return OrdinaryForm(tri.conjugator, tri.line, psi1, psi2, diag1, diag2)
    return None
