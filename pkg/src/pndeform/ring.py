"""Exact arithmetic in Galois rings GR(p^n, m) = W(F_{p^m}) / p^n.

A ring is (Z/p^n)[x] modulo a monic degree-m polynomial whose mod-p
reduction is irreducible over F_p; elements are coefficient vectors of
length m with entries reduced to [0, p^n).  For m = 1 the ring is
canonically Z/p^n, and for n = 1 it is the finite field F_{p^m}.

The modulus convention is reproducible across runs: the lexicographically
smallest monic irreducible of degree m over F_p, ordered by the ascending
coefficient tuple (c_0, ..., c_{m-1}) of x^m + c_{m-1}x^{m-1} + ... + c_0.

Everything here is immutable and pure; p = 2 is rejected throughout.
"""

from __future__ import annotations

import itertools
from typing import Iterator

from .errors import NotASquare, NotAUnit, PrecisionOutOfRange


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# ---------------------------------------------------------------------------
# modulus selection
# ---------------------------------------------------------------------------

def _poly_mul_field(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return out


def _poly_mod_field(a, mod, p):
    a = [c % p for c in a]
    dm = len(mod) - 1
    for d in range(len(a) - 1, dm - 1, -1):
        c = a[d]
        if c:
            a[d] = 0
            for j in range(dm):
                a[d - dm + j] = (a[d - dm + j] - c * mod[j]) % p
    return a[:dm]


def _monic_polys(p, deg):
    for tail in itertools.product(range(p), repeat=deg):
        yield list(tail) + [1]


def _is_irreducible(poly, p):
    """Trial division over F_p; poly is monic, ascending coefficients."""
    deg = len(poly) - 1
    if deg <= 0:
        return False
    if poly[0] == 0:  # root at 0
        return deg == 1
    for d in range(1, deg // 2 + 1):
        for div in _monic_polys(p, d):
            if not any(_poly_mod_field(poly, div, p)):
                return False
    return True


def _conway_style_modulus(p, m):
    """Lexicographically smallest monic irreducible of degree m over F_p."""
    if m == 1:
        return (0,)
    for poly in _monic_polys(p, m):
        if _is_irreducible(poly, p):
            return tuple(poly[:m])
    raise AssertionError("no irreducible polynomial found")  # unreachable


# ---------------------------------------------------------------------------
# rings and elements
# ---------------------------------------------------------------------------

class GaloisRing:
    """The coefficient ring W(F_{p^m})/p^n with a fixed monic modulus."""

    __slots__ = ("p", "n", "m", "modulus", "pn")

    def __init__(self, p: int, n: int, m: int = 1, modulus=None):
        if p == 2 or not is_prime(p):
            raise ValueError(f"p must be an odd prime, got {p}")
        if n < 1 or m < 1:
            raise ValueError("need n >= 1 and m >= 1")
        self.p = p
        self.n = n
        self.m = m
        self.pn = p ** n
        if modulus is None:
            modulus = _conway_style_modulus(p, m)
        modulus = tuple(c % self.pn for c in modulus)
        if len(modulus) != m:
            raise ValueError("modulus must have m coefficients below x^m")
        self.modulus = modulus

    # -- construction ------------------------------------------------------

    def elem(self, value) -> "RingElem":
        if isinstance(value, RingElem):
            if value.ring != self:
                raise ValueError("element belongs to a different ring")
            return value
        if isinstance(value, int):
            coeffs = (value % self.pn,) + (0,) * (self.m - 1)
        else:
            coeffs = tuple(int(c) % self.pn for c in value)
            if len(coeffs) != self.m:
                raise ValueError(f"expected {self.m} coefficients")
        return RingElem(self, coeffs)

    @property
    def zero(self) -> "RingElem":
        return self.elem(0)

    @property
    def one(self) -> "RingElem":
        return self.elem(1)

    # -- structure ---------------------------------------------------------

    @property
    def size(self) -> int:
        return self.p ** (self.n * self.m)

    @property
    def unit_count(self) -> int:
        q = self.p ** self.m
        return self.p ** ((self.n - 1) * self.m) * (q - 1)

    def residue_field(self) -> "GaloisRing":
        if self.n == 1:
            return self
        return GaloisRing(self.p, 1, self.m, tuple(c % self.p for c in self.modulus))

    def with_precision(self, n2: int) -> "GaloisRing":
        if n2 < 1 or n2 > self.n:
            raise PrecisionOutOfRange(f"precision {n2} outside [1, {self.n}]")
        if n2 == self.n:
            return self
        q = self.p ** n2
        return GaloisRing(self.p, n2, self.m, tuple(c % q for c in self.modulus))

    def elements(self) -> Iterator["RingElem"]:
        for coeffs in itertools.product(range(self.pn), repeat=self.m):
            yield RingElem(self, coeffs)

    def units(self) -> Iterator["RingElem"]:
        return (x for x in self.elements() if x.is_unit())

    # -- identity ----------------------------------------------------------

    def key(self):
        return (self.p, self.n, self.m, self.modulus)

    def __eq__(self, other):
        return isinstance(other, GaloisRing) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        if self.m == 1:
            return f"GaloisRing(Z/{self.p}^{self.n})"
        return f"GaloisRing(GR({self.p}^{self.n}, {self.m}))"


class RingElem:
    """Immutable element of a GaloisRing, canonical coefficients in [0, p^n)."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: GaloisRing, coeffs):
        self.ring = ring
        self.coeffs = tuple(coeffs)

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "RingElem":
        if isinstance(other, RingElem):
            if other.ring != self.ring:
                raise ValueError("mixed-ring arithmetic")
            return other
        if isinstance(other, int):
            return self.ring.elem(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        pn = self.ring.pn
        return RingElem(self.ring, tuple((a + b) % pn for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        pn = self.ring.pn
        return RingElem(self.ring, tuple((a - b) % pn for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        return self.ring.elem(other) - self

    def __neg__(self):
        pn = self.ring.pn
        return RingElem(self.ring, tuple((-a) % pn for a in self.coeffs))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        R = self.ring
        if R.m == 1:
            return RingElem(R, ((self.coeffs[0] * o.coeffs[0]) % R.pn,))
        prod = [0] * (2 * R.m - 1)
        for i, ai in enumerate(self.coeffs):
            if ai:
                for j, bj in enumerate(o.coeffs):
                    prod[i + j] = (prod[i + j] + ai * bj) % R.pn
        # reduce by x^m = -(c_0 + ... + c_{m-1} x^{m-1})
        for d in range(2 * R.m - 2, R.m - 1, -1):
            c = prod[d]
            if c:
                prod[d] = 0
                for j, mj in enumerate(R.modulus):
                    prod[d - R.m + j] = (prod[d - R.m + j] - c * mj) % R.pn
        return RingElem(R, tuple(prod[: R.m]))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return invert(self) ** (-e)
        result = self.ring.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- predicates ----------------------------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_unit(self) -> bool:
        p = self.ring.p
        return any(c % p for c in self.coeffs)

    # -- conversions ---------------------------------------------------------

    def residue(self) -> "RingElem":
        """Image in the residue field F_{p^m}."""
        return reduce_precision(self, 1)

    def key(self):
        return self.coeffs

    def serialize(self) -> dict:
        R = self.ring
        return {"p": R.p, "n": R.n, "m": R.m, "coeffs": list(self.coeffs)}

    @staticmethod
    def deserialize(obj: dict, ring: GaloisRing | None = None) -> "RingElem":
        R = ring or GaloisRing(obj["p"], obj["n"], obj["m"])
        if (R.p, R.n, R.m) != (obj["p"], obj["n"], obj["m"]):
            raise ValueError("serialized element does not match ring parameters")
        return R.elem(obj["coeffs"])

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.elem(other)
        return (
            isinstance(other, RingElem)
            and self.ring == other.ring
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.ring.key(), self.coeffs))

    def __repr__(self):
        if self.ring.m == 1:
            return f"{self.coeffs[0]}(mod {self.ring.p}^{self.ring.n})"
        return f"{list(self.coeffs)}(GR({self.ring.p}^{self.ring.n},{self.ring.m}))"


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def teichmuller(x: RingElem, ring: GaloisRing) -> RingElem:
    """Multiplicative lift of a residue-field element x into `ring`.

    Returns the unique t with t = x mod p and t^(p^m) = t, computed by the
    fixed-point iteration y -> y^(p^m), which stabilizes within n steps.
    Returns 0 for x = 0.
    """
    if x.ring != ring.residue_field():
        raise ValueError("x must lie in the residue field of the target ring")
    if x.is_zero():
        return ring.zero
    q = ring.p ** ring.m
    y = ring.elem(x.coeffs)
    for _ in range(ring.n):
        y2 = y ** q
        if y2 == y:
            break
        y = y2
    return y


def reduce_precision(x: RingElem, n2: int) -> RingElem:
    """Coefficientwise reduction W/p^n -> W/p^{n2}."""
    R = x.ring
    if n2 < 1 or n2 > R.n:
        raise PrecisionOutOfRange(f"precision {n2} outside [1, {R.n}]")
    if n2 == R.n:
        return x
    return R.with_precision(n2).elem(x.coeffs)


def invert(u: RingElem) -> RingElem:
    """Inverse of a unit; NotAUnit if u = 0 mod p."""
    if not u.is_unit():
        raise NotAUnit(f"{u!r} is not a unit")
    R = u.ring
    if R.m == 1:
        return R.elem(pow(u.coeffs[0], -1, R.pn))
    # residue-field inverse by Fermat, then Newton lifting v <- v(2 - uv)
    k = R.residue_field()
    q = R.p ** R.m
    vbar = k.elem(u.residue().coeffs) ** (q - 2)
    v = R.elem(vbar.coeffs)
    steps = max(1, (R.n - 1).bit_length() + 1)
    for _ in range(steps):
        v = v * (R.elem(2) - u * v)
    assert (u * v) == R.one
    return v


def sqrt_unit(u: RingElem) -> RingElem:
    """Square root of a unit whose residue is a nonzero square.

    Of the two roots s and -s, returns the one with the lexicographically
    smaller coefficient vector.  Raises NotAUnit for u = 0 mod p and
    NotASquare when the residue is a quadratic non-residue.
    """
    if not u.is_unit():
        raise NotAUnit(f"{u!r} is not a unit")
    R = u.ring
    k = R.residue_field()
    ubar = u.residue()
    root = None
    for cand in k.elements():
        if cand * cand == ubar:
            root = cand
            break
    if root is None:
        raise NotASquare(f"residue of {u!r} is not a square")
    inv2 = invert(R.elem(2))
    lifts = []
    for r0 in (root, -root):
        s = R.elem(r0.coeffs)
        for _ in range(R.n):
            s = (s + u * invert(s)) * inv2
        assert s * s == u
        lifts.append(s)
    return min(lifts, key=lambda e: e.coeffs)
