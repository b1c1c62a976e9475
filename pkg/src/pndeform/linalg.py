"""Dense exact linear algebra over the residue fields F_{p^m}.

Field elements are encoded as integers in [0, p^m): the base-p digits of
the encoding are the coefficients of the element on the power basis of
the ring modulus.  For m = 1 this is plain arithmetic mod p; for m > 1
multiplication and inversion go through small precomputed tables, which
is ample for the desk-scale fields used here (p^m <= a few thousand).

Matrices are tuples of row tuples.  All routines are pure.
"""

from __future__ import annotations

from .ring import GaloisRing, RingElem


class FieldOps:
    """Arithmetic in F_{p^m} on integer-encoded elements."""

    def __init__(self, p: int, m: int = 1, modulus=None):
        self.p = p
        self.m = m
        self.q = p ** m
        if m == 1:
            self.ring = GaloisRing(p, 1, 1)
            self._mul_table = None
            self._inv_table = None
            return
        self.ring = GaloisRing(p, 1, m, modulus)
        if self.q > 4096:
            raise ValueError("field too large for table-based arithmetic")
        els = [self._decode(v) for v in range(self.q)]
        self._mul_table = [
            tuple(self._encode(a * b) for b in els) for a in els
        ]
        self._inv_table = [0] * self.q
        for v in range(1, self.q):
            if self._inv_table[v]:
                continue
            inv = self._encode(els[v] ** (self.q - 2))
            self._inv_table[v] = inv
            self._inv_table[inv] = v

    # -- element codec -------------------------------------------------------

    def _decode(self, v: int) -> RingElem:
        coeffs = []
        for _ in range(self.m):
            v, r = divmod(v, self.p)
            coeffs.append(r)
        return self.ring.elem(coeffs)

    def _encode(self, x: RingElem) -> int:
        v = 0
        for c in reversed(x.coeffs):
            v = v * self.p + c
        return v

    def encode(self, x: RingElem) -> int:
        if x.ring != self.ring:
            raise ValueError("element not in this field")
        return self._encode(x)

    def decode(self, v: int) -> RingElem:
        return self._decode(v)

    # -- scalar arithmetic -----------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        out = 0
        mult = 1
        for _ in range(self.m):
            a, ra = divmod(a, self.p)
            b, rb = divmod(b, self.p)
            out += ((ra + rb) % self.p) * mult
            mult *= self.p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def neg(self, a: int) -> int:
        if self.m == 1:
            return (-a) % self.p
        out = 0
        mult = 1
        for _ in range(self.m):
            a, ra = divmod(a, self.p)
            out += ((-ra) % self.p) * mult
            mult *= self.p
        return out

    def mul(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a * b) % self.p
        return self._mul_table[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        if self.m == 1:
            return pow(a, self.p - 2, self.p)
        return self._inv_table[a]

    def from_int(self, c: int) -> int:
        """Embed an ordinary integer (acts through the prime field)."""
        return c % self.p

    def key(self):
        return (self.p, self.m, self.ring.modulus)

    def __eq__(self, other):
        return isinstance(other, FieldOps) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())


# ---------------------------------------------------------------------------
# matrices (tuple-of-row-tuples of encoded scalars)
# ---------------------------------------------------------------------------

def identity(F: FieldOps, d: int):
    return tuple(tuple(1 if i == j else 0 for j in range(d)) for i in range(d))


def mat_mul(F: FieldOps, A, B):
    rb = len(B)
    cb = len(B[0]) if rb else 0
    out = []
    for row in A:
        acc = [0] * cb
        for k, a in enumerate(row):
            if a:
                brow = B[k]
                for j in range(cb):
                    if brow[j]:
                        acc[j] = F.add(acc[j], F.mul(a, brow[j]))
        out.append(tuple(acc))
    return tuple(out)


def mat_vec(F: FieldOps, A, v):
    out = []
    for row in A:
        acc = 0
        for a, x in zip(row, v):
            if a and x:
                acc = F.add(acc, F.mul(a, x))
        out.append(acc)
    return tuple(out)


def mat_add(F: FieldOps, A, B):
    return tuple(tuple(F.add(a, b) for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def mat_sub(F: FieldOps, A, B):
    return tuple(tuple(F.sub(a, b) for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def mat_scale(F: FieldOps, c: int, A):
    return tuple(tuple(F.mul(c, a) for a in row) for row in A)


def mat_pow(F: FieldOps, A, e: int):
    result = identity(F, len(A))
    base = A
    while e:
        if e & 1:
            result = mat_mul(F, result, base)
        base = mat_mul(F, base, base)
        e >>= 1
    return result


def transpose(A):
    return tuple(zip(*A)) if A else ()


def mat_inv(F: FieldOps, A):
    d = len(A)
    aug = [list(row) + [1 if i == j else 0 for j in range(d)] for i, row in enumerate(A)]
    for col in range(d):
        piv = next((r for r in range(col, d) if aug[r][col]), None)
        if piv is None:
            raise ZeroDivisionError("matrix not invertible")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = F.inv(aug[col][col])
        aug[col] = [F.mul(inv, a) for a in aug[col]]
        for r in range(d):
            if r != col and aug[r][col]:
                c = aug[r][col]
                aug[r] = [F.sub(a, F.mul(c, b)) for a, b in zip(aug[r], aug[col])]
    return tuple(tuple(row[d:]) for row in aug)


class Echelon:
    """Incremental row echelon form; rows may be fed one at a time."""

    def __init__(self, F: FieldOps, ncols: int):
        self.F = F
        self.ncols = ncols
        self.pivot_rows: dict[int, tuple] = {}  # pivot column -> normalized row

    def reduce(self, row):
        F = self.F
        r = list(row)
        for col in sorted(self.pivot_rows):
            c = r[col]
            if c:
                prow = self.pivot_rows[col]
                for j in range(col, self.ncols):
                    if prow[j]:
                        r[j] = F.sub(r[j], F.mul(c, prow[j]))
        return tuple(r)

    def add_row(self, row) -> bool:
        """Reduce and insert; returns True if the row added a new pivot."""
        r = self.reduce(row)
        col = next((j for j, v in enumerate(r) if v), None)
        if col is None:
            return False
        inv = self.F.inv(r[col])
        self.pivot_rows[col] = tuple(self.F.mul(inv, v) for v in r)
        # keep fully reduced: clear this column from existing rows
        for pc, prow in list(self.pivot_rows.items()):
            if pc != col and prow[col]:
                c = prow[col]
                self.pivot_rows[pc] = tuple(
                    self.F.sub(a, self.F.mul(c, b))
                    for a, b in zip(prow, self.pivot_rows[col])
                )
        return True

    @property
    def rank(self) -> int:
        return len(self.pivot_rows)

    def contains(self, row) -> bool:
        return not any(self.reduce(row))

    def basis(self):
        return [self.pivot_rows[c] for c in sorted(self.pivot_rows)]


def rank(F: FieldOps, rows, ncols: int) -> int:
    ech = Echelon(F, ncols)
    for row in rows:
        ech.add_row(row)
    return ech.rank


def nullspace(F: FieldOps, rows, ncols: int):
    """Basis of the right kernel of the stacked rows."""
    ech = Echelon(F, ncols)
    for row in rows:
        ech.add_row(row)
    pivots = sorted(ech.pivot_rows)
    free = [j for j in range(ncols) if j not in ech.pivot_rows]
    basis = []
    for f in free:
        vec = [0] * ncols
        vec[f] = 1
        for pc in pivots:
            vec[pc] = F.neg(ech.pivot_rows[pc][f])
        basis.append(tuple(vec))
    return basis


def solve_in_span(F: FieldOps, basis, target):
    """Coordinates of target in the span of basis vectors, or None."""
    ncols = len(target)
    ech = Echelon(F, ncols + len(basis))
    for i, b in enumerate(basis):
        tag = [0] * len(basis)
        tag[i] = 1
        ech.add_row(tuple(b) + tuple(tag))
    red = ech.reduce(tuple(target) + (0,) * len(basis))
    if any(red[:ncols]):
        return None
    return tuple(F.neg(c) for c in red[ncols:])
