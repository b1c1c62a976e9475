"""Group cohomology H^0 and H^1 with twisted trace-zero adjoint coefficients.

Two solvers feed every dimension reported here:

* an enumerated-group solver that works on any finite group given by
  generators inside a closed element list.  Cocycles are determined by
  their generator values; a breadth-first spanning tree of the Cayley
  graph expresses every other value linearly in those unknowns, and the
  remaining (non-tree) product constraints cut out Z^1.  This is the
  constraint family f(x g) = f(x) + x f(g) over all x and generators g,
  reduced to the generator-value unknowns.

* a tame local solver for the two-generator group with relation
  sigma tau sigma^{-1} = tau^q: a cocycle is the pair (f(sigma), f(tau))
  subject to the linearized relation, and coboundaries are the usual
  one-dimensional family.  With finite p-torsion coefficients this
  computes the cohomology of the profinite tame quotient, because every
  cocycle with finite image factors through a finite quotient.

The coefficient module Ad0(i) is the trace-zero 2x2 matrices over the
residue field on the basis

    E = [[0,1],[0,0]],  H = [[1,0],[0,-1]],  F = [[0,0],[1,0]],

with a group element of matrix M and determinant d acting by
v -> d^i * M v M^{-1} (matrices taken mod p).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable, Optional, Sequence

from .errors import CapExceeded, InvalidAction
from .grp import FiniteMatrixGroup
from .linalg import (
    Echelon,
    FieldOps,
    identity,
    mat_inv,
    mat_mul,
    mat_pow,
    mat_sub,
    mat_vec,
    nullspace,
    solve_in_span,
    transpose,
)
from .mat import Mat2
from .ring import GaloisRing

DEFAULT_COCYCLE_CAP = 10_000


# ---------------------------------------------------------------------------
# the coefficient module
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AdjointModule:
    """Trace-zero 2x2 matrices over F_{p^m}, conjugation twisted by det^i."""

    field: FieldOps
    twist: int = 0

    @staticmethod
    def for_ring(ring: GaloisRing, twist: int = 0) -> "AdjointModule":
        k = ring.residue_field()
        return AdjointModule(FieldOps(k.p, k.m, k.modulus), twist)

    @property
    def dim(self) -> int:
        return 3

    def action_matrix(self, g: Mat2):
        """3x3 matrix of v -> det^i * g v g^{-1} on the basis (E, H, F)."""
        gbar = g.reduce(1)
        k = gbar.ring
        det = gbar.det()
        ginv = gbar.inverse()
        factor = det ** self.twist
        cols = []
        for B in (Mat2(k, 0, 1, 0, 0), Mat2(k, 1, 0, 0, -1), Mat2(k, 0, 0, 1, 0)):
            C = gbar * B * ginv * factor
            assert (C.a + C.d).is_zero()
            cols.append((self.field.encode(C.b), self.field.encode(C.a),
                         self.field.encode(C.c)))
        return tuple(tuple(cols[j][i] for j in range(3)) for i in range(3))

    def coords_of(self, matrix: Mat2):
        """(E, H, F) coordinates of a trace-zero matrix over the field."""
        assert (matrix.a + matrix.d).is_zero()
        return (self.field.encode(matrix.b), self.field.encode(matrix.a),
                self.field.encode(matrix.c))

    def matrix_of(self, coords):
        """Inverse of coords_of."""
        k = self.field.ring
        e, h, f = (self.field.decode(c) for c in coords)
        return Mat2(k, h, e, f, -h)


def trace_pairing_gram(module: AdjointModule):
    """Gram matrix of (X, Y) -> tr(XY) on the basis (E, H, F)."""
    F = module.field
    two = F.from_int(2)
    return ((0, 0, 1), (0, two, 0), (1, 0, 0))


def orthogonal_complement(module: AdjointModule, subspace_basis):
    """Complement of a coordinate subspace under the trace pairing.

    Dimension bookkeeping only: complements of tangent subspaces are
    taken at the module level, never on cohomology classes.
    """
    F = module.field
    gram = trace_pairing_gram(module)
    rows = [mat_vec(F, gram, v) for v in subspace_basis]
    return nullspace(F, rows, module.dim)


# ---------------------------------------------------------------------------
# enumerated groups with an action
# ---------------------------------------------------------------------------

class GroupAction:
    """A finite group given by generators, with a linear action over a field.

    Elements are opaque hashable keys; `mul` composes keys.  The breadth
    first enumeration fixes the element order, the spanning tree, and the
    per-element matrices Phi expressing any cocycle value linearly in the
    generator values.
    """

    def __init__(self, field: FieldOps, dim: int, gens: Sequence[tuple],
                 identity_key, mul: Callable, desc: str = "",
                 cap: int = DEFAULT_COCYCLE_CAP):
        self.field = field
        self.dim = dim
        self.gen_labels = [g[0] for g in gens]
        self.gen_keys = [g[1] for g in gens]
        self.gen_acts = [g[2] for g in gens]
        self.identity_key = identity_key
        self.mul = mul
        self.desc = desc
        self.ncols = dim * len(gens)
        self._enumerate(cap)

    def _block(self, i: int, mat):
        """dim x ncols matrix with `mat` in generator block i."""
        d = self.dim
        rows = []
        for r in range(d):
            row = [0] * self.ncols
            row[i * d:(i + 1) * d] = mat[r]
            rows.append(tuple(row))
        return tuple(rows)

    def _enumerate(self, cap: int):
        F = self.field
        d = self.dim
        zero_phi = tuple(tuple([0] * self.ncols) for _ in range(d))
        self.order = [self.identity_key]
        self.act = {self.identity_key: identity(F, d)}
        self.phi = {self.identity_key: zero_phi}
        self.constraints = []
        frontier = [self.identity_key]
        while frontier:
            new = []
            for x in frontier:
                ax = self.act[x]
                px = self.phi[x]
                for i, (gk, ga) in enumerate(zip(self.gen_keys, self.gen_acts)):
                    y = self.mul(x, gk)
                    contrib = self._block(i, ax)
                    if y not in self.act:
                        self.act[y] = mat_mul(F, ax, ga)
                        self.phi[y] = tuple(
                            tuple(F.add(a, b) for a, b in zip(pr, cr))
                            for pr, cr in zip(px, contrib)
                        )
                        new.append(y)
                    else:
                        py = self.phi[y]
                        for pr, cr, yr in zip(px, contrib, py):
                            row = tuple(
                                F.sub(F.add(a, b), c) for a, b, c in zip(pr, cr, yr)
                            )
                            if any(row):
                                self.constraints.append(row)
            self.order.extend(new)
            if len(self.order) > cap:
                raise CapExceeded(f"group enumeration exceeded cap {cap}")
            frontier = new

    def __len__(self):
        return len(self.order)

    def cocycle_value(self, key, gen_values):
        """f(key) for the cocycle with the given stacked generator values."""
        flat = [c for v in gen_values for c in v]
        return mat_vec(self.field, self.phi[key], flat)

    @staticmethod
    def from_matrix_group(G: FiniteMatrixGroup, module: AdjointModule,
                          desc: str = "",
                          cap: int = DEFAULT_COCYCLE_CAP) -> "GroupAction":
        if len(G) > cap:
            raise CapExceeded(f"group of order {len(G)} exceeds cap {cap}")
        by_key = {m.key(): m for m in G.elements}

        def mul(k1, k2):
            return (by_key[k1] * by_key[k2]).key()

        gen_triples = [
            (f"g{i}", g.key(), module.action_matrix(g))
            for i, g in enumerate(G.generators)
        ]
        return GroupAction(module.field, module.dim, gen_triples,
                           Mat2.identity(G.ring).key(), mul,
                           desc or f"order-{len(G)} matrix group", cap)


def semidirect_tame_quotient(q: int, n_tau: int, n_sigma: int,
                             sigma_act, tau_act, field: FieldOps,
                             dim: int) -> GroupAction:
    """The finite quotient Z/n_tau x| Z/n_sigma with sigma acting by q.

    Requires q^n_sigma = 1 mod n_tau so the semidirect product exists,
    and action matrices of the right orders.
    """
    if pow(q, n_sigma, n_tau) != 1 % n_tau:
        raise InvalidAction(f"q^{n_sigma} != 1 mod {n_tau}")
    if mat_pow(field, tau_act, n_tau) != identity(field, dim):
        raise InvalidAction("tau action order does not divide n_tau")
    if mat_pow(field, sigma_act, n_sigma) != identity(field, dim):
        raise InvalidAction("sigma action order does not divide n_sigma")

    def mul(k1, k2):
        i1, j1 = k1
        i2, j2 = k2
        return ((i1 + pow(q, j1, n_tau) * i2) % n_tau, (j1 + j2) % n_sigma)

    gens = [("tau", (1 % n_tau, 0), tau_act), ("sigma", (0, 1 % n_sigma), sigma_act)]
    return GroupAction(field, dim, gens, (0, 0), mul,
                       f"Z/{n_tau} x| Z/{n_sigma} (q={q})",
                       cap=max(DEFAULT_COCYCLE_CAP, n_tau * n_sigma + 1))


# ---------------------------------------------------------------------------
# cocycle spaces
# ---------------------------------------------------------------------------

@dataclass
class CocycleSpace:
    """Z^1 / B^1 data; basis entries map generator label -> module coords."""

    group_desc: str
    twist: int
    gen_labels: list
    h0_dim: int
    z1_dim: int
    b1_dim: int
    h1_dim: int
    basis: list
    action: Optional[GroupAction] = dc_field(default=None, repr=False)
    _field: Optional[FieldOps] = dc_field(default=None, repr=False)
    _h1_vectors: list = dc_field(default_factory=list, repr=False)
    _b1_vectors: list = dc_field(default_factory=list, repr=False)

    def serialize(self) -> dict:
        return {
            "group": self.group_desc,
            "module": {"i": self.twist},
            "h0": self.h0_dim,
            "z1": self.z1_dim,
            "b1": self.b1_dim,
            "h1": self.h1_dim,
            "basis": [
                {
                    label: list(self._field.decode(c).coeffs for c in vec)
                    for label, vec in zip(self.gen_labels, cocycle)
                }
                for cocycle in self.basis
            ],
        }

    # -- class coordinates ---------------------------------------------------

    def class_coords(self, flat_cocycle):
        """Coordinates of a Z^1 vector in the H^1 basis (mod coboundaries)."""
        span = self._h1_vectors + self._b1_vectors
        sol = solve_in_span(self._field, span, flat_cocycle)
        if sol is None:
            raise ValueError("vector is not a cocycle of this space")
        return sol[: self.h1_dim]


def _split_gen_values(flat, dim, ngens):
    return [tuple(flat[i * dim:(i + 1) * dim]) for i in range(ngens)]


def h0(action_mats: Sequence, field: FieldOps, dim: int = 3):
    """Dimension and basis of the simultaneous fixed space of the actions."""
    rows = []
    ident = identity(field, dim)
    for A in action_mats:
        for row in mat_sub(field, A, ident):
            rows.append(row)
    basis = nullspace(field, rows, dim)
    return len(basis), basis


def h0_group(G: FiniteMatrixGroup, module: AdjointModule):
    return h0([module.action_matrix(g) for g in G.generators], module.field,
              module.dim)


def _assemble_space(ga: GroupAction, twist: int) -> CocycleSpace:
    F = ga.field
    d, r = ga.dim, len(ga.gen_keys)
    z1_basis = nullspace(F, ga.constraints, ga.ncols)
    z1 = len(z1_basis)
    h0_dim, _ = h0(ga.gen_acts, F, d)
    # coboundaries: v -> ((A_g - 1) v)_g stacked over generators
    ident = identity(F, d)
    cob_cols = []
    for j in range(d):
        vec = []
        for A in ga.gen_acts:
            col = tuple(F.sub(A[i][j], ident[i][j]) for i in range(d))
            vec.extend(col)
        cob_cols.append(tuple(vec))
    ech = Echelon(F, ga.ncols)
    b1_vectors = []
    for vec in cob_cols:
        if ech.add_row(vec):
            b1_vectors.append(vec)
    b1 = len(b1_vectors)
    h1_vectors = []
    for vec in z1_basis:
        if ech.add_row(vec):
            h1_vectors.append(vec)
    basis = [_split_gen_values(v, d, r) for v in h1_vectors]
    assert b1 == d - h0_dim
    assert len(h1_vectors) == z1 - b1
    return CocycleSpace(ga.desc, twist, list(ga.gen_labels), h0_dim, z1, b1,
                        z1 - b1, basis, ga, F, h1_vectors, b1_vectors)


def h1_enumerated(G: FiniteMatrixGroup, module: AdjointModule,
                  cap: int = DEFAULT_COCYCLE_CAP) -> CocycleSpace:
    """Full cocycle solve for an explicitly enumerated matrix group."""
    ga = GroupAction.from_matrix_group(G, module, cap=cap)
    return _assemble_space(ga, module.twist)


def h1_of_action(ga: GroupAction, twist: int = 0) -> CocycleSpace:
    return _assemble_space(ga, twist)


# ---------------------------------------------------------------------------
# tame local cohomology
# ---------------------------------------------------------------------------

def _geometric_sum(F: FieldOps, A, q: int, dim: int):
    """I + A + ... + A^{q-1}."""
    acc = identity(F, dim)
    term = identity(F, dim)
    for _ in range(q - 1):
        term = mat_mul(F, term, A)
        acc = tuple(tuple(F.add(a, b) for a, b in zip(ra, rb))
                    for ra, rb in zip(acc, term))
    return acc


def h1_tame(q: int, sigma_action, tau_action, field: FieldOps,
            dim: int = 3, twist: int = 0) -> CocycleSpace:
    """Cohomology of the tame two-generator local group at q.

    A cocycle is (f(sigma), f(tau)) subject to the relation constraint

        (1 - tau^q) f(sigma) + (sigma - (1 + tau + ... + tau^{q-1})) f(tau) = 0,

    obtained by expanding f(sigma tau sigma^{-1}) = f(tau^q).  Raises
    InvalidAction when the supplied actions do not satisfy the relation.
    """
    F = field
    ident = identity(F, dim)
    tau_q = mat_pow(F, tau_action, q)
    conj = mat_mul(F, mat_mul(F, sigma_action, tau_action), mat_inv(F, sigma_action))
    if conj != tau_q:
        raise InvalidAction("sigma tau sigma^{-1} != tau^q on the module")
    left = mat_sub(F, ident, tau_q)
    right = mat_sub(F, sigma_action, _geometric_sum(F, tau_action, q, dim))
    rows = [tuple(l) + tuple(r) for l, r in zip(left, right)]
    z1_basis = nullspace(F, rows, 2 * dim)
    z1 = len(z1_basis)
    h0_dim, _ = h0([sigma_action, tau_action], F, dim)
    cob_vectors = []
    for j in range(dim):
        vec = []
        for A in (sigma_action, tau_action):
            vec.extend(F.sub(A[i][j], ident[i][j]) for i in range(dim))
        cob_vectors.append(tuple(vec))
    ech = Echelon(F, 2 * dim)
    b1_vectors = [v for v in cob_vectors if ech.add_row(v)]
    h1_vectors = [v for v in z1_basis if ech.add_row(v)]
    basis = [_split_gen_values(v, dim, 2) for v in h1_vectors]
    assert len(b1_vectors) == dim - h0_dim
    return CocycleSpace(f"tame(q={q})", twist, ["sigma", "tau"], h0_dim, z1,
                        len(b1_vectors), z1 - len(b1_vectors), basis, None, F,
                        h1_vectors, b1_vectors)


def dual_twisted_actions(q: int, sigma_action, tau_action, field: FieldOps):
    """Actions on M*(1): inverse-transpose twisted by chi, chi(sigma) = q."""
    F = field
    s = mat_inv(F, sigma_action)
    t = mat_inv(F, tau_action)
    qf = F.from_int(q)
    s_dual = tuple(tuple(F.mul(qf, v) for v in row) for row in transpose(s))
    t_dual = transpose(t)
    return s_dual, t_dual


def tame_euler_terms(q: int, sigma_action, tau_action, field: FieldOps,
                     dim: int = 3):
    """(dim H^0(M), dim H^0(M*(1))) for the tame Euler identity."""
    h0_m, _ = h0([sigma_action, tau_action], field, dim)
    s_dual, t_dual = dual_twisted_actions(q, sigma_action, tau_action, field)
    h0_dual, _ = h0([s_dual, t_dual], field, dim)
    return h0_m, h0_dual


# ---------------------------------------------------------------------------
# quotient invariants and inflation-restriction
# ---------------------------------------------------------------------------

def conjugate_cocycle(space: CocycleSpace, cocycle, conj_map, act_matrix):
    """(t * xi)(g) = t . xi(t^{-1} g t), returned as generator values."""
    ga = space.action
    F = space._field
    out = []
    for gk in ga.gen_keys:
        val = ga.cocycle_value(conj_map(gk), cocycle)
        out.append(mat_vec(F, act_matrix, val))
    return out


def matrix_coset_action(U: FiniteMatrixGroup, module: AdjointModule, rep: Mat2):
    """Conjugation map and module action for a coset representative."""
    rinv = rep.inverse()
    by_key = {m.key(): m for m in U.elements}

    def conj_map(key):
        return (rinv * by_key[key] * rep).key()

    return conj_map, module.action_matrix(rep)


def quotient_invariants(space: CocycleSpace, coset_actions) -> int:
    """Dimension of the fixed subspace of H^1 under the listed coset actions.

    Each entry of `coset_actions` is a pair (conj_map, act_matrix) as
    produced by matrix_coset_action.
    """
    F = space._field
    r = space.h1_dim
    if r == 0:
        return 0
    rows = []
    for conj_map, act in coset_actions:
        cols = []
        for cocycle in space.basis:
            moved = conjugate_cocycle(space, cocycle, conj_map, act)
            flat = tuple(c for v in moved for c in v)
            cols.append(space.class_coords(flat))
        # matrix of the action on H^1 in the chosen basis, minus identity
        for i in range(r):
            row = tuple(F.sub(cols[j][i], 1 if i == j else 0) for j in range(r))
            rows.append(row)
    return len(nullspace(F, rows, r))


@dataclass
class InfResReport:
    """Dimensions and exactness data for inflation-restriction."""

    h1_G: int
    h1_quotient: int
    h1_sub_invariants: int
    inflation_rank: int
    restriction_kernel_dim: int
    exact_at_middle: bool

    @property
    def inequality_holds(self) -> bool:
        return self.h1_G <= self.h1_quotient + self.h1_sub_invariants

    def serialize(self) -> dict:
        return {
            "h1_total": self.h1_G,
            "h1_quotient_on_invariants": self.h1_quotient,
            "h1_subgroup_invariants": self.h1_sub_invariants,
            "inflation_rank": self.inflation_rank,
            "restriction_kernel": self.restriction_kernel_dim,
            "exact_at_middle": self.exact_at_middle,
            "inequality_holds": self.inequality_holds,
        }


def _quotient_action(G: FiniteMatrixGroup, H: FiniteMatrixGroup,
                     module: AdjointModule):
    """G/H acting on M^H, as a GroupAction plus the invariant basis."""
    F = module.field
    hdim, hbasis = h0_group(H, module)
    by_key = {m.key(): m for m in G.elements}
    hkeys = {m.key() for m in H.elements}
    coset_of = {}
    reps = {}
    for m in G.elements:
        if m.key() in coset_of:
            continue
        coset = sorted((m * h).key() for h in H.elements)
        ckey = coset[0]
        reps.setdefault(ckey, m)
        for ek in coset:
            coset_of[ek] = ckey

    def act_on_invariants(rep: Mat2):
        A = module.action_matrix(rep)
        cols = []
        for b in hbasis:
            img = mat_vec(F, A, b)
            sol = solve_in_span(F, hbasis, img)
            if sol is None:
                raise InvalidAction("subgroup is not normal under this action")
            cols.append(sol)
        return tuple(tuple(cols[j][i] for j in range(hdim)) for i in range(hdim))

    def mul(k1, k2):
        return coset_of[(reps[k1] * reps[k2]).key()]

    gens = []
    seen = set()
    for i, g in enumerate(G.generators):
        ck = coset_of[g.key()]
        if ck in seen:
            continue
        seen.add(ck)
        gens.append((f"g{i}", ck, act_on_invariants(reps[ck])))
    ident_ck = coset_of[Mat2.identity(G.ring).key()]
    if not gens:  # H = G: trivial quotient
        gens = [("e", ident_ck, identity(F, hdim))]
    ga = GroupAction(F, hdim, gens, ident_ck, mul,
                     f"quotient of order {len(G) // len(H)}")
    return ga, hbasis, coset_of, reps


def inflation_restriction_check(G: FiniteMatrixGroup, H: FiniteMatrixGroup,
                                module: AdjointModule,
                                cap: int = DEFAULT_COCYCLE_CAP) -> InfResReport:
    """Verify exactness of inflation-restriction for H normal in G.

    Computes H^1(G/H, M^H), H^1(G, M), H^1(H, M)^{G/H}, checks
    dim H^1(G) <= sum of the edge terms, and checks kernel(restriction)
    equals image(inflation) inside H^1(G).
    """
    F = module.field
    hkeys = {m.key() for m in H.elements}
    for g in G.generators:
        gi = g.inverse()
        for h in H.generators:
            if (gi * h * g).key() not in hkeys:
                raise InvalidAction("subgroup is not normal")
    space_G = h1_enumerated(G, module, cap)
    space_H = h1_enumerated(H, module, cap)
    qa, hbasis, coset_of, reps = _quotient_action(G, H, module)
    space_Q = h1_of_action(qa, module.twist)
    # invariants of H^1(H, M) under conjugation by coset representatives
    coset_actions = []
    by_key = {m.key(): m for m in H.elements}
    for ck, rep in reps.items():
        if ck == coset_of[Mat2.identity(G.ring).key()]:
            continue
        rinv = rep.inverse()
        coset_actions.append(
            (lambda key, rep=rep, rinv=rinv: (rinv * by_key[key] * rep).key(),
             module.action_matrix(rep))
        )
    inv_dim = (space_H.h1_dim if not coset_actions
               else quotient_invariants(space_H, coset_actions))

    # restriction: classes of G restricted to H's generators
    res_ker_rows = []
    res_image_coords = []
    for vec, cocycle in zip(space_G._h1_vectors, space_G.basis):
        values = [space_G.action.cocycle_value(h.key(), cocycle)
                  for h in H.generators]
        flat = tuple(c for v in values for c in v)
        res_image_coords.append(space_H.class_coords(flat))
    ker_basis = nullspace(
        F,
        [tuple(res_image_coords[j][i] for j in range(space_G.h1_dim))
         for i in range(space_H.h1_dim)],
        space_G.h1_dim,
    ) if space_G.h1_dim else []

    # inflation: quotient classes pulled back along g -> gH
    inf_coords = []
    for cocycle in space_Q.basis:
        values = []
        for g in space_G.action.gen_keys:
            qval = qa.cocycle_value(coset_of[g], cocycle)
            vec = [0] * module.dim
            for coeff, bvec in zip(qval, hbasis):
                for i in range(module.dim):
                    vec[i] = F.add(vec[i], F.mul(coeff, bvec[i]))
            values.append(tuple(vec))
        flat = tuple(c for v in values for c in v)
        inf_coords.append(space_G.class_coords(flat))

    ech_inf = Echelon(F, space_G.h1_dim or 1)
    for c in inf_coords:
        ech_inf.add_row(c if space_G.h1_dim else (0,))
    ech_ker = Echelon(F, space_G.h1_dim or 1)
    for c in ker_basis:
        ech_ker.add_row(c)
    exact = (ech_inf.rank == ech_ker.rank
             and all(ech_ker.contains(row) for row in ech_inf.basis()))
    return InfResReport(space_G.h1_dim, space_Q.h1_dim, inv_dim,
                        ech_inf.rank, ech_ker.rank if space_G.h1_dim else 0,
                        exact)
