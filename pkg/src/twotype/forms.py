"""Sesquilinear forms over Z[G], the hyperbolic form on the augmentation ideal,
the map B from Gamma-coinvariants to Hermitian forms, and evaluation pairings.

A sesquilinear form is stored as a square ring matrix M, with
lambda(x, y) = sum conj(x_i) M_ij y_j for row vectors x, y.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from .exactla import AbGroup, IntMatrix, Subquotient, cokernel, kernel_basis, solve
from .gamma import coinvariant_relations, gamma, gamma_index
from .groupring import Character, Cyclic, GroupSpec, Infinite, RingElt, RingMatrix, Word, involute
from .lattices import DEFAULT_L, BasedLattice, aug_ideal, dual_map
from .resolutions import element_coords, regular_expand


@dataclass(frozen=True)
class SesqForm:
    matrix: RingMatrix
    w: Character

    @property
    def rank(self) -> int:
        return self.matrix.nrows

    def value(self, x: list[RingElt | int], y: list[RingElt | int]) -> RingElt:
        G = self.matrix.group
        xs = [e if isinstance(e, RingElt) else RingElt.const(G, e) for e in x]
        ys = [e if isinstance(e, RingElt) else RingElt.const(G, e) for e in y]
        out = RingElt.zero(G)
        for i in range(self.rank):
            for j in range(self.rank):
                out = out + involute(xs[i], self.w) * self.matrix[i, j] * ys[j]
        return out

    def is_hermitian(self) -> bool:
        return hermitian_check(self.matrix, self.w)


def hermitian_check(M: RingMatrix, w: Character | None = None) -> bool:
    """M equals its conjugate transpose under the w-twisted involution."""
    if M.nrows != M.ncols:
        return False
    w = w or Character.trivial(M.group)
    return dual_map(M, w) == M


def hyperbolic(G: GroupSpec, w: Character | None = None, v: Character | None = None) -> SesqForm:
    """H(I^v) on I^v + (I^v)^dagger, one 2x2 block per free factor.

    The block pairs a generator x of the factor's summand of I^v with the
    functional phi generating the dual summand, with value phi(x):
    for a cyclic factor x = 1 - v(g) g and phi is the inclusion, so
    phi(x) = 1 - v(g) g; for a Z factor I^v is free on x and phi(x) = 1.
    """
    w = w or Character.trivial(G)
    v = v or Character.trivial(G)
    blocks = []
    for fi, f in enumerate(G.factors):
        name = G.names[fi][0]
        if isinstance(f, Cyclic):
            g = RingElt.gen(G, name)
            blocks.append(1 - v(G.gen_word(name)) * g)
        elif isinstance(f, Infinite):
            blocks.append(RingElt.one(G))
        else:
            raise NotImplementedError("hyperbolic form for a ZxC2 factor: its augmentation ideal "
                                      "has no one-generator summand")
    n = 2 * len(blocks)
    rows: list[list[RingElt | int]] = [[0] * n for _ in range(n)]
    for k, p in enumerate(blocks):
        rows[2 * k][2 * k + 1] = p
        rows[2 * k + 1][2 * k] = involute(p, w)
    return SesqForm(RingMatrix(G, rows, n, n), w)


def gluck_form(G: GroupSpec, w: Character | None = None, twisted: bool = False) -> SesqForm:
    """Rank-one forms (a, b) -> 0 and (a, b) -> a conj(b) on Z[G]."""
    w = w or Character.trivial(G)
    return SesqForm(RingMatrix(G, [[1 if twisted else 0]], 1, 1), w)


# ---------------------------------------------------------------- the map B

def order_two_negative(G: GroupSpec, w: Character) -> list[str]:
    """Generators of order two with w = -1 (finite-order elements of a free
    product are conjugate into a factor, and only the generator can have
    order two with w = -1 in our cyclic factors or ZxC2's T)."""
    out = []
    for name in G.generators:
        if G.gen_order(name) == 2 and w(G.gen_word(name)) == -1:
            out.append(name)
    return out


def dual_basis_values(A: BasedLattice) -> list[list[RingElt]]:
    """f^k(b_j) for the Z-basis f^k of A^dagger dual to (b_j) under coefficient of 1.

    f^k(b_j) = sum_h (M_{h^-1})_{kj} h.
    """
    G = A.group
    mats = {h: A.act_word(G.inv(h)) for h in G.elements()}
    return [[RingElt(G, {h: M[k, j] for h, M in mats.items() if M[k, j]})
             for j in range(A.rank)] for k in range(A.rank)]


def b_matrix(A: BasedLattice, w: Character) -> IntMatrix:
    """Integer matrix of B on the Gamma basis, for finite G.

    Rows are indexed by (k, l, h): the coefficient of h in B(x)(f^k, f^l).
    """
    G = A.group
    F = dual_basis_values(A)
    r = A.rank
    conjF = [[involute(F[k][j], w) for j in range(r)] for k in range(r)]
    cols = []
    for i, j in gamma_index(r):
        col = []
        for k in range(r):
            for l in range(r):
                val = conjF[k][i] * F[l][j]
                if i != j:
                    val = val + conjF[k][j] * F[l][i]
                col.extend(element_coords(val))
        cols.append(col)
    return IntMatrix.from_columns(cols, r * r * len(G.elements()))


@dataclass(frozen=True)
class BMapResult:
    domain: AbGroup
    matrix: IntMatrix
    kernel: AbGroup
    relations: IntMatrix
    exact: bool


def b_map(A: BasedLattice, w: Character | None = None) -> BMapResult:
    """B_A on Z^w tensor Gamma(A); kernel = ker(B) / relations."""
    G = A.group
    w = w or Character.trivial(G)
    if not G.is_finite:
        raise ValueError("b_map needs a finite group; use b_map_aug_truncated for Z[G] ideals")
    bad = order_two_negative(G, w)
    if bad:
        warnings.warn(f"order-two generators with w = -1: {', '.join(bad)}", stacklevel=2)
    X = gamma(A)
    R = coinvariant_relations(X, w)
    B = b_matrix(A, w)
    if not (B @ R).is_zero():
        raise ArithmeticError("B does not factor through the coinvariants")
    K = kernel_basis(B)
    sq = Subquotient.build(K, R)
    return BMapResult(cokernel(R), B, sq.group, R, True)


@dataclass(frozen=True)
class TruncatedKernel:
    safe_kernel_rank: int
    unexplained: int
    L: int

    @property
    def injective(self) -> bool:
        return self.unexplained == 0


def b_map_aug_truncated(G: GroupSpec, v: Character | None = None, w: Character | None = None,
                        L: int = DEFAULT_L) -> TruncatedKernel:
    """Injectivity of B on Gamma(I^v) through the safe part of the ball.

    Uses the inclusion f: I^v -> Z[G] as functional, so
    B(a (x) b + b (x) a)(f, f) = conj(a) b + conj(b) a. Kernel vectors supported
    on safe Gamma-basis vectors must lie in the span of the safe relations.
    """
    v = v or Character.trivial(G)
    w = w or Character.trivial(G)
    I = aug_ideal(G, v, L)
    X = gamma(I)
    words = [h for h in I.labels]
    elts = [RingElt(G, {h: v(h), (): -1}) for h in words]
    conj = [involute(e, w) for e in elts]
    vals = []
    for i, j in gamma_index(I.rank):
        val = conj[i] * elts[j]
        if i != j:
            val = val + conj[j] * elts[i]
        vals.append(val.as_dict())
    support: dict[Word, int] = {}
    for d in vals:
        for u in d:
            support.setdefault(u, len(support))
    safe = sorted(X.safe)
    B = IntMatrix.from_columns([[vals[c].get(u, 0) for u in support] for c in safe], len(support))
    K = kernel_basis(B)
    Rfull = coinvariant_relations(X, w)
    # relations whose support is inside the safe set
    keep = [c for c in range(Rfull.ncols)
            if all(Rfull[i, c] == 0 or i in X.safe for i in range(Rfull.nrows))]
    R = IntMatrix.from_columns([[Rfull[i, c] for i in safe] for c in keep], len(safe))
    unexplained = sum(1 for c in range(K.ncols) if solve(R, K.column(c)) is None)
    return TruncatedKernel(K.ncols, unexplained, L)


# ---------------------------------------------------------------- evaluation pairing

@dataclass(frozen=True)
class EvPairing:
    cohomology: AbGroup
    homology: AbGroup
    matrix: IntMatrix
    kernel: AbGroup
    cokernel: AbGroup

    @property
    def is_isomorphism(self) -> bool:
        return self.kernel.is_trivial and self.cokernel.is_trivial


def _cochain_matrix(D: RingMatrix) -> IntMatrix:
    """delta y = D y on Z[G]^r, with y_i expanded over ``G.elements()``."""
    G = D.group
    els = G.elements()
    pos = {u: k for k, u in enumerate(els)}
    n = len(els)
    entries: dict[tuple[int, int], int] = {}
    for jrow in range(D.nrows):
        for i in range(D.ncols):
            for u, c in D[jrow, i].as_dict().items():
                for s, g in enumerate(els):
                    key = (jrow * n + pos[G.mul(u, g)], i * n + s)
                    entries[key] = entries.get(key, 0) + c
    return IntMatrix.from_sparse(D.nrows * n, D.ncols * n, {k: c for k, c in entries.items() if c})


def ev_pairing(C, k: int = 2) -> EvPairing:
    """ev: H^k(C; Z[G]) -> Hom(H_k(C; Z[G]), Z[G]) for finite G.

    Hom_{Z[G]}(M, Z[G]) is identified with Hom_Z(M, Z) through the coefficient
    of the identity, so the target is Z^(free rank of H_k).
    """
    G = C.group
    if not G.is_finite:
        raise NotImplementedError("evaluation pairing is only implemented for finite groups")
    n = len(G.elements())
    dims = [r * n for r in C.ranks]

    def dk(j):  # chain differential C_j -> C_{j-1} over Z
        if j < 1 or j >= len(C.ranks):
            lo = dims[j - 1] if 0 <= j - 1 < len(dims) else 0
            hi = dims[j] if 0 <= j < len(dims) else 0
            return IntMatrix.zeros(lo, hi)
        return regular_expand(C.d(j))

    def delta(j):  # cochain differential C^j -> C^{j+1}
        if j + 1 >= len(C.ranks):
            return IntMatrix.zeros(0, dims[j])
        return _cochain_matrix(C.d(j + 1))

    Hk = Subquotient.build(kernel_basis(dk(k)), dk(k + 1))
    Zk = kernel_basis(delta(k))
    Bk = delta(k - 1) if k >= 1 else IntMatrix.zeros(dims[k], 0)
    coh = Subquotient.build(Zk, Bk)
    reps = Hk.free_reps()
    identity = G.elements().index(())
    # value of cocycle column y on cycle x: coefficient of 1 in sum_i x_i y_i
    rows = []
    for m in range(reps.ncols):
        x = reps.column(m)
        row = []
        for c in range(Zk.ncols):
            y = Zk.column(c)
            total = 0
            for i in range(C.ranks[k]):
                xi = RingElt(G, {G.elements()[s]: x[i * n + s] for s in range(n) if x[i * n + s]})
                yi = RingElt(G, {G.elements()[s]: y[i * n + s] for s in range(n) if y[i * n + s]})
                total += (xi * yi).coeff(G.elements()[identity])
            row.append(total)
        rows.append(row)
    E = IntMatrix(rows, reps.ncols, Zk.ncols)
    # kernel on cohomology: ker(E on Z^k) / B^k, in Z^k coordinates
    Bcoords = IntMatrix.from_columns([solve(Zk, Bk.column(c)) for c in range(Bk.ncols)], Zk.ncols)
    ker = Subquotient.build(kernel_basis(E), Bcoords).group
    return EvPairing(coh.group, Hk.group, E, ker, cokernel(E))

