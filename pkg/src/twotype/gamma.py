"""Whitehead's Gamma on based lattices, as symmetric tensors.

For a lattice A with basis b_1..b_r, Gamma(A) has basis b_i (x) b_i followed by
b_i (x) b_j + b_j (x) b_i for i < j in lexicographic order. An element is
handled as a symmetric r x r integer matrix S (coefficient of b_k (x) b_l),
and g acts by S -> M_g S M_g^T.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exactla import AbGroup, IntMatrix, block_diag, cokernel, inverse_unimodular, is_unimodular
from .groupring import Character, GroupSpec
from .lattices import DEFAULT_L, BasedLattice, aug_ideal, aug_ideal_inclusion, direct_sum


def gamma_index(r: int) -> list[tuple[int, int]]:
    return [(i, i) for i in range(r)] + [(i, j) for i in range(r) for j in range(i + 1, r)]


def sym_to_gamma(S: list[list[int]], r: int) -> list[int]:
    return [S[i][j] for i, j in gamma_index(r)]


def gamma_to_sym(x: list[int], r: int) -> list[list[int]]:
    S = [[0] * r for _ in range(r)]
    for c, (i, j) in zip(x, gamma_index(r)):
        S[i][j] = c
        S[j][i] = c
    return S


def outer_sym(u: list[int], v: list[int]) -> list[list[int]]:
    """Matrix of u (x) v + v (x) u, halved on the diagonal so u (x) u maps to u u^T."""
    r = len(u)
    return [[u[i] * v[j] + v[i] * u[j] for j in range(r)] for i in range(r)]


def gamma_matrix(M: IntMatrix) -> IntMatrix:
    """Matrix of Gamma(M) in the Gamma bases of source and target."""
    r, s = M.ncols, M.nrows
    cols = []
    for i, j in gamma_index(r):
        u, v = list(M.column(i)), list(M.column(j))
        if i == j:
            S = [[u[k] * u[l] for l in range(s)] for k in range(s)]
        else:
            S = outer_sym(u, v)
        cols.append(sym_to_gamma(S, s))
    return IntMatrix.from_columns(cols, s * (s + 1) // 2)


@dataclass(frozen=True)
class GammaLattice:
    source: BasedLattice
    index: tuple[tuple[int, int], ...]
    action: dict[str, IntMatrix]
    safe: frozenset[int]

    @property
    def rank(self) -> int:
        return len(self.index)

    @property
    def group(self) -> GroupSpec:
        return self.source.group


def gamma(A: BasedLattice) -> GammaLattice:
    idx = gamma_index(A.rank)
    action = {g: gamma_matrix(A.action[g]) for g in A.group.generators}
    safe = frozenset(k for k, (i, j) in enumerate(idx) if i in A.safe and j in A.safe)
    return GammaLattice(A, tuple(idx), action, safe)


@dataclass(frozen=True)
class Coinvariants:
    group: AbGroup
    relations: IntMatrix
    exact: bool
    safe_radius: int | None


def coinvariant_relations(X: GammaLattice, w: Character | None = None) -> IntMatrix:
    """Columns w(g) g x - x for generators g and safe basis vectors x."""
    G = X.group
    w = w or Character.trivial(G)
    cols = []
    I = IntMatrix.identity(X.rank)
    for g in G.generators:
        wg = w(G.gen_word(g))
        R = X.action[g].scale(wg) - I
        for j in sorted(X.safe):
            col = R.column(j)
            if any(col):
                cols.append(col)
    return IntMatrix.from_columns(cols, X.rank)


def coinvariants(X: GammaLattice, w: Character | None = None) -> Coinvariants:
    """Z^w tensor_{Z[G]} Gamma(A) as the cokernel of the twisted relations."""
    R = coinvariant_relations(X, w)
    A = X.source
    return Coinvariants(cokernel(R), R, not A.truncated, A.safe_radius)


# ---------------------------------------------------------------- Baues splitting

@dataclass(frozen=True)
class BauesSplit:
    """Gamma(A) + Gamma(A') + A (x) A' -> Gamma(A + A'), a permutation matrix."""

    matrix: IntMatrix
    block_action: dict[str, IntMatrix]
    target_action: dict[str, IntMatrix]

    def is_isomorphism(self) -> bool:
        return is_unimodular(self.matrix)

    def is_equivariant(self) -> bool:
        return all(self.matrix @ self.block_action[g] == self.target_action[g] @ self.matrix
                   for g in self.block_action)


def kron(A: IntMatrix, B: IntMatrix) -> IntMatrix:
    rows = []
    for i in range(A.nrows):
        for k in range(B.nrows):
            rows.append([A[i, j] * B[k, l] for j in range(A.ncols) for l in range(B.ncols)])
    return IntMatrix(rows, A.nrows * B.nrows, A.ncols * B.ncols)


def baues_split(A: BasedLattice, B: BasedLattice) -> BauesSplit:
    """The splitting a (x) a' -> a (x) a' + a' (x) a, with the Gamma parts included."""
    r, s = A.rank, B.rank
    S = direct_sum(A, B)
    tgt = {(i, j): k for k, (i, j) in enumerate(gamma_index(r + s))}
    cols = []
    for i, j in gamma_index(r):
        cols.append(tgt[(i, j)])
    for i, j in gamma_index(s):
        cols.append(tgt[(r + i, r + j)])
    for i in range(r):
        for j in range(s):
            cols.append(tgt[(i, r + j)])
    n = len(cols)
    P = IntMatrix.from_sparse(n, n, {(c, k): 1 for k, c in enumerate(cols)})
    GA, GB, GS = gamma(A), gamma(B), gamma(S)
    block = {g: block_diag(GA.action[g], GB.action[g], kron(A.action[g], B.action[g]))
             for g in A.group.generators}
    return BauesSplit(P, block, GS.action)


# ---------------------------------------------------------------- theta and psi

@dataclass(frozen=True)
class ThetaPsi:
    """theta : Gamma(Z[G]) / Z[G] -> Gamma(I^v) and psi going back.

    Gamma(Z[G]) / Z[G] has basis g (x) h + h (x) g over pairs g < h of ball
    words (the g (x) g vectors are dropped). ``pairs`` lists them.
    """

    group: GroupSpec
    words: tuple
    pairs: tuple
    theta: IntMatrix
    psi: IntMatrix
    ideal: BasedLattice

    def psi_theta_is_identity(self) -> bool:
        return self.psi @ self.theta == IntMatrix.identity(len(self.pairs))

    def theta_psi_is_identity(self) -> bool:
        n = self.theta.nrows
        return self.theta @ self.psi == IntMatrix.identity(n)

    def theta_is_invertible(self) -> bool:
        return is_unimodular(self.theta)

    def theta_equivariant(self) -> bool:
        """theta(g x) = g theta(x) for generators g and pairs whose translates stay in the ball."""
        G = self.group
        GI = gamma(self.ideal)
        pos = {p: k for k, p in enumerate(self.pairs)}
        safe_gamma = GI.safe
        for g in G.generators:
            for sgn in (1, -1):
                gw = G.gen_word(g, sgn)
                M = GI.action[g] if sgn == 1 else gamma_matrix(self.ideal.inverse[g])
                for k, (a, b) in enumerate(self.pairs):
                    ga, gb = G.mul(gw, self.words[a]), G.mul(gw, self.words[b])
                    key = _pair_key(self.words, ga, gb)
                    if key is None or key not in pos:
                        continue
                    col = self.theta.column(k)
                    support = [i for i, c in enumerate(col) if c]
                    if any(i not in safe_gamma for i in support):
                        continue
                    lhs = self.theta.column(pos[key])
                    rhs = M.apply(col)
                    if tuple(lhs) != tuple(rhs):
                        return False
        return True


def _pair_key(words, u, v):
    idx = {w: i for i, w in enumerate(words)}
    if u not in idx or v not in idx:
        return None
    i, j = idx[u], idx[v]
    return (min(i, j), max(i, j))


def theta_psi(G: GroupSpec, v: Character | None = None, L: int = DEFAULT_L) -> ThetaPsi:
    """theta: g (x) h + h (x) g -> -v(gh) (v(g) g - v(h) h)^(x)2, and psi induced by I^v in Z[G]."""
    v = v or Character.trivial(G)
    words = tuple(G.ball(L))
    n = len(words)
    pairs = tuple((i, j) for i in range(n) for j in range(i + 1, n))
    ideal = aug_ideal(G, v, L)
    r = ideal.rank  # basis e_h for words[1:]
    gidx = gamma_index(r)
    theta_cols = []
    for i, j in pairs:
        g, h = words[i], words[j]
        # v(g) g - v(h) h = e_g - e_h, with e_1 = 0
        u = [0] * r
        if i:
            u[i - 1] += 1
        if j:
            u[j - 1] -= 1
        c = -v(g) * v(h)
        S = [[c * u[k] * u[l] for l in range(r)] for k in range(r)]
        theta_cols.append(sym_to_gamma(S, r))
    theta = IntMatrix.from_columns(theta_cols, len(gidx))
    J = aug_ideal_inclusion(G, v, L)
    GJ = gamma_matrix(J)  # Gamma(I^v) -> Gamma(Z[G])
    full = gamma_index(n)
    keep = [k for k, (a, b) in enumerate(full) if a != b]
    psi = GJ.submatrix(keep, range(GJ.ncols))
    assert [full[k] for k in keep] == list(pairs)
    return ThetaPsi(G, words, pairs, theta, psi, ideal)


def theta_inverse(tp: ThetaPsi) -> IntMatrix:
    return inverse_unimodular(tp.theta)
