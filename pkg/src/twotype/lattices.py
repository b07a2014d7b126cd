"""Z[G]-modules that are free abelian, with an explicit Z-basis.

For infinite G the basis is cut off at a word ball and the action is only
trusted on the ``safe`` basis vectors, whose images under every generator and
its inverse stay inside the ball. Nothing wraps silently at the boundary.

Action matrices use the column convention: column j of ``action[g]`` is g
applied to basis vector j.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Hashable, Sequence

from .exactla import (IntMatrix, Subquotient, block_diag, inverse_unimodular, is_unimodular,
                      kernel_basis, rank)
from .groupring import (Character, Cyclic, GroupSpec, RingMatrix, Word, ZxC2,
                        involute)

DEFAULT_L = 3


@dataclass(frozen=True)
class BasedLattice:
    group: GroupSpec
    labels: tuple[Hashable, ...]
    action: dict[str, IntMatrix]
    inverse: dict[str, IntMatrix]
    truncated: bool = False
    L: int | None = None
    safe: frozenset[int] = field(default=frozenset())

    def __post_init__(self):
        n = len(self.labels)
        for g in self.group.generators:
            for m in (self.action[g], self.inverse[g]):
                if m.shape != (n, n):
                    raise ValueError(f"action of {g} has shape {m.shape}, expected {(n, n)}")
        if not self.truncated:
            object.__setattr__(self, "safe", frozenset(range(n)))

    @property
    def rank(self) -> int:
        return len(self.labels)

    @property
    def safe_radius(self) -> int | None:
        return None if not self.truncated else (self.L - 1 if self.L else 0)

    def act_word(self, u: Word) -> IntMatrix:
        """Matrix of a group element (exact only where the factors are exact)."""
        out = IntMatrix.identity(self.rank)
        for fi, x in reversed(u):
            out = self.syllable_matrix(fi, x) @ out
        return out

    def syllable_matrix(self, fi: int, x) -> IntMatrix:
        G = self.group
        f, ns = G.factors[fi], G.names[fi]
        if isinstance(f, ZxC2):
            k, e = x
            return _power(self, ns[0], k) @ _power(self, ns[1], e)
        return _power(self, ns[0], x)

    def deep(self, depth: int) -> list[int]:
        """Basis vectors that stay safe along any path of ``depth`` generator steps."""
        ok = set(self.safe)
        mats = [m for g in self.group.generators for m in (self.action[g], self.inverse[g])]
        for _ in range(depth - 1):
            ok = {j for j in ok
                  if all(M[i, j] == 0 or i in ok for M in mats for i in range(self.rank))}
        return sorted(ok)

    def check_relations(self) -> bool:
        """Generator matrices are mutually inverse and satisfy the factor relations
        (on vectors deep enough inside the ball for truncated lattices)."""
        I = IntMatrix.identity(self.rank)

        def agrees(P, Q, depth):
            return all(P.column(j) == Q.column(j) for j in self.deep(depth))

        for g in self.group.generators:
            A, B = self.action[g], self.inverse[g]
            if not (agrees(A @ B, I, 1) and agrees(B @ A, I, 1)):
                return False
        for fi, f in enumerate(self.group.factors):
            ns = self.group.names[fi]
            if isinstance(f, Cyclic):
                if not agrees(_power(self, ns[0], f.n), I, f.n):
                    return False
            elif isinstance(f, ZxC2):
                t, T = self.action[ns[0]], self.action[ns[1]]
                if not (agrees(T @ T, I, 2) and agrees(t @ T, T @ t, 2)):
                    return False
        return True


def _power(A: BasedLattice, g: str, k: int) -> IntMatrix:
    M = A.action[g] if k >= 0 else A.inverse[g]
    out = IntMatrix.identity(A.rank)
    for _ in range(abs(k)):
        out = M @ out
    return out


# ---------------------------------------------------------------- builders

def from_matrices(G: GroupSpec, action: dict[str, IntMatrix], labels: Sequence[Hashable] | None = None,
                  check: bool = True) -> BasedLattice:
    """A lattice over a group whose generators act by the given unimodular matrices."""
    n = next(iter(action.values())).nrows if action else (len(labels) if labels else 0)
    labels = tuple(labels) if labels is not None else tuple(range(n))
    inverse = {g: inverse_unimodular(M) for g, M in action.items()}
    A = BasedLattice(G, labels, dict(action), inverse)
    if check and not A.check_relations():
        raise ValueError("action matrices do not satisfy the group relations")
    return A


def _from_word_map(G: GroupSpec, labels: Sequence[Hashable],
                   image: Callable[[str, int, Hashable], dict[Hashable, int] | None],
                   truncated: bool, L: int | None) -> BasedLattice:
    """Assemble action matrices from a rule giving g^(+-1) . label as a combination.

    ``image`` returns None when the image leaves the truncation ball.
    """
    index = {lab: i for i, lab in enumerate(labels)}
    n = len(labels)
    action, inverse = {}, {}
    unsafe = set()
    for g in G.generators:
        for sign, store in ((1, action), (-1, inverse)):
            cols = []
            for j, lab in enumerate(labels):
                col = [0] * n
                img = image(g, sign, lab)
                if img is None:
                    unsafe.add(j)
                else:
                    for lab2, c in img.items():
                        if lab2 in index:
                            col[index[lab2]] += c
                        else:
                            unsafe.add(j)
                cols.append(col)
            store[g] = IntMatrix.from_columns(cols, n)
    safe = frozenset(range(n)) - unsafe
    return BasedLattice(G, tuple(labels), action, inverse, truncated, L, safe)


def trivial_module(G: GroupSpec, v: Character | None = None) -> BasedLattice:
    """Z^v: rank one, g acts by v(g)."""
    v = v or Character.trivial(G)
    return _from_word_map(G, ("1",), lambda g, s, lab: {lab: v(G.gen_word(g))}, False, None)


def free_module(G: GroupSpec, r: int = 1, L: int = DEFAULT_L) -> BasedLattice:
    """Z[G]^r with basis (h, i) for h in the ball; left multiplication."""
    words = G.ball(L)
    labels = [(h, i) for i in range(r) for h in words]
    return _from_word_map(G, labels, lambda g, s, lab: {(G.mul(G.gen_word(g, s), lab[0]), lab[1]): 1},
                          not G.is_finite, None if G.is_finite else L)


def aug_ideal(G: GroupSpec, v: Character | None = None, L: int = DEFAULT_L) -> BasedLattice:
    """Kernel of g -> v(g), with Z-basis e_h = v(h) h - 1 for h != 1 in the ball.

    g e_h = v(g) (e_{gh} - e_g), with e_1 = 0.
    """
    v = v or Character.trivial(G)
    words = [h for h in G.ball(L) if h]

    def image(g, s, h):
        gw = G.gen_word(g, s)
        vg = v(gw)
        out: dict = {}
        gh = G.mul(gw, h)
        if gh:
            out[gh] = out.get(gh, 0) + vg
        if gw:
            out[gw] = out.get(gw, 0) - vg
        return out

    return _from_word_map(G, words, image, not G.is_finite, None if G.is_finite else L)


def aug_ideal_inclusion(G: GroupSpec, v: Character | None = None, L: int = DEFAULT_L) -> IntMatrix:
    """Coordinates of e_h = v(h) h - 1 inside Z[G] (basis = the ball)."""
    v = v or Character.trivial(G)
    words = G.ball(L)
    idx = {w: i for i, w in enumerate(words)}
    cols = []
    for h in words[1:]:
        col = [0] * len(words)
        col[idx[h]] += v(h)
        col[idx[()]] -= 1
        cols.append(col)
    return IntMatrix.from_columns(cols, len(words))


def direct_sum(*parts: BasedLattice) -> BasedLattice:
    G = parts[0].group
    if any(p.group != G for p in parts):
        raise ValueError("summands over different groups")
    labels = tuple((k, lab) for k, p in enumerate(parts) for lab in p.labels)
    action = {g: block_diag(*(p.action[g] for p in parts)) for g in G.generators}
    inverse = {g: block_diag(*(p.inverse[g] for p in parts)) for g in G.generators}
    safe, off = set(), 0
    for p in parts:
        safe |= {off + j for j in p.safe}
        off += p.rank
    truncated = any(p.truncated for p in parts)
    Ls = [p.L for p in parts if p.L is not None]
    return BasedLattice(G, labels, action, inverse, truncated, min(Ls) if Ls else None,
                        frozenset(safe))


def zdual(A: BasedLattice) -> BasedLattice:
    """Hom_Z(A, Z) with (g f)(x) = f(g^-1 x): g acts by the transpose of g^-1."""
    if A.truncated:
        raise ValueError("dual of a truncated lattice is not supported")
    action = {g: A.inverse[g].transpose() for g in A.group.generators}
    inverse = {g: A.action[g].transpose() for g in A.group.generators}
    return BasedLattice(A.group, tuple(("dual", lab) for lab in A.labels), action, inverse)


def quotient(A: BasedLattice, sub: IntMatrix) -> BasedLattice:
    """A / span(sub columns), which must be an invariant, saturated sublattice."""
    if A.truncated:
        raise ValueError("quotient of a truncated lattice is not supported")
    sq = Subquotient.build(IntMatrix.identity(A.rank), sub)
    if sq.torsion_indices:
        raise ValueError("quotient has torsion; sublattice is not saturated")
    reps = sq.free_reps()
    action, inverse = {}, {}
    for g in A.group.generators:
        for M, store in ((A.action[g], action), (A.inverse[g], inverse)):
            cols = [sq.free_coords(M.apply(reps.column(j))) for j in range(reps.ncols)]
            store[g] = IntMatrix.from_columns(cols, reps.ncols)
    lat = BasedLattice(A.group, tuple(range(reps.ncols)), action, inverse)
    if not lat.check_relations():
        raise ValueError("sublattice is not invariant")
    return lat


def norm_cokernel(G: GroupSpec) -> BasedLattice:
    """Z[G] / Z N for a finite group, N the norm element."""
    if not G.is_finite:
        raise ValueError("norm element needs a finite group")
    R = free_module(G)
    N = IntMatrix.from_columns([[1] * R.rank], R.rank)
    return quotient(R, N)


# ---------------------------------------------------------------- induction

def _split_suffix(u: Word, factors: set[int]) -> tuple[Word, Word]:
    k = len(u)
    while k > 0 and u[k - 1][0] in factors:
        k -= 1
    return u[:k], tuple(u[k:])


def induce(A: BasedLattice, pi: GroupSpec, factors: Sequence[int], L: int = DEFAULT_L) -> BasedLattice:
    """Induce A from the sub-free-product of pi on ``factors`` up to pi.

    Basis: (r, b) with r a coset representative (no trailing syllable in the
    subgroup) of at most L-1 syllables and b a basis vector of A. Then
    g (r, b) = (r', h b) where g r = r' h splits off the subgroup part h.
    """
    factors = tuple(factors)
    H = pi.sub(factors)
    if H.factors != A.group.factors or H.names != A.group.names:
        raise ValueError("lattice group is not the requested sub-free-product")
    fset = set(factors)
    back = {f: i for i, f in enumerate(factors)}
    if len(factors) == len(pi.factors):
        reps = [()]
    else:
        reps = [u for u in pi.ball(L) if len(u) <= L - 1 and (not u or u[-1][0] not in fset)]
    labels = [(r, lab) for r in reps for lab in A.labels]
    aidx = {lab: i for i, lab in enumerate(A.labels)}
    cache: dict[Word, IntMatrix] = {}

    def h_matrix(h: Word) -> IntMatrix:
        if h not in cache:
            cache[h] = A.act_word(tuple((back[fi], x) for fi, x in h))
        return cache[h]

    def image(g, s, lab):
        r, b = lab
        gr = pi.mul(pi.gen_word(g, s), r)
        r2, h = _split_suffix(gr, fset)
        if r2 not in rep_set:
            return None
        M = h_matrix(h)
        j = aidx[b]
        if A.truncated and j not in A.safe and h:
            return None
        return {(r2, A.labels[i]): M[i, j] for i in range(A.rank) if M[i, j]}

    rep_set = set(reps)
    truncated = not pi.is_finite and len(factors) != len(pi.factors) or A.truncated
    out = _from_word_map(pi, labels, image, truncated, L if truncated else None)
    return out


# ---------------------------------------------------------------- duals of maps

def dual_map(M: RingMatrix, w: Character) -> RingMatrix:
    """Conjugate transpose under the w-twisted involution."""
    return RingMatrix(M.group, [[involute(M[i, j], w) for i in range(M.nrows)]
                                for j in range(M.ncols)], M.ncols, M.nrows)


# ---------------------------------------------------------------- Z[C2] lattices

@dataclass(frozen=True)
class Fingerprint2:
    """Multiplicities of Z, Z^- and Z[C2] in a Z[C2]-lattice."""

    a: int
    b: int
    c: int

    @property
    def rank(self) -> int:
        return self.a + self.b + 2 * self.c

    def __str__(self) -> str:
        parts = []
        for k, name in ((self.a, "Z"), (self.b, "Z-"), (self.c, "Z[C2]")):
            if k == 1:
                parts.append(name)
            elif k > 1:
                parts.append(f"{name}^{k}")
        return " + ".join(parts) if parts else "0"


def fingerprint2(A: BasedLattice) -> Fingerprint2:
    """Decompose a Z[C2]-lattice into indecomposables.

    rank = a + b + 2c, rk ker(T-1) = a + c, rk ker(T+1) = b + c, and
    ker(T-1) / im(1+T) is (Z/2)^a.
    """
    G = A.group
    if len(G.factors) != 1 or G.factors[0] != Cyclic(2) or A.truncated:
        raise ValueError("fingerprint2 needs an untruncated lattice over C2")
    T = A.action[G.generators[0]]
    I = IntMatrix.identity(A.rank)
    K = kernel_basis(T - I)
    kp = K.ncols
    km = A.rank - rank(T + I)
    sq = Subquotient.build(K, T + I)
    if sq.free_indices:
        raise ArithmeticError("im(1+T) has smaller rank than ker(T-1)")
    a = sum(1 for d in sq.diag if d == 2)
    if any(d not in (1, 2) for d in sq.diag):
        raise ArithmeticError("ker(T-1)/im(1+T) is not elementary abelian")
    c = kp - a
    b = km - c
    fp = Fingerprint2(a, b, c)
    if b < 0 or c < 0 or fp.rank != A.rank:
        raise ArithmeticError(f"inconsistent invariants for a Z[C2]-lattice: {(a, b, c)}")
    return fp


def intertwiners(A: BasedLattice, B: BasedLattice) -> list[IntMatrix]:
    """Z-basis of Hom_G(A, B) as B.rank x A.rank matrices."""
    if A.group != B.group:
        raise ValueError("lattices over different groups")
    m, n = B.rank, A.rank
    rows = []
    # unknown X (m x n), flattened row-major; equations X A_g - B_g X = 0
    for g in A.group.generators:
        Ag, Bg = A.action[g], B.action[g]
        for i in range(m):
            for j in range(n):
                row = [0] * (m * n)
                for k in range(n):
                    row[i * n + k] += Ag[k, j]
                for k in range(m):
                    row[k * n + j] -= Bg[i, k]
                rows.append(row)
    E = IntMatrix(rows, len(rows), m * n) if rows else IntMatrix.zeros(0, m * n)
    K = kernel_basis(E)
    return [IntMatrix([[K[i * n + j, c] for j in range(n)] for i in range(m)], m, n)
            for c in range(K.ncols)]


def find_isomorphism(A: BasedLattice, B: BasedLattice, bound: int = 1) -> IntMatrix | None:
    """Search small combinations of intertwiners for a unimodular one."""
    if A.rank != B.rank:
        return None
    basis = intertwiners(A, B)
    if not basis:
        return IntMatrix.identity(0) if A.rank == 0 else None
    coeffs = range(-bound, bound + 1)
    for combo in itertools.product(coeffs, repeat=len(basis)):
        if not any(combo):
            continue
        X = IntMatrix.zeros(B.rank, A.rank)
        for c, M in zip(combo, basis):
            if c:
                X = X + M.scale(c)
        if is_unimodular(X):
            return X
    return None


def is_equivariant(X: IntMatrix, A: BasedLattice, B: BasedLattice) -> bool:
    return all(X @ A.action[g] == B.action[g] @ X for g in A.group.generators)


def elementary_conjugate(M: dict[str, IntMatrix], P: IntMatrix) -> dict[str, IntMatrix]:
    Pi = inverse_unimodular(P)
    return {g: P @ A @ Pi for g, A in M.items()}
