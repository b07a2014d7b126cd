"""Exact integer linear algebra.

Matrices hold Python ints (arbitrary precision). The Smith normal form is the
workhorse: homology, kernels, cokernels and integer solving all go through it.
Integer matrices use the usual column convention, x -> A x.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence


class IntMatrix:
    """Immutable integer matrix with explicit shape (zero dimensions allowed)."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, rows: Iterable[Iterable[int]], nrows: int | None = None,
                 ncols: int | None = None):
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if nrows is None:
            nrows = len(rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if nrows < 0 or ncols < 0:
            raise ValueError("negative dimension")
        if len(rows) != nrows or any(len(r) != ncols for r in rows):
            raise ValueError(f"rows do not match shape {nrows}x{ncols}")
        self.nrows = nrows
        self.ncols = ncols
        self.rows = rows

    # construction
    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> IntMatrix:
        return cls([[0] * ncols for _ in range(nrows)], nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def from_sparse(cls, nrows: int, ncols: int, entries: dict[tuple[int, int], int]) -> IntMatrix:
        out = [[0] * ncols for _ in range(nrows)]
        for (i, j), v in entries.items():
            out[i][j] += v
        return cls(out, nrows, ncols)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence[int]], nrows: int) -> IntMatrix:
        return cls([[c[i] for c in cols] for i in range(nrows)], nrows, len(cols))

    @classmethod
    def diag(cls, entries: Sequence[int]) -> IntMatrix:
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)], n, n)

    def to_sparse(self) -> dict[tuple[int, int], int]:
        return {(i, j): v for i, r in enumerate(self.rows) for j, v in enumerate(r) if v}

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.ncols)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.shape, self.rows))

    def __repr__(self) -> str:
        return f"IntMatrix({self.tolist()}, {self.nrows}, {self.ncols})"

    # arithmetic
    def transpose(self) -> IntMatrix:
        return IntMatrix([[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)],
                         self.ncols, self.nrows)

    @property
    def T(self) -> IntMatrix:
        return self.transpose()

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = other.columns()
        out = [[sum(a * b for a, b in zip(r, c) if a) for c in cols] for r in self.rows]
        return IntMatrix(out, self.nrows, other.ncols)

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        if len(v) != self.ncols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(r, v) if a) for r in self.rows)

    def __add__(self, other: IntMatrix) -> IntMatrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
                         self.nrows, self.ncols)

    def __neg__(self) -> IntMatrix:
        return IntMatrix([[-a for a in r] for r in self.rows], self.nrows, self.ncols)

    def __sub__(self, other: IntMatrix) -> IntMatrix:
        return self + (-other)

    def scale(self, c: int) -> IntMatrix:
        return IntMatrix([[c * a for a in r] for r in self.rows], self.nrows, self.ncols)

    def is_zero(self) -> bool:
        return all(a == 0 for r in self.rows for a in r)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> IntMatrix:
        return IntMatrix([[self.rows[i][j] for j in cols] for i in rows], len(rows), len(cols))

    def hstack(self, other: IntMatrix) -> IntMatrix:
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch")
        return IntMatrix([a + b for a, b in zip(self.rows, other.rows)],
                         self.nrows, self.ncols + other.ncols)

    def vstack(self, other: IntMatrix) -> IntMatrix:
        if self.ncols != other.ncols:
            raise ValueError("column count mismatch")
        return IntMatrix(self.rows + other.rows, self.nrows + other.nrows, self.ncols)

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        n = self.nrows
        a = self.tolist()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1] if n else 1


def block_diag(*blocks: IntMatrix) -> IntMatrix:
    nr = sum(b.nrows for b in blocks)
    nc = sum(b.ncols for b in blocks)
    out = [[0] * nc for _ in range(nr)]
    r0 = c0 = 0
    for b in blocks:
        for i, row in enumerate(b.rows):
            out[r0 + i][c0:c0 + b.ncols] = row
        r0 += b.nrows
        c0 += b.ncols
    return IntMatrix(out, nr, nc)


# ---------------------------------------------------------------- Smith form

def smith_normal_form(A: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (U, D, V) with U A V = D, U and V unimodular, D in Smith form.

    Pivoting picks the entry of least absolute value in the active block; a
    non-dividing entry is folded into the pivot row so the divisibility chain
    comes out directly.
    """
    m, n = A.shape
    a = A.tolist()
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, q):
        # row dst -= q * row src
        if q:
            ra, rs = a[dst], a[src]
            for k in range(n):
                if rs[k]:
                    ra[k] -= q * rs[k]
            ua, us = U[dst], U[src]
            for k in range(m):
                if us[k]:
                    ua[k] -= q * us[k]

    def add_col(src, dst, q):
        # col dst -= q * col src
        if q:
            for r in a:
                if r[src]:
                    r[dst] -= q * r[src]
            for r in V:
                if r[src]:
                    r[dst] -= q * r[src]

    t = 0
    while t < min(m, n):
        # least nonzero entry of the active block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = a[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(t, i, _nearest_quotient(a[i][t], p))
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(t, j, _nearest_quotient(a[t][j], p))
                    if a[t][j]:
                        dirty = True
            if dirty:
                # move the smallest leftover in row/column t to the pivot
                cands = [(abs(a[i][t]), i, t) for i in range(t, m) if a[i][t]]
                cands += [(abs(a[t][j]), t, j) for j in range(t, n) if a[t][j]]
                _, i, j = min(cands)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if a[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(bad, t, -1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return IntMatrix(U, m, m), IntMatrix(a, m, n), IntMatrix(V, n, n)


def _nearest_quotient(x: int, p: int) -> int:
    q, r = divmod(x, p)
    if 2 * abs(r) > abs(p):
        q += 1 if (r > 0) == (p > 0) else -1
    return q


def smith_diagonal(A: IntMatrix) -> list[int]:
    """Nonzero invariant factors of A, in divisibility order."""
    _, D, _ = smith_normal_form(A)
    return [D[i, i] for i in range(min(D.shape)) if D[i, i]]


def rank(A: IntMatrix) -> int:
    return len(smith_diagonal(A))


def rank_mod_p(A: IntMatrix, p: int) -> int:
    rows = [[x % p for x in r] for r in A.rows]
    r = 0
    for c in range(A.ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [(x * inv) % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        r += 1
    return r


def inverse_unimodular(A: IntMatrix) -> IntMatrix:
    """Integer inverse of a unimodular matrix."""
    n = A.nrows
    if A.ncols != n:
        raise ValueError("not square")
    U, D, V = smith_normal_form(A)
    if any(D[i, i] != 1 for i in range(n)):
        raise ValueError("matrix is not unimodular")
    # U A V = I  =>  A^{-1} = V U
    return V @ U


def is_unimodular(A: IntMatrix) -> bool:
    return A.nrows == A.ncols and abs(A.det()) == 1


# ---------------------------------------------------------------- groups

def _invariant_chain(torsion: Iterable[int]) -> tuple[int, ...]:
    ds = sorted(abs(d) for d in torsion if abs(d) > 1)
    # repeatedly replace pairs by (gcd, lcm) until the chain divides
    changed = True
    while changed:
        changed = False
        for i in range(len(ds) - 1):
            for j in range(i + 1, len(ds)):
                if ds[j] % ds[i]:
                    g = gcd(ds[i], ds[j])
                    ds[i], ds[j] = g, ds[i] * ds[j] // g
                    changed = True
        ds = sorted(d for d in ds if d > 1)
    return tuple(ds)


@dataclass(frozen=True)
class AbGroup:
    """Finitely generated abelian group Z^rank + sum Z/d_i with d_1 | d_2 | ..."""

    rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.rank < 0:
            raise ValueError("negative rank")
        object.__setattr__(self, "torsion", _invariant_chain(self.torsion))

    @classmethod
    def from_diagonal(cls, diag: Iterable[int], ngens: int) -> AbGroup:
        """Cokernel of a diagonal relation matrix on ngens generators."""
        diag = [abs(d) for d in diag]
        nonzero = [d for d in diag if d]
        return cls(ngens - len(nonzero), tuple(nonzero))

    @classmethod
    def parse(cls, text: str) -> AbGroup:
        text = text.strip()
        if text == "0":
            return cls()
        rank, tors = 0, []
        for part in text.split("+"):
            part = part.strip()
            if part == "Z":
                rank += 1
            elif part.startswith("Z^"):
                rank += int(part[2:])
            elif part.startswith("Z/"):
                tors.append(int(part[2:]))
            else:
                raise ValueError(f"cannot parse abelian group summand {part!r}")
        return cls(rank, tuple(tors))

    @property
    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    @property
    def order(self) -> int | None:
        if self.rank:
            return None
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def torsion_subgroup(self) -> AbGroup:
        return AbGroup(0, self.torsion)

    def __add__(self, other: AbGroup) -> AbGroup:
        return AbGroup(self.rank + other.rank, self.torsion + other.torsion)

    def __str__(self) -> str:
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, data: dict) -> AbGroup:
        return cls(int(data["rank"]), tuple(int(d) for d in data["torsion"]))


def cokernel(A: IntMatrix) -> AbGroup:
    """Z^nrows / im A."""
    return AbGroup.from_diagonal(smith_diagonal(A), A.nrows)


def kernel_basis(A: IntMatrix) -> IntMatrix:
    """Columns form a saturated Z-basis of ker A."""
    _, D, V = smith_normal_form(A)
    r = sum(1 for i in range(min(D.shape)) if D[i, i])
    return V.submatrix(range(V.nrows), range(r, V.ncols))


def solve(A: IntMatrix, b: Sequence[int], reverse: bool = False) -> tuple[int, ...] | None:
    """Some integer x with A x = b, or None.

    ``reverse`` solves with the unknowns in reverse order, which generally
    lands on a different particular solution.
    """
    if reverse:
        P = list(range(A.ncols))[::-1]
        x = solve(A.submatrix(range(A.nrows), P), b)
        if x is None:
            return None
        out = [0] * A.ncols
        for k, j in enumerate(P):
            out[j] = x[k]
        return tuple(out)
    U, D, V = smith_normal_form(A)
    c = U.apply(b)
    y = [0] * A.ncols
    for i, ci in enumerate(c):
        d = D[i, i] if i < A.ncols else 0
        if d == 0:
            if ci:
                return None
        else:
            if ci % d:
                return None
            y[i] = ci // d
    return V.apply(y)


def solve_matrix(A: IntMatrix, B: IntMatrix) -> IntMatrix | None:
    """Integer X with A X = B, or None."""
    cols = []
    for j in range(B.ncols):
        x = solve(A, B.column(j))
        if x is None:
            return None
        cols.append(x)
    return IntMatrix.from_columns(cols, A.ncols)


@dataclass(frozen=True)
class Subquotient:
    """The group span(K) / span(B) for a saturated basis K and B inside span(K).

    After Smith reduction of the coordinates of B the quotient splits as
    torsion generators followed by free generators. ``reps`` holds lifts of
    all generators (columns, ambient coordinates); ``coords`` maps an ambient
    vector of span(K) to generator coordinates.
    """

    K: IntMatrix
    U: IntMatrix
    diag: tuple[int, ...]
    reps: IntMatrix

    @classmethod
    def build(cls, K: IntMatrix, B: IntMatrix) -> Subquotient:
        C = solve_matrix(K, B) if B.ncols else IntMatrix.zeros(K.ncols, 0)
        if C is None:
            raise ValueError("sublattice is not contained in span(K)")
        U, D, _ = smith_normal_form(C)
        diag = tuple(D[i, i] if i < D.ncols else 0 for i in range(K.ncols))
        reps = K @ inverse_unimodular(U) if K.ncols else K
        return cls(K, U, diag, reps)

    @property
    def group(self) -> AbGroup:
        return AbGroup.from_diagonal([d for d in self.diag if d], len(self.diag))

    @property
    def free_indices(self) -> list[int]:
        return [i for i, d in enumerate(self.diag) if d == 0]

    @property
    def torsion_indices(self) -> list[int]:
        return [i for i, d in enumerate(self.diag) if d > 1]

    def coords(self, x: Sequence[int]) -> tuple[int, ...]:
        c = solve(self.K, x)
        if c is None:
            raise ValueError("vector not in span(K)")
        return self.U.apply(c)

    def free_coords(self, x: Sequence[int]) -> tuple[int, ...]:
        c = self.coords(x)
        return tuple(c[i] for i in self.free_indices)

    def free_reps(self) -> IntMatrix:
        idx = self.free_indices
        return self.reps.submatrix(range(self.reps.nrows), idx)


# ---------------------------------------------------------------- complexes

class IntComplex:
    """Chain complex C_0 <- C_1 <- ... <- C_n of free abelian groups.

    ``diffs[k-1]`` is d_k : C_k -> C_{k-1}, an (dim C_{k-1}) x (dim C_k) matrix.
    """

    def __init__(self, dims: Sequence[int], diffs: Sequence[IntMatrix], check: bool = True):
        self.dims = tuple(dims)
        self.diffs = tuple(diffs)
        if len(self.diffs) != max(len(self.dims) - 1, 0):
            raise ValueError("need exactly one differential per positive degree")
        for k, d in enumerate(self.diffs, start=1):
            if d.shape != (self.dims[k - 1], self.dims[k]):
                raise ValueError(f"d_{k} has shape {d.shape}, expected "
                                 f"{(self.dims[k - 1], self.dims[k])}")
        if check:
            for k in range(1, len(self.diffs)):
                if not (self.diffs[k - 1] @ self.diffs[k]).is_zero():
                    raise ValueError(f"d_{k} d_{k + 1} is not zero")

    @property
    def top(self) -> int:
        return len(self.dims) - 1

    def d(self, k: int) -> IntMatrix:
        """d_k, with zero maps past either end."""
        if 1 <= k <= self.top:
            return self.diffs[k - 1]
        lo = self.dims[k - 1] if 0 <= k - 1 <= self.top else 0
        hi = self.dims[k] if 0 <= k <= self.top else 0
        return IntMatrix.zeros(lo, hi)

    def cycles(self, k: int) -> IntMatrix:
        return kernel_basis(self.d(k))

    def homology_sub(self, k: int) -> Subquotient:
        return Subquotient.build(self.cycles(k), self.d(k + 1))

    def betti_mod_p(self, k: int, p: int) -> int:
        return self.dims[k] - rank_mod_p(self.d(k), p) - rank_mod_p(self.d(k + 1), p)


def homology_at(C: IntComplex, k: int) -> AbGroup:
    if not 0 <= k <= C.top:
        raise IndexError(f"degree {k} outside 0..{C.top}")
    dk, dk1 = C.d(k), C.d(k + 1)
    r = C.dims[k] - rank(dk)
    diag = smith_diagonal(dk1)
    return AbGroup(r - len(diag), tuple(diag))
