"""Free resolutions of Z over Z[G], Fox calculus, and twisted group homology.

Ring matrices act on row vectors from the right (see ``RingMatrix``), so the
degree-k differential has rank C_k rows and rank C_{k-1} columns and the
chain condition reads D_k D_{k-1} = 0. Reducing entries through a twisted
augmentation and transposing gives an ordinary integer complex.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .exactla import AbGroup, IntComplex, IntMatrix, homology_at
from .groupring import (Character, Cyclic, GroupSpec, Infinite, RingElt, RingMatrix, Word, ZxC2,
                        augment, embed_elt, omega, parse_free_word, ring_vstack)

DEFAULT_DEPTH = 5


@dataclass(frozen=True)
class Resolution:
    """C_N -> ... -> C_1 -> C_0 = Z[G] -> Z, with ``diffs[k-1]`` = D_k."""

    group: GroupSpec
    ranks: tuple[int, ...]
    diffs: tuple[RingMatrix, ...]

    @property
    def depth(self) -> int:
        return len(self.diffs)

    def d(self, k: int) -> RingMatrix:
        return self.diffs[k - 1]

    def check(self) -> None:
        for k in range(1, self.depth):
            if not (self.diffs[k] @ self.diffs[k - 1]).is_zero():
                raise ValueError(f"D_{k + 1} D_{k} is not zero")
        if self.depth:
            # the augmentation kills the image of D_1
            for r in self.diffs[0].rows:
                if augment(r[0]) != 0:
                    raise ValueError("image of D_1 is not in the augmentation ideal")


def _cyclic_diffs(G: GroupSpec, name: str, n: int, N: int) -> list[RingMatrix]:
    g = RingElt.gen(G, name)
    norm = sum((RingElt.gen(G, name, k) for k in range(n)), RingElt.zero(G))
    return [RingMatrix(G, [[1 - g if k % 2 else norm]]) for k in range(1, N + 1)]


def _z_diffs(G: GroupSpec, name: str, N: int) -> list[RingMatrix]:
    t = RingElt.gen(G, name)
    out = [RingMatrix(G, [[1 - t]])]
    out += [RingMatrix.zeros(G, 0, 1 if k == 2 else 0) for k in range(2, N + 1)]
    return out


def _zxc2_diffs(G: GroupSpec, tname: str, Tname: str, N: int) -> list[RingMatrix]:
    """Tensor product of the Z resolution (1 - t) with the periodic C2 one."""
    t = RingElt.gen(G, tname)
    T = RingElt.gen(G, Tname)

    def dT(j):
        return 1 - T if j % 2 else 1 + T

    out = [RingMatrix(G, [[1 - T], [1 - t]])]
    for k in range(2, N + 1):
        sign = -1 if (k - 1) % 2 else 1
        out.append(RingMatrix(G, [[dT(k), 0], [sign * (1 - t), dT(k - 1)]]))
    return out


def _factor_ranks(f, N: int) -> list[int]:
    if isinstance(f, Cyclic):
        return [1] * (N + 1)
    if isinstance(f, Infinite):
        return [1, 1] + [0] * (N - 1)
    return [1] + [2] * N


def std_resolution(G: GroupSpec, N: int = DEFAULT_DEPTH) -> Resolution:
    """Standard free resolution through degree N.

    Cyclic factors use the 2-periodic (1 - g, norm) resolution, Z uses 1 - t,
    Z x C2 the product resolution. A free product is the wedge: one copy of
    Z[G] in degree 0 and, above it, the direct sum of the factors' modules.
    """
    if N < 1:
        raise ValueError("depth must be at least 1")
    if not G.factors:
        return Resolution(G, (1,) + (0,) * N,
                          tuple(RingMatrix.zeros(G, 0, 1 if k == 1 else 0) for k in range(1, N + 1)))
    per_factor = []
    for fi, f in enumerate(G.factors):
        ns = G.names[fi]
        if isinstance(f, Cyclic):
            per_factor.append(_cyclic_diffs(G, ns[0], f.n, N))
        elif isinstance(f, Infinite):
            per_factor.append(_z_diffs(G, ns[0], N))
        elif isinstance(f, ZxC2):
            per_factor.append(_zxc2_diffs(G, ns[0], ns[1], N))
        else:
            raise ValueError(f"unsupported factor {f!r}")
    franks = [_factor_ranks(f, N) for f in G.factors]
    ranks = [1] + [sum(r[k] for r in franks) for k in range(1, N + 1)]
    diffs = [ring_vstack(G, [p[0] for p in per_factor], 1)]
    for k in range(2, N + 1):
        rows = []
        c0 = 0
        offsets = []
        for r in franks:
            offsets.append(c0)
            c0 += r[k - 1]
        for fi, p in enumerate(per_factor):
            D = p[k - 1]
            for i in range(D.nrows):
                row: list[RingElt | int] = [0] * ranks[k - 1]
                for j in range(D.ncols):
                    row[offsets[fi] + j] = D[i, j]
                rows.append(row)
        diffs.append(RingMatrix(G, rows, ranks[k], ranks[k - 1]))
    return Resolution(G, tuple(ranks), tuple(diffs))


# ---------------------------------------------------------------- reduction

def reduce_matrix(D: RingMatrix, v: Character | None = None) -> IntMatrix:
    """Z^v tensor D, as an integer matrix in the column convention.

    Each entry is w-twisted by omega and then augmented, which is the twisted
    augmentation g -> v(g).
    """
    G = D.group
    triv = Character.trivial(G)
    if v is None:
        v = triv
    rows = [[augment(omega(e, v), triv) for e in r] for r in D.rows]
    return IntMatrix(rows, D.nrows, D.ncols).transpose()


def reduced_complex(res: Resolution, v: Character | None = None, top: int | None = None) -> IntComplex:
    top = res.depth if top is None else top
    diffs = [reduce_matrix(res.d(k), v) for k in range(1, top + 1)]
    return IntComplex(res.ranks[:top + 1], diffs)


def homology_twisted(G: GroupSpec, v: Character | None, k: int, depth: int = DEFAULT_DEPTH) -> AbGroup:
    """H_k(G; Z^v) from the standard resolution."""
    if k > depth - 1:
        raise ValueError(f"degree {k} needs resolution depth >= {k + 1}")
    if k < 0:
        raise ValueError("negative degree")
    res = std_resolution(G, depth)
    return homology_at(reduced_complex(res, v), k)


def betti_f2(G: GroupSpec, k: int, depth: int | None = None) -> int:
    """dim H_k(G; F_2)."""
    depth = max(depth or DEFAULT_DEPTH, k + 1)
    res = std_resolution(G, depth)
    return reduced_complex(res).betti_mod_p(k, 2)


def tor1_aug_ideal(G: GroupSpec, vbar: Character, factors: Sequence[int]) -> AbGroup:
    """Tor_1 over Z[G] of Z^vbar with the induced augmentation ideal of a sub-free-product.

    Shapiro's lemma moves the computation to the subgroup; there the tail
    C_{>=1} of its resolution, shifted down one degree, resolves its
    augmentation ideal, and we take H_1 of the reduced tail.
    """
    H = G.sub(factors)
    if not H.factors:
        return AbGroup()
    vH = vbar.restrict(factors)
    res = std_resolution(H, 4)
    tail_dims = res.ranks[1:4]
    tail = [reduce_matrix(res.d(k), vH) for k in (2, 3)]
    return homology_at(IntComplex(tail_dims, tail), 1)


# ---------------------------------------------------------------- Fox calculus

FreeWord = tuple[tuple[str, int], ...]


def free_word_value(word: FreeWord, G: GroupSpec) -> Word:
    u: Word = ()
    for name, k in word:
        u = G.mul(u, G.gen_word(name, k))
    return u


def fox_derivative(word: FreeWord | str, gen: str, G: GroupSpec) -> RingElt:
    """Free derivative d(word)/d(gen), evaluated in Z[G].

    Uses d(uv) = du + u dv, d(g^k) = 1 + g + ... + g^(k-1) and
    d(g^-k) = -(g^-1 + ... + g^-k).
    """
    if gen not in G.generators:
        raise KeyError(f"unknown generator {gen!r}")
    if isinstance(word, str):
        word = parse_free_word(word, G.generators)
    acc: dict[Word, int] = {}
    prefix: Word = ()
    for name, k in word:
        if name == gen:
            if k > 0:
                for j in range(k):
                    w = G.mul(prefix, G.gen_word(name, j))
                    acc[w] = acc.get(w, 0) + 1
            else:
                for j in range(1, -k + 1):
                    w = G.mul(prefix, G.gen_word(name, -j))
                    acc[w] = acc.get(w, 0) - 1
        prefix = G.mul(prefix, G.gen_word(name, k))
    return RingElt(G, acc)


@dataclass(frozen=True)
class FoxComplex:
    """Presentation complex: D_2 is the Fox Jacobian, D_1 the column (g - 1)."""

    group: GroupSpec
    generators: tuple[str, ...]
    relators: tuple[FreeWord, ...]
    d1: RingMatrix
    d2: RingMatrix

    @classmethod
    def build(cls, G: GroupSpec, relators: Sequence[FreeWord | str],
              generators: Sequence[str] | None = None) -> FoxComplex:
        gens = tuple(generators or G.generators)
        rels = tuple(parse_free_word(r, G.generators) if isinstance(r, str) else tuple(r)
                     for r in relators)
        d1 = RingMatrix(G, [[RingElt.gen(G, g) - 1] for g in gens], len(gens), 1)
        d2 = RingMatrix(G, [[fox_derivative(r, g, G) for g in gens] for r in rels],
                        len(rels), len(gens))
        return cls(G, gens, rels, d1, d2)

    def is_complex(self) -> bool:
        return (self.d2 @ self.d1).is_zero()

    def relator_values(self) -> list[Word]:
        return [free_word_value(r, self.group) for r in self.relators]


def induced_matrix(D: RingMatrix, G: GroupSpec, factors: Sequence[int]) -> RingMatrix:
    """Entries pushed from a sub-free-product into G."""
    return RingMatrix(G, [[embed_elt(e, G, factors) for e in r] for r in D.rows],
                      D.nrows, D.ncols)


def regular_expand(D: RingMatrix) -> IntMatrix:
    """The Z-linear map x -> x D on Z[G]^r for finite G, column convention.

    The Z-basis of Z[G]^r is g e_i, ordered by i and then by ``G.elements()``;
    column (i, g) holds the coordinates of g D_i.
    """
    G = D.group
    if not G.is_finite:
        raise ValueError("regular expansion needs a finite group")
    els = G.elements()
    pos = {u: k for k, u in enumerate(els)}
    n = len(els)
    entries: dict[tuple[int, int], int] = {}
    for i in range(D.nrows):
        for s, g in enumerate(els):
            col = i * n + s
            for j in range(D.ncols):
                for u, c in D[i, j].as_dict().items():
                    key = (j * n + pos[G.mul(g, u)], col)
                    entries[key] = entries.get(key, 0) + c
    return IntMatrix.from_sparse(D.ncols * n, D.nrows * n, {k: c for k, c in entries.items() if c})


def element_coords(x: RingElt) -> list[int]:
    """Coefficients of x over ``G.elements()`` for finite G."""
    return [x.coeff(u) for u in x.group.elements()]
