"""Chain models of 4-manifolds over Z[G]: pi_2, k-invariants, stable pi_2 classes,
and the Euler characteristic bookkeeping.

Differentials follow the ring-matrix row convention: d_k has rank C_k rows
and rank C_{k-1} columns, and x -> x d_k.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .exactla import (AbGroup, IntComplex, IntMatrix, Subquotient, homology_at, inverse_unimodular,
                      is_unimodular, kernel_basis, solve)
from .groupring import (Character, Cyclic, GroupSpec, Infinite, ParseError, RingElt, RingMatrix,
                        ZxC2, parse_group, parse_ring_elt, render_ring_elt)
from .lattices import BasedLattice, Fingerprint2, fingerprint2, from_matrices
from .resolutions import betti_f2, reduce_matrix, regular_expand, std_resolution
from .textio import Section, find_section, parse_int, parse_matrix_cells, parse_sections

TOP = 4


@dataclass(frozen=True)
class ZPiComplex:
    group: GroupSpec
    ranks: tuple[int, ...]
    diffs: tuple[RingMatrix, ...]
    form: RingMatrix | None = None
    h2_basis: RingMatrix | None = None
    name: str = ""

    def __post_init__(self):
        if len(self.ranks) != TOP + 1 or len(self.diffs) != TOP:
            raise ValueError("a complex needs ranks C0..C4 and differentials d1..d4")
        for k, D in enumerate(self.diffs, start=1):
            if D.shape != (self.ranks[k], self.ranks[k - 1]):
                raise ValueError(f"d{k} has shape {D.shape}, expected {(self.ranks[k], self.ranks[k - 1])}")
        if self.h2_basis is not None and self.h2_basis.ncols != self.ranks[2]:
            raise ValueError("h2 basis vectors must live in C2")
        if self.form is not None and self.h2_basis is not None and \
                self.form.shape != (self.h2_basis.nrows,) * 2:
            raise ValueError("form size must match the h2 basis")

    def d(self, k: int) -> RingMatrix:
        return self.diffs[k - 1]

    def is_complex(self) -> bool:
        return all((self.d(k + 1) @ self.d(k)).is_zero() for k in range(1, TOP))

    def check(self) -> None:
        if not self.is_complex():
            raise ValueError("d o d is not zero")
        if homology_at(self.reduced(), 0) != AbGroup(1):
            raise ValueError("augmented H_0 is not Z")

    def reduced(self, v: Character | None = None) -> IntComplex:
        """Z^v tensor C, e.g. all generators to 1 for trivial v."""
        return IntComplex(self.ranks, [reduce_matrix(self.d(k), v) for k in range(1, TOP + 1)])

    def expanded(self) -> IntComplex:
        """C as a complex of free abelian groups (finite G)."""
        return IntComplex([r * len(self.group.elements()) for r in self.ranks],
                          [regular_expand(self.d(k)) for k in range(1, TOP + 1)])

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * r for k, r in enumerate(self.ranks))


# ---------------------------------------------------------------- vectors over Z[G]

def vec_coords(x: Sequence[RingElt], G: GroupSpec) -> list[int]:
    els = G.elements()
    return [xi.coeff(u) for xi in x for u in els]


def coords_vec(c: Sequence[int], G: GroupSpec) -> list[RingElt]:
    els = G.elements()
    n = len(els)
    return [RingElt(G, {u: c[i * n + s] for s, u in enumerate(els) if c[i * n + s]})
            for i in range(len(c) // n)]


def left_mul(r: RingElt, x: Sequence[RingElt]) -> list[RingElt]:
    return [r * xi for xi in x]


# ---------------------------------------------------------------- built-ins

def _form(G: GroupSpec, gen: str, n: int) -> list[list[RingElt]]:
    u = 1 - RingElt.gen(G, gen)
    return [[n * u, u], [u, RingElt.zero(G)]]


_FORM_N = {"E": -2, "F": -4}


def _single(name: str) -> ZPiComplex:
    G = parse_group("C2(T)")
    T = RingElt.gen(G, "T")
    diffs = (RingMatrix(G, [[T - 1]]),
             RingMatrix(G, [[T + 1], [0]]),
             RingMatrix(G, [[0, T + 1]]),
             RingMatrix(G, [[T - 1]]))
    return ZPiComplex(G, (1, 1, 2, 1, 1), diffs,
                      RingMatrix(G, _form(G, "T", _FORM_N[name])),
                      RingMatrix(G, [[1 - T, 0], [0, 1]]), name)


def _connected_sum(left: str, right: str) -> ZPiComplex:
    """Two copies of the C2 model glued into a complex over C2(a) * C2(b)."""
    G = parse_group("C2(a) * C2(b)")
    a, b = RingElt.gen(G, "a"), RingElt.gen(G, "b")
    diffs = (RingMatrix(G, [[a - 1], [b - 1]]),
             RingMatrix(G, [[a + 1, 0], [0, 0], [0, b + 1], [0, 0]]),
             RingMatrix(G, [[0, a + 1, 0, 0], [0, 0, 0, b + 1]]),
             RingMatrix(G, [[a - 1, b - 1]]))
    fa, fb = _form(G, "a", _FORM_N[left]), _form(G, "b", _FORM_N[right])
    z = RingElt.zero(G)
    form = [fa[0] + [z, z], fa[1] + [z, z], [z, z] + fb[0], [z, z] + fb[1]]
    basis = [[1 - a, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1 - b, 0], [0, 0, 0, 1]]
    return ZPiComplex(G, (1, 2, 4, 2, 1), diffs, RingMatrix(G, form), RingMatrix(G, basis),
                      f"{left}#{right}")


BUILTINS = ("E", "F", "E#E", "E#F", "F#E", "F#F")


def builtin(name: str) -> ZPiComplex:
    if name in _FORM_N:
        return _single(name)
    parts = name.split("#")
    if len(parts) == 2 and all(p in _FORM_N for p in parts):
        return _connected_sum(*parts)
    raise KeyError(f"unknown built-in complex {name!r}; choose from {', '.join(BUILTINS)}")


# ---------------------------------------------------------------- file format

COMPLEX_KEYS = {"group", "C0", "C1", "C2", "C3", "C4", "d1", "d2", "d3", "d4", "form", "h2"}


def _matrix(sec: Section, key: str, G: GroupSpec, shape: tuple[int, int] | None,
            source: str) -> RingMatrix:
    v = sec.require(key)
    rows = parse_matrix_cells(v, source)
    if shape is not None:
        nr, nc = shape
        if len(rows) != nr or any(len(r) != nc for r in rows):
            got = (len(rows), len(rows[0]) if rows else 0)
            raise v.error(f"{key} must be {nr}x{nc}, got {got[0]}x{got[1]}", v.text.strip(), source)
    out = []
    for row in rows:
        cells = []
        for text, off in row:
            try:
                cells.append(parse_ring_elt(text, G))
            except ParseError as e:
                raise e.located(source, v.line - 1, v.col - 1 + off) from None
        out.append(cells)
    nc = shape[1] if shape else (len(rows[0]) if rows else 0)
    return RingMatrix(G, out, len(out), nc)


def complex_from_section(sec: Section) -> ZPiComplex:
    src = sec.source
    sec.check_keys(COMPLEX_KEYS)
    gv = sec.require("group")
    try:
        G = parse_group(gv.text)
    except ParseError as e:
        raise e.located(src, gv.line - 1, gv.col - 1) from None
    ranks = tuple(parse_int(sec.require(f"C{k}"), src, 0) for k in range(TOP + 1))
    diffs = tuple(_matrix(sec, f"d{k}", G, (ranks[k], ranks[k - 1]), src) for k in range(1, TOP + 1))
    h2 = _matrix(sec, "h2", G, None, src) if sec.get("h2") else None
    if h2 is not None and h2.nrows and h2.ncols != ranks[2]:
        v = sec.require("h2")
        raise v.error(f"h2 vectors need {ranks[2]} entries", v.text.strip(), src)
    form = None
    if sec.get("form"):
        n = h2.nrows if h2 is not None else None
        form = _matrix(sec, "form", G, (n, n) if n is not None else None, src)
    try:
        C = ZPiComplex(G, ranks, diffs, form, h2, sec.name)
    except ValueError as e:
        raise ParseError(str(e), sec.line, 1, sec.name, src) from None
    if not C.is_complex():
        raise ParseError("d o d is not zero", sec.line, 1, sec.name, src)
    return C


def parse_complexes(text: str, source: str = "<input>") -> dict[str, ZPiComplex]:
    return {s.name: complex_from_section(s) for s in parse_sections(text, source) if s.kind == "complex"}


def load_complex(text: str, name: str | None = None, source: str = "<input>") -> ZPiComplex:
    return complex_from_section(find_section(parse_sections(text, source), "complex", name, source))


def _render_matrix(M: RingMatrix) -> str:
    if M.nrows == 0:
        return "[]"
    return "[" + ", ".join("[" + ", ".join(render_ring_elt(e) for e in r) + "]" for r in M.rows) + "]"


def render_complex(C: ZPiComplex) -> str:
    lines = [f"[complex {C.name or 'X'}]", f"group = {C.group.render()}"]
    lines += [f"C{k} = {r}" for k, r in enumerate(C.ranks)]
    lines += [f"d{k} = {_render_matrix(C.d(k))}" for k in range(1, TOP + 1)]
    if C.h2_basis is not None:
        lines.append(f"h2 = {_render_matrix(C.h2_basis)}")
    if C.form is not None:
        lines.append(f"form = {_render_matrix(C.form)}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- pi_2

@dataclass(frozen=True)
class Pi2Data:
    """H_2(C; Z[G]) for finite G as a lattice, in a chosen Z-basis."""

    homology: Subquotient
    basis: IntMatrix          # ambient coordinates of the basis vectors (columns)
    declared: bool
    lattice: BasedLattice

    def coords(self, x: Sequence[int]) -> tuple[int, ...]:
        cols = [self.homology.free_coords(self.basis.column(j)) for j in range(self.basis.ncols)]
        P = IntMatrix.from_columns(cols, len(self.homology.free_indices))
        return inverse_unimodular(P).apply(self.homology.free_coords(x))


def pi2_data(C: ZPiComplex) -> Pi2Data:
    G = C.group
    if not G.is_finite:
        raise ValueError("pi_2 as a lattice needs a finite fundamental group")
    X = C.expanded()
    H = X.homology_sub(2)
    if H.torsion_indices:
        raise ValueError(f"H_2 has torsion ({H.group}); it is not a lattice")
    declared = C.h2_basis is not None and C.h2_basis.nrows > 0
    if declared:
        basis = IntMatrix.from_columns([vec_coords(r, G) for r in C.h2_basis.rows], X.dims[2])
    else:
        basis = H.free_reps()
    P = IntMatrix.from_columns([H.free_coords(basis.column(j)) for j in range(basis.ncols)],
                               len(H.free_indices))
    if P.nrows != P.ncols or not is_unimodular(P):
        raise ValueError("declared h2 vectors are not a Z-basis of H_2")
    Pinv = inverse_unimodular(P)
    action = {}
    for g in G.generators:
        gw = RingElt.gen(G, g)
        cols = [H.free_coords(vec_coords(left_mul(gw, coords_vec(basis.column(j), G)), G))
                for j in range(basis.ncols)]
        action[g] = Pinv @ IntMatrix.from_columns(cols, basis.ncols)
    lat = from_matrices(G, action, list(range(basis.ncols)))
    return Pi2Data(H, basis, declared, lat)


def pi2(C: ZPiComplex) -> Fingerprint2:
    """pi_2 = H_2 of the universal cover, as Z + Z^- + Z[C2] multiplicities.

    Over the trivial group the action is trivial and everything counts as Z.
    """
    G = C.group
    if not G.factors:
        H = C.expanded().homology_sub(2)
        if H.torsion_indices:
            raise ValueError(f"H_2 has torsion ({H.group}); it is not a lattice")
        return Fingerprint2(len(H.free_indices), 0, 0)
    if G.factors != (Cyclic(2),):
        raise ValueError("pi2 fingerprints are defined over C2")
    return fingerprint2(pi2_data(C).lattice)


# ---------------------------------------------------------------- k-invariants

@dataclass(frozen=True)
class KInvariant:
    pairs: tuple[tuple[int, ...], ...]

    def __str__(self) -> str:
        if not self.pairs:
            return "()"
        body = [f"({','.join(map(str, p))})" for p in self.pairs]
        return body[0] if len(body) == 1 else "(" + ",".join(body) + ")"

    def to_json(self) -> list[list[int]]:
        return [list(p) for p in self.pairs]


@dataclass(frozen=True)
class KInvariantData:
    k: KInvariant
    cocycle: tuple[int, ...]      # class of f_2 d_3 in the pi_2 basis
    h3: AbGroup                   # H^3(C2; pi_2)
    lift: tuple[tuple[int, ...], ...]
    declared_basis: bool


def chain_lift(C: ZPiComplex, variant: int = 0) -> list[list[RingElt]]:
    """f_0, f_1, f_2 with f_k d_k = r_k f_{k-1}, r_k the resolution differential.

    ``variant`` 1 solves with reversed unknowns and then moves each f_k by the
    sum of a Z-basis of the kernel, so it is an independent lift.
    """
    G = C.group
    R = std_resolution(G, 3)
    f = [[RingElt.one(G)] + [RingElt.zero(G)] * (C.ranks[0] - 1)]
    for k in (1, 2):
        rk = R.d(k)[0, 0]
        A = regular_expand(C.d(k))
        rhs = vec_coords(left_mul(rk, f[-1]), G)
        x = solve(A, rhs, reverse=bool(variant))
        if x is None:
            raise ArithmeticError(f"no chain map lift in degree {k}")
        if variant:
            K = kernel_basis(A)
            x = tuple(xi + sum(K[i, c] for c in range(K.ncols)) for i, xi in enumerate(x))
        f.append(coords_vec(x, G))
    return f


def k_invariant_data(C: ZPiComplex, variant: int = 0) -> KInvariantData:
    """k-invariant in H^3(C2; pi_2) by lifting the identity of Z to a chain map.

    With the 2-periodic resolution, 3-cochains are pi_2 itself, cocycles are
    ker(1 + T) and coboundaries im(1 - T). The class is f_2 applied to the
    degree-3 resolution differential, read in H_2.
    """
    G = C.group
    if G.factors != (Cyclic(2),):
        raise ValueError("k_invariant is computed over C2; use connected_sum_k for free products")
    p = pi2_data(C)
    r = p.lattice.rank
    if r == 0:
        return KInvariantData(KInvariant(()), (), AbGroup(), (), p.declared)
    f = chain_lift(C, variant)
    R = std_resolution(G, 3)
    z = left_mul(R.d(3)[0, 0], f[2])
    zc = vec_coords(z, G)
    if any(regular_expand(C.d(2)).apply(zc)):
        raise ArithmeticError("lifted class is not a cycle")
    c = p.coords(zc)
    T = p.lattice.action[G.generators[0]]
    I = IntMatrix.identity(r)
    h3 = Subquotient.build(kernel_basis(T + I), T.scale(-1) + I)
    if T == I.scale(-1):
        bits = tuple(x % 2 for x in c)
    else:
        hc = h3.coords(c)
        bits = tuple(hc[i] % h3.diag[i] for i in h3.torsion_indices)
    lift = tuple(tuple(vec_coords(fk, G)) for fk in f)
    return KInvariantData(KInvariant((bits,)), c, h3.group, lift, p.declared)


def k_invariant(C: ZPiComplex, variant: int = 0) -> KInvariant:
    return k_invariant_data(C, variant).k


def form_parameter(form: RingMatrix) -> int:
    """n for a form [[n(1 - T), 1 - T], [1 - T, 0]] over C2."""
    G = form.group
    if form.shape != (2, 2) or len(G.generators) != 1 or G.gen_order(G.generators[0]) != 2:
        raise ValueError("expected a 2x2 form over C2")
    u = 1 - RingElt.gen(G, G.generators[0])
    n = form[0, 0].coeff(())
    if form[0, 0] != n * u or form[0, 1] != u or form[1, 0] != u or not form[1, 1].is_zero():
        raise ValueError("form is not of the shape [[n(1-T), 1-T], [1-T, 0]]")
    return n


@dataclass(frozen=True)
class HyperbolicChange:
    n: int
    residue: int
    shift: int
    k: KInvariant
    k_new: KInvariant


def hyperbolic_change(n: int, k: KInvariant) -> HyperbolicChange:
    """Substitute e1 -> e1 + c e2 with c = -n/2, making the form hyperbolic.

    A class x e1 + y e2 becomes x e1' + (y - c x) e2'.
    """
    if n % 2:
        raise ValueError(f"n = {n} is odd: universal cover not S2xS2-like")
    c = -n // 2
    pairs = []
    for p in k.pairs:
        if len(p) != 2:
            raise ValueError("hyperbolic change acts on (Z/2)^2 k-invariants")
        x, y = p
        pairs.append((x % 2, (y - c * x) % 2))
    return HyperbolicChange(n, n % 4, c, k, KInvariant(tuple(pairs)))


def hyperbolic_form(n: int, G: GroupSpec | None = None) -> RingMatrix:
    """The form after the change of basis; it is [[0, 1-T], [1-T, 0]]."""
    G = G or parse_group("C2(T)")
    u = 1 - RingElt.gen(G, G.generators[0])
    c = -n // 2
    P = RingMatrix(G, [[1, c], [0, 1]])
    F = RingMatrix(G, [[n * u, u], [u, 0]])
    return P @ F @ P.transpose()


def connected_sum_k(parts: Sequence[tuple[str, KInvariant]]) -> KInvariant:
    """k-invariant of a connected sum over a free product of C2 factors,
    one pair per factor in order."""
    out = []
    for _, k in parts:
        if len(k.pairs) != 1:
            raise ValueError("each summand contributes one pair")
        out.append(k.pairs[0])
    return KInvariant(tuple(out))


def swap_equivalent(k1: KInvariant, k2: KInvariant) -> bool:
    """Equal after swapping coordinates inside some factors' pairs."""
    if len(k1.pairs) != len(k2.pairs):
        return False
    return all(p == q or p == q[::-1] for p, q in zip(k1.pairs, k2.pairs))


def hyperbolic_k(name: str) -> KInvariant:
    """Built-in E or F: k-invariant in the hyperbolic basis."""
    C = builtin(name)
    return hyperbolic_change(form_parameter(C.form), k_invariant(C)).k_new


# ---------------------------------------------------------------- stable pi_2

@dataclass(frozen=True)
class PD3Symbol:
    """An aspherical 3-manifold group factor known only through data."""

    name: str
    betti: tuple[int, int, int, int] = (1, 0, 0, 1)
    orientation: int = 1

    @property
    def b1(self) -> int:
        return self.betti[1]

    @property
    def b3(self) -> int:
        return self.betti[3]


@dataclass(frozen=True)
class Decomposition:
    group: GroupSpec
    w: Character
    pd3: tuple[PD3Symbol, ...] = ()

    @property
    def m(self) -> int:
        return len(self.pd3)

    @property
    def r(self) -> int:
        return sum(1 for f in self.group.factors if isinstance(f, Infinite))

    def betti(self, k: int) -> int:
        """dim H_k(pi; F2) for k >= 1 (free products add)."""
        return betti_f2(self.group, k) + sum(p.betti[k] for p in self.pd3)

    @property
    def torsion_free(self) -> bool:
        return not any(isinstance(f, (Cyclic, ZxC2)) for f in self.group.factors)


class InadmissibleError(ValueError):
    pass


def check_admissible(dec: Decomposition) -> None:
    G, w = dec.group, dec.w
    for name in G.generators:
        if G.gen_order(name) is not None and w(G.gen_word(name)) == -1:
            raise InadmissibleError(
                f"inadmissible orientation character: w({name}) = -1 but {name} has finite order; "
                "w must be trivial on every element of finite order")


@dataclass(frozen=True)
class StablePi2Class:
    """pi_2 stably isomorphic to Ind I(gamma)^v + Ind I(gamma'), plus s free summands."""

    gamma: tuple[tuple, ...]
    gamma_prime: tuple[tuple, ...]
    s: int | None = None
    ambient: str = ""

    @property
    def stably_free(self) -> bool:
        return not self.gamma and not self.gamma_prime

    def render(self) -> str:
        if self.stably_free:
            text = "stably free"
        else:
            text = f"Ind I({_render_factors(self.gamma, True)}) + Ind I({_render_factors(self.gamma_prime, False)})"
        if self.s is not None:
            if self.s >= 0:
                text += f" + Z[pi]^{self.s}"
            else:
                text += f" (after adding {-self.s} copies of Z[pi])"
        return text

    def to_json(self) -> dict:
        return {"stably_free": self.stably_free,
                "gamma": [list(d) for d in self.gamma],
                "gamma_prime": [list(d) for d in self.gamma_prime],
                "s": self.s, "text": self.render()}


def _render_factors(ds, with_v: bool) -> str:
    out = []
    for d in ds:
        if d[0] == "ZxC2":
            out.append(f"ZxC2[v(t)={d[1]:+d},v(T)={d[2]:+d}]" if with_v else "ZxC2")
        elif d[0] == "PD3":
            out.append(f"PD3:{d[1]}[v=w*u]" if with_v else f"PD3:{d[1]}")
        else:
            out.append(d[0])
    return " * ".join(out) if out else "1"


def stable_pi2(dec: Decomposition, fclass: Sequence[int] = (), s: int | None = None) -> StablePi2Class:
    """Symbolic stable class of pi_2 from the free-product decomposition.

    Cyclic factors go into both gamma and gamma'; PD3 factors into gamma only;
    a ZxC2 factor goes into both exactly when its fclass bit is 0. On a
    ZxC2 factor v(t) = w(t) and v(T) = -1; Z factors contribute nothing.
    """
    check_admissible(dec)
    G, w = dec.group, dec.w
    nzx = sum(1 for f in G.factors if isinstance(f, ZxC2))
    bits = tuple(fclass)
    if len(bits) != nzx:
        raise ValueError(f"need one fclass bit per ZxC2 factor ({nzx}), got {len(bits)}")
    gamma, gprime = [], []
    zi = 0
    for fi, f in enumerate(G.factors):
        if isinstance(f, Cyclic):
            d = (f"C{f.n}",)
            gamma.append(d)
            gprime.append(d)
        elif isinstance(f, ZxC2):
            if bits[zi] == 0:
                t = G.names[fi][0]
                gamma.append(("ZxC2", w(G.gen_word(t)), -1))
                gprime.append(("ZxC2",))
            zi += 1
    for p in dec.pd3:
        gamma.append(("PD3", p.name))
    return StablePi2Class(tuple(sorted(gamma)), tuple(sorted(gprime)), s, G.render())


# ---------------------------------------------------------------- Euler characteristic

def euler_char(s: int, dec: Decomposition) -> int:
    """chi = 2 + dim(F2 tensor pi_2) - b1 - m - r, with dim(F2 tensor pi_2) = s + b1."""
    b1 = dec.betti(1)
    return 2 + (s + b1) - b1 - dec.m - dec.r


def solve_s(chi: int, dec: Decomposition) -> int:
    return chi + dec.m + dec.r - 2


@dataclass(frozen=True)
class EulerReport:
    chi: int
    s: int
    m: int
    r: int
    b1: int
    extra: dict = field(default_factory=dict)


def euler_report(dec: Decomposition, chi: int | None = None, s: int | None = None) -> EulerReport:
    if (chi is None) == (s is None):
        raise ValueError("give exactly one of chi and s")
    if s is None:
        s = solve_s(chi, dec)
    else:
        chi = euler_char(s, dec)
    return EulerReport(chi, s, dec.m, dec.r, dec.betti(1))
