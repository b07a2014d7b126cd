import random

import pytest
from hypothesis import strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors

from twotype.exactla import AbGroup, IntMatrix
from twotype.groupring import RingElt, parse_group

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


GROUPS = ["C2(T)", "C3(g)", "C4(g)", "Z", "Dinf", "ZxC2", "C2(a)*C3(b)"]


def sympy_cokernel(A: IntMatrix) -> AbGroup:
    """Independent oracle: Z^m / im(A) via sympy invariant factors."""
    if A.nrows == 0:
        return AbGroup(0)
    if A.ncols == 0:
        return AbGroup(A.nrows)
    M = Matrix(A.tolist())
    inv = [int(abs(d)) for d in invariant_factors(M, domain=ZZ)]
    nz = [d for d in inv if d != 0]
    return AbGroup(A.nrows - len(nz), tuple(d for d in nz if d > 1))


def sympy_subquotient(K: IntMatrix, B: IntMatrix) -> AbGroup:
    """span(K) / span(B) for B inside span(K), K of full column rank."""
    Km, Bm = Matrix(K.tolist()), Matrix(B.tolist()) if B.ncols else None
    if Bm is None:
        return AbGroup(K.ncols)
    # express B in K-coordinates by solving the (consistent) rational system
    coords = (Km.T * Km).inv() * Km.T * Bm
    assert all(x.is_integer for x in coords), "B not in the lattice spanned by K"
    return sympy_cokernel(IntMatrix([[int(x) for x in row] for row in coords.tolist()]))


def random_matrix(rng: random.Random, m: int, n: int, lo: int = -3, hi: int = 3) -> IntMatrix:
    return IntMatrix([[rng.randint(lo, hi) for _ in range(n)] for _ in range(m)], m, n)


@st.composite
def int_matrices(draw, max_rows=5, max_cols=5, lo=-6, hi=6):
    m = draw(st.integers(0, max_rows))
    n = draw(st.integers(0, max_cols))
    rows = [[draw(st.integers(lo, hi)) for _ in range(n)] for _ in range(m)]
    return IntMatrix(rows, m, n)


@st.composite
def ring_elts(draw, G, max_terms=4, L=2, coeff=4):
    ball = G.ball(L)
    k = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(k):
        u = draw(st.sampled_from(ball))
        terms[u] = terms.get(u, 0) + draw(st.integers(-coeff, coeff))
    return RingElt(G, terms)


@pytest.fixture(params=GROUPS)
def group(request):
    return parse_group(request.param)


def random_unimodular(rng: random.Random, n: int, steps: int = 12) -> IntMatrix:
    M = IntMatrix.identity(n)
    for _ in range(steps if n > 1 else 0):
        i, j = rng.sample(range(n), 2)
        E = [[int(a == b) for b in range(n)] for a in range(n)]
        E[i][j] = rng.choice([-2, -1, 1, 2])
        M = IntMatrix(E, n, n) @ M
    return M


def random_lattice(G, rng: random.Random, max_rank: int = 4):
    """Random finite-group lattice: a sum of small indecomposables in a scrambled basis."""
    from twotype.groupring import Character
    from twotype.lattices import (aug_ideal, direct_sum, elementary_conjugate, free_module,
                                  from_matrices, norm_cokernel, trivial_module)
    n = len(G.elements())
    pieces = [(trivial_module(G), 1), (free_module(G), n), (aug_ideal(G), n - 1),
              (norm_cokernel(G), n - 1)]
    if n == 2:
        pieces.append((trivial_module(G, Character.from_dict(G, {G.generators[0]: -1})), 1))
    while True:
        parts, r = [], 0
        for _ in range(rng.randint(1, 4)):
            A, k = rng.choice(pieces)
            if r + k <= max_rank:
                parts.append(A)
                r += k
        if parts:
            break
    A = direct_sum(*parts) if len(parts) > 1 else parts[0]
    P = random_unimodular(rng, A.rank)
    return from_matrices(G, elementary_conjugate(A.action, P))


def sym_oracle_coinvariants(A, w_values: dict[str, int]) -> AbGroup:
    """Z^w tensor Gamma(A) computed on symmetric matrices with sympy."""
    r = A.rank
    basis = []
    for i in range(r):
        for j in range(i, r):
            S = [[0] * r for _ in range(r)]
            S[i][j] = S[j][i] = 1
            basis.append(Matrix(S))
    # coordinates of a symmetric matrix in that basis
    def coords(S):
        return [int(S[i, j]) for i in range(r) for j in range(i, r)]
    rels = []
    for g in A.group.generators:
        M = Matrix(A.action[g].tolist())
        for S in basis:
            rels.append(coords(w_values.get(g, 1) * M * S * M.T - S))
    return sympy_cokernel(IntMatrix.from_columns(rels, len(basis)))
