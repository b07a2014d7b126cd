import random
import warnings

import pytest

from conftest import random_lattice, sym_oracle_coinvariants
from twotype.exactla import AbGroup
from twotype.gamma import gamma_index
from twotype.forms import (SesqForm, b_map, b_matrix, b_map_aug_truncated, dual_basis_values, ev_pairing,
                           gluck_form, hermitian_check, hyperbolic)
from twotype.fourman import ZPiComplex, builtin
from twotype.groupring import Character, RingElt, RingMatrix, parse_group
from twotype.lattices import aug_ideal, direct_sum, free_module, trivial_module

C2 = parse_group("C2(T)")
NEG = Character.parse(C2, "T=-1")


def test_hermitian_check():
    G = parse_group("Z(t)")
    t = RingElt.gen(G, "t")
    H = RingMatrix(G, [[0, 1 - t], [1 - RingElt.gen(G, "t", -1), 0]], 2, 2)
    assert hermitian_check(H)
    assert not hermitian_check(RingMatrix(G, [[0, 1], [0, 0]], 2, 2))
    assert not hermitian_check(RingMatrix(G, [[t]], 1, 1))


@pytest.mark.parametrize("group", ["C2(T)", "C3(g)", "Dinf", "Z", "C4(a)*Z(t)"])
def test_hyperbolic_is_hermitian(group):
    G = parse_group(group)
    H = hyperbolic(G)
    assert H.is_hermitian()
    assert H.rank == 2 * len(G.factors)


def test_hyperbolic_twisted_w():
    G = parse_group("Z(t)")
    w = Character.parse(G, "t=-1")
    assert hyperbolic(G, w).is_hermitian()


def test_hyperbolic_zxc2_not_supported():
    with pytest.raises(NotImplementedError):
        hyperbolic(parse_group("ZxC2"))


def test_gluck_forms():
    assert gluck_form(C2).matrix[0, 0] == RingElt.zero(C2)
    f = gluck_form(C2, twisted=True)
    a = RingElt.gen(C2, "T")
    assert f.value([a], [a]) == RingElt.one(C2)


def test_sesq_value_conjugate_linear():
    G = parse_group("Z(t)")
    t = RingElt.gen(G, "t")
    f = SesqForm(RingMatrix(G, [[1]], 1, 1), Character.trivial(G))
    assert f.value([t], [1]) == RingElt.gen(G, "t", -1)


def test_dual_basis_values_free():
    R = free_module(C2)
    F = dual_basis_values(R)
    # f^k(b_j) has coefficient of 1 equal to delta_kj
    for k in range(2):
        for j in range(2):
            assert F[k][j].coeff(()) == int(k == j)


def test_b_kernel_z_minus_plus_z():
    A = direct_sum(trivial_module(C2, NEG), trivial_module(C2))
    assert b_map(A).kernel == AbGroup(0, (2,))


def test_b_kernel_free_and_aug():
    assert b_map(free_module(C2)).kernel.is_trivial
    for g in ("C2(T)", "C3(g)", "C4(g)"):
        G = parse_group(g)
        assert b_map(aug_ideal(G)).kernel.is_trivial
        assert b_map(direct_sum(aug_ideal(G), free_module(G))).kernel.is_trivial


def test_b_map_warns_on_inadmissible_w():
    with warnings.catch_warnings(record=True) as rec:
        warnings.simplefilter("always")
        b_map(trivial_module(C2), NEG)
    assert any("order-two" in str(r.message) for r in rec)


def test_b_map_needs_finite_group():
    with pytest.raises(ValueError):
        b_map(trivial_module(parse_group("Z")))


@pytest.mark.parametrize("L", [2, 3])
def test_b_aug_dinf_injective_on_safe_ball(L):
    tk = b_map_aug_truncated(parse_group("Dinf"), None, None, L)
    assert tk.injective and tk.L == L


@pytest.mark.parametrize("seed", range(30))
@pytest.mark.parametrize("group", ["C2(T)", "C3(g)"])
def test_b_kernel_equals_torsion_random(group, seed):
    G = parse_group(group)
    A = random_lattice(G, random.Random(1000 + seed))
    torsion = sym_oracle_coinvariants(A, {}).torsion_subgroup()
    assert b_map(A).kernel == torsion


@pytest.mark.parametrize("name", ["E", "F"])
def test_ev_pairing_isomorphism_on_builtins(name):
    ev = ev_pairing(builtin(name))
    assert ev.homology == AbGroup(2)
    assert ev.is_isomorphism


def test_ev_pairing_zero_h2():
    G = parse_group("C2(T)")
    T = RingElt.gen(G, "T")
    d = [RingMatrix(G, [[x]], 1, 1) for x in (1 - T, 1 + T, 1 - T, 1 + T)]
    C = ZPiComplex(G, (1, 1, 1, 1, 1), tuple(d))
    ev = ev_pairing(C)
    assert ev.homology.is_trivial and ev.is_isomorphism


def test_hermitian_examples():
    D = parse_group("Dinf")
    a = RingElt.gen(D, "a")
    assert hermitian_check(RingMatrix.identity(D, 2))
    assert hermitian_check(RingMatrix(D, [[a]], 1, 1))
    assert not hermitian_check(RingMatrix(D, [[0, 1], [0, 0]], 2, 2))


@pytest.mark.parametrize("seed", range(6))
def test_b_matrix_block_structure_on_sums(seed):
    """The Gamma(A) columns of B for A + A' only see the A-functionals."""
    rng = random.Random(seed)
    G = parse_group("C3(g)" if seed % 2 else "C2(T)")
    A, A2 = random_lattice(G, rng, 2), random_lattice(G, rng, 2)
    r, r2, n = A.rank, A2.rank, len(G.elements())
    BA = b_matrix(A, Character.trivial(G))
    BS = b_matrix(direct_sum(A, A2), Character.trivial(G))
    R = r + r2
    idx = gamma_index(R)
    for ca, (i, j) in enumerate(gamma_index(r)):
        cs = idx.index((i, j))
        for k in range(R):
            for l in range(R):
                for h in range(n):
                    got = BS[(k * R + l) * n + h, cs]
                    want = BA[(k * r + l) * n + h, ca] if k < r and l < r else 0
                    assert got == want
