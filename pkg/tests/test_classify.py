from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twotype.classify import (BUILTIN_MANIFESTS, CONSTANTS, FormDescriptor, InvalidManifest,
                              Manifest, Verdict, W2Type, append_cp2, builtin_manifest,
                              decide_dinfty, load_manifest, parse_manifests, scob_bounds,
                              stable_class_count, structure_set_size, validate)
from twotype.exactla import AbGroup
from twotype.fourman import Decomposition, KInvariant, PD3Symbol, builtin
from twotype.groupring import Character, ParseError, parse_group

DATA = Path(__file__).resolve().parent.parent / "data" / "manifests.txt"
FAMILY = ["EE", "sEsE", "EsE", "sEE"]


def test_family_values():
    m = {n: builtin_manifest(n) for n in FAMILY}
    assert [(m[n].s, m[n].ks) for n in FAMILY] == [((0, 0), 0), ((1, 1), 0), ((0, 1), 1), ((1, 0), 1)]
    for x in m.values():
        assert validate(x) == []


def test_family_is_diagonal():
    for a in FAMILY:
        for b in FAMILY:
            d = decide_dinfty(builtin_manifest(a), builtin_manifest(b))
            assert (d.verdict is Verdict.HOMEOMORPHIC) == (a == b), (a, b, d)


def test_regressions():
    EE, sEsE = builtin_manifest("EE"), builtin_manifest("sEsE")
    assert str(decide_dinfty(EE, sEsE)) == "NOT_HOMEOMORPHIC (condition 3: s differs)"
    d = decide_dinfty(builtin_manifest("sEE"), builtin_manifest("EsE"))
    assert d.verdict is Verdict.NOT_HOMEOMORPHIC and d.condition == 3
    d = decide_dinfty(builtin_manifest("sEE"), builtin_manifest("EsE"), unbased=True)
    assert d.verdict is Verdict.UNDETERMINED
    d = decide_dinfty(builtin_manifest("EFCP2"), builtin_manifest("FFCP2"))
    assert d.verdict is Verdict.HOMEOMORPHIC


def test_counterfeit_rejected():
    bad = Manifest("x", 8, 0, W2Type.X2Y2, (0, 0), FormDescriptor("restricted", "0", 0))
    v = validate(bad)
    assert [x.field for x in v] == ["ks"]
    with pytest.raises(InvalidManifest):
        decide_dinfty(bad, builtin_manifest("EE"))


def test_validate_other_rules():
    f = FormDescriptor("restricted", "0", 0)
    assert validate(Manifest("a", 0, 2, W2Type.ZERO, (0, 0), f))
    assert validate(Manifest("b", 0, 0, W2Type.INF, (0, 0), f))
    assert validate(Manifest("c", 4, 0, W2Type.X2Y2, (0, 0), f))
    assert validate(Manifest("d", 0, 0, W2Type.ZERO, (0, 0), f, KInvariant(((2, 0),))))


def test_stable_class_counts():
    assert [stable_class_count(w) for w in (W2Type.X2Y2, W2Type.X2, W2Type.INF, W2Type.ZERO)] == [4, 2, 2, 1]


def test_file_manifests_match_builtins():
    ms = parse_manifests(DATA.read_text(), str(DATA))
    for name, m in BUILTIN_MANIFESTS.items():
        assert ms[name] == m
    assert validate(ms["counterfeit"])


def test_render_round_trip():
    for m in BUILTIN_MANIFESTS.values():
        assert load_manifest(m.render()) == m


def test_manifest_parse_errors():
    text = "[manifest m]\nsigma = 0\nks = 0\nw2type = x2y2\ns = (0,0)\nform = restricted(0, 0)\nkinv = ((1,1),(1 1))\n"
    with pytest.raises(ParseError) as ei:
        load_manifest(text, None, "m.txt")
    assert ei.value.describe() == "m.txt:7:15: expected a pair (i,j) near '(1 1'"
    with pytest.raises(ParseError) as ei:
        load_manifest(text.replace("x2y2", "spin"), None, "m.txt")
    assert ei.value.line == 4 and ei.value.token == "spin"
    with pytest.raises(ParseError) as ei:
        load_manifest("[manifest m]\nsigma = 0\n", None, "m.txt")
    assert "missing key" in ei.value.message


# ---------------------------------------------------------------- property tests

W2 = st.sampled_from(list(W2Type))


@st.composite
def manifests(draw, tags=("0", "1")):
    w2 = draw(W2)
    sigma = 8 * draw(st.integers(-1, 1)) if w2 is W2Type.X2Y2 else draw(st.integers(-3, 3))
    if w2 is W2Type.INF:
        s = None
        ks = draw(st.integers(0, 1))
    else:
        s = (draw(st.integers(0, 1)), draw(st.integers(0, 1)))
        ks = (s[0] + s[1] + sigma // 8) % 2 if w2 is W2Type.X2Y2 else draw(st.integers(0, 1))
    if draw(st.booleans()):
        form = FormDescriptor("restricted", draw(st.sampled_from(tags)), draw(st.integers(0, 2)))
    else:
        form = FormDescriptor("general", draw(st.sampled_from(tags)))
    kinv = draw(st.none() | st.tuples(st.tuples(st.integers(0, 1), st.integers(0, 1)),
                                      st.tuples(st.integers(0, 1), st.integers(0, 1))).map(KInvariant))
    return Manifest(draw(st.sampled_from("MNPQ")), sigma, ks, w2, s, form, kinv)


@settings(max_examples=400, deadline=None)
@given(manifests(), manifests(), st.booleans())
def test_decision_symmetric(m1, m2, unbased):
    assert decide_dinfty(m1, m2, unbased).verdict == decide_dinfty(m2, m1, unbased).verdict


@settings(max_examples=200, deadline=None)
@given(manifests())
def test_decision_reflexive(m):
    assert decide_dinfty(m, m).verdict is Verdict.HOMEOMORPHIC


@settings(max_examples=400, deadline=None)
@given(manifests(), manifests(), st.booleans())
def test_homeomorphic_only_when_all_conditions_hold(m1, m2, unbased):
    d = decide_dinfty(m1, m2, unbased)
    differs = m1.sigma != m2.sigma or m1.w2type != m2.w2type or m1.ks != m2.ks or \
        (m1.w2type is W2Type.X2Y2 and m1.s != m2.s)
    if d.verdict is Verdict.HOMEOMORPHIC:
        assert not differs
        assert m1.form.kind == m2.form.kind and m1.form.tag == m2.form.tag
    if m1.sigma != m2.sigma or m1.w2type != m2.w2type:
        assert d.verdict is Verdict.NOT_HOMEOMORPHIC


@settings(max_examples=300, deadline=None)
@given(manifests(tags=("0",)), manifests(tags=("0",)))
def test_cp2_sum_of_restricted_pair(m1, m2):
    if m1.form.kind != "restricted" or m2.form != m1.form:
        return
    d = decide_dinfty(append_cp2(m1), append_cp2(m2))
    if m1.sigma == m2.sigma and m1.ks == m2.ks:
        assert d.verdict is Verdict.HOMEOMORPHIC
    elif m1.ks != m2.ks and m1.sigma == m2.sigma:
        assert d.verdict is Verdict.NOT_HOMEOMORPHIC and d.condition == 2


# ---------------------------------------------------------------- bounds and constants

def test_scob_bounds():
    Z = parse_group("Z")
    triv = Character.trivial(Z)
    assert scob_bounds(Decomposition(Z, triv)) == 1
    one = parse_group("C2(T)")
    with pytest.raises(ValueError):
        scob_bounds(Decomposition(one, Character.trivial(one)))
    G0 = Decomposition(Z.sub([]), Character.trivial(Z.sub([])), (PD3Symbol("Sol"),))
    assert scob_bounds(G0) == 2
    G1 = Decomposition(Z.sub([]), Character.trivial(Z.sub([])), (PD3Symbol("N", (1, 3, 3, 1)),))
    assert scob_bounds(G1, smooth=True) == 16
    assert scob_bounds(G1, smooth=True, orientable=False) == 32


def test_constants():
    assert CONSTANTS.L4 == AbGroup(3) and CONSTANTS.L5 == AbGroup()


def test_structure_sets():
    E = structure_set_size(builtin("E"))
    assert E.group == AbGroup(0, (2, 2)) and not E.asserted
    EF = structure_set_size(builtin("E#F"))
    assert EF.group == AbGroup(0, (2,) * 4) and EF.asserted
