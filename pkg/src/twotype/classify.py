"""Homeomorphism decisions over D_inf from declared invariants, plus the
numerical side results that go with them.

A manifest records data that cannot be computed from a chain model
(signature, Kirby-Siebenmann invariant, s-invariant, w2-type, a descriptor of
the intersection form). The decision follows three conditions: isomorphic
quadratic 2-types, equal ks, and equal s.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass

from .exactla import AbGroup
from .fourman import Decomposition, KInvariant, ZPiComplex, swap_equivalent
from .groupring import Cyclic
from .textio import Section, Value, find_section, parse_int, parse_sections


class W2Type(enum.Enum):
    INF = "inf"      # universal cover not spin
    ZERO = "zero"
    X2 = "x2"
    X2Y2 = "x2y2"


@dataclass(frozen=True)
class FormDescriptor:
    """RESTRICTED: H(I pi) + lambda with lambda named by ``tag`` on a stably free
    module of rank ``rank``. GENERAL: an opaque tag naming the quadratic 2-type."""

    kind: str
    tag: str
    rank: int | None = None

    def render(self) -> str:
        if self.kind == "restricted":
            return f"restricted({self.tag}, {self.rank})"
        return f"general({self.tag})"


@dataclass(frozen=True)
class Manifest:
    name: str
    sigma: int
    ks: int
    w2type: W2Type
    s: tuple[int, int] | None
    form: FormDescriptor
    kinv: KInvariant | None = None

    def render(self) -> str:
        lines = [f"[manifest {self.name}]", f"sigma = {self.sigma}", f"ks = {self.ks}",
                 f"w2type = {self.w2type.value}",
                 f"s = {'n/a' if self.s is None else '(%d,%d)' % self.s}",
                 f"form = {self.form.render()}"]
        if self.kinv is not None:
            lines.append(f"kinv = {_render_kinv(self.kinv)}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {"name": self.name, "sigma": self.sigma, "ks": self.ks, "w2type": self.w2type.value,
                "s": None if self.s is None else list(self.s),
                "form": {"kind": self.form.kind, "tag": self.form.tag, "rank": self.form.rank},
                "kinv": None if self.kinv is None else self.kinv.to_json()}


def _render_kinv(k: KInvariant) -> str:
    return "(" + ",".join("(" + ",".join(map(str, p)) + ")" for p in k.pairs) + ")"


@dataclass(frozen=True)
class Violation:
    field: str
    message: str

    def __str__(self) -> str:
        return f"{self.field}: {self.message}"


def validate(m: Manifest) -> list[Violation]:
    out = []
    if m.ks not in (0, 1):
        out.append(Violation("ks", f"must be 0 or 1, got {m.ks}"))
    if (m.s is None) != (m.w2type is W2Type.INF):
        out.append(Violation("s", "s is n/a exactly when the universal cover is not spin (w2type = inf)"))
    if m.s is not None and any(x not in (0, 1) for x in m.s):
        out.append(Violation("s", f"entries must be 0 or 1, got {m.s}"))
    if m.form.kind == "restricted" and (m.form.rank is None or m.form.rank < 0):
        out.append(Violation("form", "restricted form needs a nonnegative rank"))
    if m.kinv is not None and any(x not in (0, 1) for p in m.kinv.pairs for x in p):
        out.append(Violation("kinv", "k-invariant coordinates must be 0 or 1"))
    if m.w2type is W2Type.X2Y2 and m.s is not None:
        if m.sigma % 8:
            out.append(Violation("sigma", f"w2type x2y2 needs sigma = 0 mod 8, got {m.sigma}"))
        elif m.ks % 2 != (m.s[0] + m.s[1] + m.sigma // 8) % 2:
            out.append(Violation("ks", f"ks = {m.ks} but s1 + s2 + sigma/8 = "
                                       f"{m.s[0]} + {m.s[1]} + {m.sigma // 8} is "
                                       f"{(m.s[0] + m.s[1] + m.sigma // 8) % 2} mod 2"))
    return out


class InvalidManifest(ValueError):
    def __init__(self, name: str, violations: list[Violation]):
        self.violations = violations
        super().__init__(f"manifest {name} is invalid: " + "; ".join(map(str, violations)))


class Verdict(enum.Enum):
    HOMEOMORPHIC = "HOMEOMORPHIC"
    NOT_HOMEOMORPHIC = "NOT_HOMEOMORPHIC"
    UNDETERMINED = "UNDETERMINED"


@dataclass(frozen=True)
class Decision:
    verdict: Verdict
    reason: str
    condition: int | None = None

    def __str__(self) -> str:
        return f"{self.verdict.value} ({self.reason})"

    def to_json(self) -> dict:
        return {"verdict": self.verdict.value, "reason": self.reason, "condition": self.condition}


def decide_dinfty(m1: Manifest, m2: Manifest, unbased: bool = False) -> Decision:
    """Condition 1: isomorphic quadratic 2-types; 2: equal ks; 3: equal s."""
    for m in (m1, m2):
        bad = validate(m)
        if bad:
            raise InvalidManifest(m.name, bad)
    NOT, UND = Verdict.NOT_HOMEOMORPHIC, Verdict.UNDETERMINED
    if m1.sigma != m2.sigma:
        return Decision(NOT, "condition 1: signatures differ", 1)
    if m1.w2type != m2.w2type:
        return Decision(NOT, "condition 1: w2-types differ", 1)
    f1, f2 = m1.form, m2.form
    if f1.kind != f2.kind:
        return Decision(UND, "form descriptors of different kinds cannot be compared")
    if f1.kind == "restricted":
        if f1.rank != f2.rank:
            return Decision(NOT, "condition 1: ranks of the stably free parts differ", 1)
        if f1.tag != f2.tag:
            return Decision(UND, f"form tags {f1.tag!r} and {f2.tag!r} are opaque")
        if m1.w2type is W2Type.INF and m1.kinv is not None and m2.kinv is not None \
                and not swap_equivalent(m1.kinv, m2.kinv):
            return Decision(UND, "declared k-invariants are not related by factor swaps")
    elif f1.tag != f2.tag:
        return Decision(UND, f"quadratic 2-type tags {f1.tag!r} and {f2.tag!r} are opaque")
    if m1.ks != m2.ks:
        return Decision(NOT, "condition 2: ks differs", 2)
    if m1.w2type is W2Type.X2Y2 and m1.s != m2.s:
        if unbased and m1.s == m2.s[::-1]:
            return Decision(UND, "s differs only by swapping the two factors")
        return Decision(NOT, "condition 3: s differs", 3)
    return Decision(Verdict.HOMEOMORPHIC, "all three conditions hold")


def append_cp2(m: Manifest) -> Manifest:
    """Manifest of M # CP^2: the cover stops being spin, s is dropped, the
    form gains a <1> summand and the declared k-invariant no longer applies."""
    form = m.form
    if form.kind == "restricted":
        form = FormDescriptor("restricted", f"{form.tag}+<1>", (form.rank or 0) + 1)
    else:
        form = FormDescriptor("general", f"{form.tag}+<1>", None)
    return Manifest(f"{m.name}#CP2", m.sigma + 1, m.ks, W2Type.INF, None, form, None)


def stable_class_count(w2type: W2Type) -> int:
    """Stable homeomorphism classes over D_inf with fixed signature."""
    return {W2Type.X2Y2: 4, W2Type.X2: 2, W2Type.INF: 2, W2Type.ZERO: 1}[w2type]


# ---------------------------------------------------------------- manifest files

MANIFEST_KEYS = {"sigma", "ks", "s", "w2type", "form", "kinv"}
_PAIR = re.compile(r"\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)")
_FORM = re.compile(r"(?P<kind>restricted|general)\s*\(\s*(?P<tag>[^,()\s]+)\s*(?:,\s*(?P<rank>-?\d+)\s*)?\)\s*\Z")


def _parse_pair(v: Value, src: str) -> tuple[int, int] | None:
    t = v.text.strip()
    if t.lower() in ("n/a", "na"):
        return None
    m = _PAIR.fullmatch(t)
    if not m:
        raise v.error("expected (i,j) or n/a", t, src)
    return int(m.group(1)), int(m.group(2))


def _parse_kinv(v: Value, src: str) -> KInvariant:
    t = v.text.strip()
    if not (t.startswith("(") and t.endswith(")")):
        raise v.error("expected ((i,j),...)", t, src)
    inner = t[1:-1].strip()
    pairs = []
    pos = 0
    while pos < len(inner):
        m = _PAIR.match(inner, pos)
        if not m:
            bad = inner[pos:].split(")")[0]
            raise v.error("expected a pair (i,j)", bad or inner[pos:pos + 1], src, 1 + pos)
        pairs.append((int(m.group(1)), int(m.group(2))))
        pos = m.end()
        rest = inner[pos:].lstrip()
        pos = len(inner) - len(rest)
        if rest.startswith(","):
            pos += 1
            pos += len(inner[pos:]) - len(inner[pos:].lstrip())
        elif rest:
            raise v.error("expected ',' between pairs", rest[:1], src, 1 + pos)
    return KInvariant(tuple(pairs))


def manifest_from_section(sec: Section) -> Manifest:
    src = sec.source
    sec.check_keys(MANIFEST_KEYS)
    sigma = parse_int(sec.require("sigma"), src)
    ks = parse_int(sec.require("ks"), src)
    wv = sec.require("w2type")
    try:
        w2 = W2Type(wv.text.strip().lower())
    except ValueError:
        raise wv.error("w2type must be inf, zero, x2 or x2y2", wv.text.strip(), src) from None
    s = _parse_pair(sec.require("s"), src)
    fv = sec.require("form")
    fm = _FORM.match(fv.text.strip())
    if not fm:
        raise fv.error("form must be restricted(TAG, RANK) or general(TAG)", fv.text.strip(), src)
    if fm.group("kind") == "restricted":
        if fm.group("rank") is None:
            raise fv.error("restricted form needs a rank", fv.text.strip(), src)
        form = FormDescriptor("restricted", fm.group("tag"), int(fm.group("rank")))
    else:
        if fm.group("rank") is not None:
            raise fv.error("general form takes only a tag", fm.group("rank"), src)
        form = FormDescriptor("general", fm.group("tag"))
    kinv = _parse_kinv(sec.get("kinv"), src) if sec.get("kinv") else None
    return Manifest(sec.name, sigma, ks, w2, s, form, kinv)


def parse_manifests(text: str, source: str = "<input>") -> dict[str, Manifest]:
    return {s.name: manifest_from_section(s) for s in parse_sections(text, source) if s.kind == "manifest"}


def load_manifest(text: str, name: str | None = None, source: str = "<input>") -> Manifest:
    return manifest_from_section(find_section(parse_sections(text, source), "manifest", name, source))


# ---------------------------------------------------------------- built-in manifests

_H = FormDescriptor("restricted", "0", 0)
_H1 = FormDescriptor("restricted", "<1>", 1)

BUILTIN_MANIFESTS: dict[str, Manifest] = {
    "EE": Manifest("EE", 0, 0, W2Type.X2Y2, (0, 0), _H, KInvariant(((1, 1), (1, 1)))),
    "sEsE": Manifest("sEsE", 0, 0, W2Type.X2Y2, (1, 1), _H, KInvariant(((1, 1), (1, 1)))),
    "EsE": Manifest("EsE", 0, 1, W2Type.X2Y2, (0, 1), _H, KInvariant(((1, 1), (1, 1)))),
    "sEE": Manifest("sEE", 0, 1, W2Type.X2Y2, (1, 0), _H, KInvariant(((1, 1), (1, 1)))),
    "EFCP2": Manifest("EFCP2", 1, 0, W2Type.INF, None, _H1),
    "FFCP2": Manifest("FFCP2", 1, 0, W2Type.INF, None, _H1),
}


def builtin_manifest(name: str) -> Manifest:
    try:
        return BUILTIN_MANIFESTS[name]
    except KeyError:
        raise KeyError(f"unknown built-in manifest {name!r}; choose from "
                       f"{', '.join(BUILTIN_MANIFESTS)}") from None


# ---------------------------------------------------------------- bounds and constants

@dataclass(frozen=True)
class Constants:
    """Surgery obstruction groups of Z[D_inf], imported rather than computed."""

    L4_rank: int = 3

    @property
    def L4(self) -> AbGroup:
        return AbGroup(self.L4_rank)

    @property
    def L5(self) -> AbGroup:
        return AbGroup()


CONSTANTS = Constants()


def scob_bounds(dec: Decomposition, smooth: bool = False, orientable: bool = True) -> int:
    """Upper bound on s-cobordism classes for a torsion-free group.

    2^b3 topologically, 2^(b3 + b1) smooth orientable, 2^(b3 + b1 + 1) smooth
    non-orientable, with b_i = dim H_i(pi; F2).
    """
    if not dec.torsion_free:
        raise ValueError("s-cobordism bounds need a torsion-free group")
    b1, b3 = dec.betti(1), dec.betti(3)
    if not smooth:
        return 2 ** b3
    return 2 ** (b3 + b1 + (0 if orientable else 1))


@dataclass(frozen=True)
class StructureSet:
    group: AbGroup
    asserted: bool

    def __str__(self) -> str:
        return str(self.group) + ("" if self.asserted else " (formula not asserted for this group)")


def structure_set_size(C: ZPiComplex) -> StructureSet:
    """H_2(C; Z/2) with every generator sent to 1; the identification with the
    structure set is only claimed for D_inf."""
    X = C.reduced()
    k = X.betti_mod_p(2, 2)
    G = C.group
    dinf = G.factors == (Cyclic(2), Cyclic(2))
    return StructureSet(AbGroup(0, (2,) * k), dinf)

