"""Command-line front end.

Exit status: 0 on success, 1 when a manifest violates its consistency
relations or ``classify`` decides NOT_HOMEOMORPHIC, 2 on input errors.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from . import __version__
from .classify import (CONSTANTS, InvalidManifest, Manifest, Verdict, builtin_manifest, decide_dinfty,
                       load_manifest, stable_class_count, structure_set_size, validate)
from .exactla import AbGroup
from .forms import b_map, b_map_aug_truncated
from .fourman import (Decomposition, InadmissibleError, PD3Symbol, ZPiComplex, builtin,
                      connected_sum_k, euler_report, form_parameter, hyperbolic_change,
                      k_invariant_data, load_complex, pi2, stable_pi2)
from .gamma import coinvariants, gamma
from .groupring import (Character, Cyclic, GroupSpec, Infinite, ParseError, parse_free_word,
                        parse_group, render_ring_elt)
from .lattices import (DEFAULT_L, BasedLattice, aug_ideal, direct_sum, free_module, norm_cokernel,
                       trivial_module)
from .resolutions import DEFAULT_DEPTH, FoxComplex, homology_twisted

SCHEMA_VERSION = 1


class InputError(Exception):
    """Bad user input; reported with exit status 2."""


@dataclass
class RunConfig:
    command: str
    inputs: list[str] = field(default_factory=list)
    L: int = DEFAULT_L
    depth: int = DEFAULT_DEPTH
    output: str = "text"

    def __post_init__(self):
        if self.L < 1:
            raise InputError("-L must be at least 1")
        if self.depth < 2:
            raise InputError("--depth must be at least 2")


@dataclass
class Report:
    command: str
    inputs: dict
    result: dict
    lines: list[str]
    status: int = 0

    def emit(self, fmt: str, out) -> None:
        if fmt == "json":
            doc = {"version": SCHEMA_VERSION, "tool": "twotype", "tool_version": __version__,
                   "command": self.command, "input": self.inputs, "result": self.result,
                   "status": self.status}
            out.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")
        else:
            out.write("\n".join(self.lines) + "\n")


def ab(g: AbGroup) -> dict:
    return g.to_json()


# ---------------------------------------------------------------- argument helpers

def _group(text: str) -> GroupSpec:
    try:
        return parse_group(text)
    except ParseError as e:
        raise e.located("<argument GROUP>") from None


def _character(G: GroupSpec, text: str | None, what: str = "--twist") -> Character:
    if not text:
        return Character.trivial(G)
    try:
        return Character.parse(G, text)
    except (ValueError, KeyError) as e:
        msg = e.args[0] if e.args else str(e)
        raise ParseError(str(msg), 1, 1, text, f"<argument {what}>") from None


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise InputError(f"{path}: cannot read file ({e.strerror})") from None


def _split_ref(ref: str) -> tuple[str, str | None]:
    if "#" in ref:
        path, name = ref.rsplit("#", 1)
        return path, name or None
    return ref, None


def resolve_complex(ref: str) -> ZPiComplex:
    if ref.startswith("builtin:"):
        try:
            return builtin(ref[len("builtin:"):])
        except KeyError as e:
            raise InputError(e.args[0]) from None
    path, name = _split_ref(ref)
    return load_complex(_read(path), name, path)


def resolve_manifest(ref: str) -> Manifest:
    if ref.startswith("builtin:"):
        try:
            return builtin_manifest(ref[len("builtin:"):])
        except KeyError as e:
            raise InputError(e.args[0]) from None
    path, name = _split_ref(ref)
    return load_manifest(_read(path), name, path)


_PD3 = re.compile(r"\s*(?P<name>[A-Za-z_][A-Za-z0-9_]*)\s*(?:\(\s*(?P<b>[\d\s,]+)\)\s*)?")


def parse_pd3_list(text: str | None) -> tuple[PD3Symbol, ...]:
    """``"N(1,1,1,1), M(1,3,3,1)"``: names with optional F2 Betti numbers b0..b3."""
    if not text:
        return ()
    out = []
    pos = 0
    while pos < len(text):
        m = _PD3.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError("expected NAME or NAME(b0,b1,b2,b3)", 1, pos + 1, text[pos:pos + 6], "<argument --pd3>")
        betti = (1, 0, 0, 1)
        if m.group("b"):
            nums = [int(x) for x in m.group("b").split(",") if x.strip()]
            if len(nums) != 4:
                raise ParseError("need four Betti numbers", 1, m.start("b") + 1, m.group("b"), "<argument --pd3>")
            betti = tuple(nums)
        out.append(PD3Symbol(m.group("name"), betti))
        pos = m.end()
        if pos < len(text):
            if text[pos] != ",":
                raise ParseError("expected ','", 1, pos + 1, text[pos], "<argument --pd3>")
            pos += 1
    return tuple(out)


def parse_module_spec(spec: str, G: GroupSpec, L: int) -> BasedLattice:
    """Sum of pieces ``[k*]P`` with P one of Z, Z-, ZG, I, I-, N.

    Z- and I- twist by -1 on every order-two generator; N is Z[G] modulo the norm.
    """
    neg = Character.from_dict(G, {g: -1 for g in G.generators if G.gen_order(g) == 2})
    pieces = []
    col = 1
    for raw in spec.split("+"):
        tok = raw.strip()
        m = re.fullmatch(r"(?:(\d+)\s*\*\s*)?(Z-|ZG|Z|I-|I|N)", tok)
        if not m:
            raise ParseError("unknown module piece (use Z, Z-, ZG, I, I-, N)", 1,
                             col + len(raw) - len(raw.lstrip()), tok, "<argument --module>")
        k = int(m.group(1) or 1)
        name = m.group(2)
        if name == "Z":
            A = trivial_module(G)
        elif name == "Z-":
            A = trivial_module(G, neg)
        elif name == "ZG":
            A = free_module(G, 1, L)
        elif name == "I":
            A = aug_ideal(G, None, L)
        elif name == "I-":
            A = aug_ideal(G, neg, L)
        else:
            try:
                A = norm_cokernel(G)
            except ValueError as e:
                raise ParseError(str(e), 1, col, tok, "<argument --module>") from None
        pieces += [A] * k
        col += len(raw) + 1
    return direct_sum(*pieces) if len(pieces) > 1 else pieces[0]


_PRES = re.compile(r"\s*<(?P<gens>[^|>]*)\|(?P<rels>[^>]*)>\s*\Z")


def infer_group(gens: list[str], rels: list) -> GroupSpec:
    """Cyclic factors for generators with a relator g^n, Z for the rest."""
    orders = {}
    for r in rels:
        if len(r) == 1:
            name, k = r[0]
            orders[name] = abs(k)
    factors = [Cyclic(orders[g]) if orders.get(g, 0) >= 2 else Infinite() for g in gens]
    extra = [r for r in rels if not (len(r) == 1 and orders.get(r[0][0], 0) >= 2)]
    if extra:
        raise InputError("cannot infer the group from these relators; pass --group")
    return GroupSpec(tuple(factors), tuple((g,) for g in gens))


# ---------------------------------------------------------------- commands

def cmd_resolve(args, cfg: RunConfig) -> Report:
    G = _group(args.group)
    v = _character(G, args.twist)
    degrees = [args.degree] if args.degree is not None else list(range(cfg.depth))
    depth = max(cfg.depth, max(degrees) + 1)
    table = {}
    lines = [f"group = {G.render()}", f"twist = {v.render() or 'trivial'}"]
    for k in degrees:
        if k < 0:
            raise InputError("--degree must be nonnegative")
        H = homology_twisted(G, v, k, depth)
        table[str(k)] = ab(H)
        lines.append(f"H{k} = {H}")
    return Report("resolve", {"group": G.render(), "twist": v.render(), "depth": depth},
                  {"homology": table}, lines)


def cmd_gamma(args, cfg: RunConfig) -> Report:
    G = _group(args.group)
    w = _character(G, args.w, "--w")
    A = parse_module_spec(args.module, G, cfg.L)
    X = gamma(A)
    co = coinvariants(X, w)
    res: dict = {"rank": A.rank, "gamma_rank": X.rank, "coinvariants": ab(co.group),
                 "exact": co.exact, "safe_radius": co.safe_radius}
    lines = [f"group = {G.render()}", f"module = {args.module} (rank {A.rank})",
             f"Gamma rank = {X.rank}", f"Z^w (x) Gamma = {co.group}"]
    if not co.exact:
        lines[-1] += f" (truncated at L = {cfg.L}, safe radius {co.safe_radius})"
    if G.is_finite:
        bm = b_map(A, w)
        res["b_kernel"] = ab(bm.kernel)
        res["torsion"] = ab(co.group.torsion_subgroup())
        lines.append(f"ker B = {bm.kernel}")
    elif args.module.strip() == "I":
        tk = b_map_aug_truncated(G, None, w, cfg.L)
        res["b_injective_on_safe_ball"] = tk.injective
        lines.append(f"B injective on the safe ball: {'yes' if tk.injective else 'no'}")
    return Report("gamma", {"group": G.render(), "module": args.module, "w": w.render(), "L": cfg.L},
                  res, lines)


def cmd_kinv(args, cfg: RunConfig) -> Report:
    ref = args.complex
    C = resolve_complex(ref)
    lines = [f"complex = {C.name or ref} over {C.group.render()}"]
    res: dict = {"group": C.group.render()}
    if C.group.factors == (Cyclic(2),):
        fp = pi2(C)
        kd = k_invariant_data(C)
        res.update({"pi2": {"a": fp.a, "b": fp.b, "c": fp.c, "text": str(fp)},
                    "k_raw": kd.k.to_json(), "h3": ab(kd.h3)})
        lines += [f"pi2 = {fp}", f"H3(C2; pi2) = {kd.h3}", f"k (declared basis) = {kd.k}"]
        if C.form is not None:
            n = form_parameter(C.form)
            hc = hyperbolic_change(n, kd.k)
            res.update({"n": n, "residue": hc.residue, "k": hc.k_new.to_json()})
            lines += [f"n = {n}", f"residue = {hc.residue}", f"k = {hc.k_new}"]
        return Report("kinv", {"complex": ref}, res, lines)
    parts = C.name.split("#") if ref.startswith("builtin:") else []
    if len(parts) == 2:
        ks = []
        for p in parts:
            F = builtin(p)
            kd = k_invariant_data(F)
            ks.append((p, hyperbolic_change(form_parameter(F.form), kd.k).k_new))
        k = connected_sum_k(ks)
        res["k"] = k.to_json()
        lines.append(f"k = {k}")
        return Report("kinv", {"complex": ref}, res, lines)
    raise InputError("kinv computes k-invariants over C2, or for built-in connected sums")


def cmd_pi2(args, cfg: RunConfig) -> Report:
    G = _group(args.group)
    w = _character(G, args.w, "--w")
    dec = Decomposition(G, w, parse_pd3_list(args.pd3))
    bits = tuple(int(c) for c in (args.fclass or "") if c in "01")
    if args.fclass and len(bits) != len(args.fclass.replace(",", "").strip()):
        raise ParseError("fclass must be a string of 0/1", 1, 1, args.fclass, "<argument --fclass>")
    cls = stable_pi2(dec, bits, args.s)
    lines = [f"group = {G.render()}", f"pi2 ~ {cls.render()}"]
    return Report("pi2", {"group": G.render(), "w": w.render(), "fclass": list(bits)},
                  cls.to_json(), lines)


def cmd_euler(args, cfg: RunConfig) -> Report:
    G = _group(args.group)
    dec = Decomposition(G, _character(G, args.w, "--w"), parse_pd3_list(args.pd3))
    rep = euler_report(dec, args.chi, args.s)
    lines = [f"chi = {rep.chi}", f"s = {rep.s}", f"m = {rep.m}, r = {rep.r}, b1 = {rep.b1}"]
    return Report("euler", {"group": G.render()},
                  {"chi": rep.chi, "s": rep.s, "m": rep.m, "r": rep.r, "b1": rep.b1}, lines)


def cmd_classify(args, cfg: RunConfig) -> Report:
    m1, m2 = resolve_manifest(args.m1), resolve_manifest(args.m2)
    d = decide_dinfty(m1, m2, unbased=args.unbased)
    status = 1 if d.verdict is Verdict.NOT_HOMEOMORPHIC else 0
    lines = [f"{m1.name} vs {m2.name}: {d}"]
    return Report("classify", {"m1": args.m1, "m2": args.m2, "unbased": args.unbased},
                  {"decision": d.to_json(), "m1": m1.to_json(), "m2": m2.to_json()}, lines, status)


def cmd_validate(args, cfg: RunConfig) -> Report:
    out, lines, status = {}, [], 0
    for ref in args.manifests:
        m = resolve_manifest(ref)
        bad = validate(m)
        out[ref] = [str(v) for v in bad]
        if bad:
            status = 1
            lines += [f"{m.name}: INVALID"] + [f"  {v}" for v in bad]
        else:
            lines.append(f"{m.name}: valid (stable classes with this w2-type: "
                         f"{stable_class_count(m.w2type)})")
    return Report("validate", {"manifests": args.manifests}, {"violations": out}, lines, status)


def cmd_fox(args, cfg: RunConfig) -> Report:
    m = _PRES.match(args.presentation)
    if not m:
        raise ParseError("expected <g1, g2 | r1, r2>", 1, 1, args.presentation, "<argument PRESENTATION>")
    gens = [g.strip() for g in m.group("gens").split(",") if g.strip()]
    rel_texts = [r.strip() for r in m.group("rels").split(",") if r.strip()]
    rels = []
    offset = m.start("rels") + 1
    for r in rel_texts:
        try:
            rels.append(parse_free_word(r, gens))
        except ParseError as e:
            raise e.located("<argument PRESENTATION>", 0, offset + m.group("rels").index(r) - 1) from None
    G = _group(args.group) if args.group else infer_group(gens, rels)
    missing = [g for g in gens if g not in G.generators]
    if missing:
        raise InputError(f"generator {missing[0]!r} is not in the group {G.render()}")
    fc = FoxComplex.build(G, rels, gens)
    for text, val in zip(rel_texts, fc.relator_values()):
        if val:
            raise InputError(f"relator {text!r} is not trivial in {G.render()}")
    d1 = [[render_ring_elt(e) for e in r] for r in fc.d1.rows]
    d2 = [[render_ring_elt(e) for e in r] for r in fc.d2.rows]
    ok = fc.is_complex()
    lines = [f"group = {G.render()}", f"d1 = {d1}", f"d2 = {d2}", f"d2 d1 = 0: {'yes' if ok else 'no'}"]
    return Report("fox", {"presentation": args.presentation, "group": G.render()},
                  {"d1": d1, "d2": d2, "is_complex": ok}, lines)


def cmd_constants(args, cfg: RunConfig) -> Report:
    lines = [f"L4(Z[D_inf]) = {CONSTANTS.L4}", f"L5(Z[D_inf]) = {CONSTANTS.L5}"]
    res = {"L4": ab(CONSTANTS.L4), "L5": ab(CONSTANTS.L5)}
    if args.complex:
        ss = structure_set_size(resolve_complex(args.complex))
        res["structure_set"] = {"group": ab(ss.group), "asserted": ss.asserted}
        lines.append(f"S(M) = H2(M; Z/2) = {ss}")
    return Report("constants", {"complex": args.complex}, res, lines)


COMMANDS: dict[str, Callable] = {
    "resolve": cmd_resolve, "gamma": cmd_gamma, "kinv": cmd_kinv, "pi2": cmd_pi2,
    "euler": cmd_euler, "classify": cmd_classify, "validate": cmd_validate, "fox": cmd_fox,
    "constants": cmd_constants,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="twotype", description="Group-ring homology, Gamma, "
                                "k-invariants and D_inf classification.")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--version", action="version", version=f"twotype {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("resolve", help="twisted group homology table")
    s.add_argument("group")
    s.add_argument("--twist", help='character, e.g. "t=+1,T=-1"')
    s.add_argument("--degree", type=int)
    s.add_argument("--depth", type=int, default=DEFAULT_DEPTH)

    s = sub.add_parser("gamma", help="Gamma coinvariants and the kernel of B")
    s.add_argument("group")
    s.add_argument("--module", required=True, help="e.g. 'Z- + Z', 'ZG', 'I', '2*I'")
    s.add_argument("--w", help="orientation character")
    s.add_argument("-L", type=int, default=DEFAULT_L)

    s = sub.add_parser("kinv", help="pi_2 and k-invariant of a C2 complex")
    s.add_argument("complex", help="builtin:E, builtin:F, builtin:E#F, or FILE[#NAME]")

    s = sub.add_parser("pi2", help="stable class of pi_2")
    s.add_argument("group")
    s.add_argument("--w")
    s.add_argument("--pd3", help='aspherical factors, e.g. "N(1,1,1,1)"')
    s.add_argument("--fclass", default="", help="one bit per ZxC2 factor")
    s.add_argument("--s", type=int)

    s = sub.add_parser("euler", help="Euler characteristic versus stable rank s")
    s.add_argument("group")
    s.add_argument("--w")
    s.add_argument("--pd3")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--chi", type=int)
    g.add_argument("--s", type=int)

    s = sub.add_parser("classify", help="decide homeomorphism over D_inf")
    s.add_argument("m1")
    s.add_argument("m2")
    s.add_argument("--unbased", action="store_true")

    s = sub.add_parser("validate", help="check manifest consistency relations")
    s.add_argument("manifests", nargs="+")

    s = sub.add_parser("fox", help="Fox calculus presentation complex")
    s.add_argument("presentation", help="e.g. '<a | a^2>'")
    s.add_argument("--group")

    s = sub.add_parser("constants", help="L-group constants and structure sets")
    s.add_argument("--complex")
    return p


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    try:
        cfg = RunConfig(args.command, [], getattr(args, "L", DEFAULT_L),
                        getattr(args, "depth", DEFAULT_DEPTH), args.format)
        report = COMMANDS[args.command](args, cfg)
    except ParseError as e:
        err.write(f"error: {e.describe()}\n")
        return 2
    except InvalidManifest as e:
        err.write(f"error: {e}\n")
        return 1
    except (InputError, InadmissibleError, ValueError, KeyError, NotImplementedError) as e:
        msg = e.args[0] if e.args else str(e)
        err.write(f"error: {msg}\n")
        return 2
    report.emit(args.format, out)
    return report.status


def main() -> None:
    sys.exit(run())
