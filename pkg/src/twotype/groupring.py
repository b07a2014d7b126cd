"""Free products of C(n), Z and Z x C2, their words, and the integral group ring.

A word is a tuple of syllables ``(factor_index, element)``. Elements are an
exponent in 1..n-1 for C(n), a nonzero int for Z, and a pair ``(k, e)`` with
e in {0, 1} for Z x C2 (meaning t^k T^e). Adjacent syllables lie in distinct
factors, so this is the unique reduced normal form of a free product.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

Element = Union[int, tuple[int, int]]
Syllable = tuple[int, Element]
Word = tuple[Syllable, ...]

IDENTITY: Word = ()


# ---------------------------------------------------------------- factors

@dataclass(frozen=True)
class Cyclic:
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"cyclic factor needs n >= 2, got {self.n}")

    arity = 1
    finite = True

    def mul(self, x: int, y: int) -> int:
        return (x + y) % self.n

    def inv(self, x: int) -> int:
        return (-x) % self.n

    def is_one(self, x: int) -> bool:
        return x % self.n == 0

    def key(self, x: int):
        return (x,)

    def gen_power(self, which: int, k: int) -> int:
        return k % self.n

    def elements(self) -> list[int]:
        return list(range(1, self.n))

    def ball(self, L: int) -> list[int]:
        return self.elements()

    def label(self) -> str:
        return f"C{self.n}"


@dataclass(frozen=True)
class Infinite:
    arity = 1
    finite = False

    def mul(self, x: int, y: int) -> int:
        return x + y

    def inv(self, x: int) -> int:
        return -x

    def is_one(self, x: int) -> bool:
        return x == 0

    def key(self, x: int):
        return (abs(x), x < 0)

    def gen_power(self, which: int, k: int) -> int:
        return k

    def ball(self, L: int) -> list[int]:
        return sorted([k for k in range(-L, L + 1) if k], key=self.key)

    def label(self) -> str:
        return "Z"


@dataclass(frozen=True)
class ZxC2:
    arity = 2
    finite = False

    def mul(self, x, y):
        return (x[0] + y[0], (x[1] + y[1]) % 2)

    def inv(self, x):
        return (-x[0], x[1])

    def is_one(self, x) -> bool:
        return x[0] == 0 and x[1] % 2 == 0

    def key(self, x):
        return (abs(x[0]), x[0] < 0, x[1])

    def gen_power(self, which: int, k: int):
        return (k, 0) if which == 0 else (0, k % 2)

    def ball(self, L: int):
        out = [(k, e) for k in range(-L, L + 1) for e in (0, 1) if (k, e) != (0, 0)]
        return sorted(out, key=self.key)

    def label(self) -> str:
        return "ZxC2"


Factor = Union[Cyclic, Infinite, ZxC2]


# ---------------------------------------------------------------- groups

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_DEFAULT_LETTERS = "abcdefghjkmnpqrsuvxyz"


@dataclass(frozen=True)
class GroupSpec:
    """A free product of supported factors with named generators."""

    factors: tuple[Factor, ...]
    names: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        object.__setattr__(self, "names", tuple(tuple(n) for n in self.names))
        if len(self.factors) != len(self.names):
            raise ValueError("one name tuple per factor is required")
        seen = set()
        for f, ns in zip(self.factors, self.names):
            if len(ns) != f.arity:
                raise ValueError(f"factor {f.label()} needs {f.arity} generator name(s)")
            for n in ns:
                if not _NAME.match(n) or n == "1":
                    raise ValueError(f"bad generator name {n!r}")
                if n in seen:
                    raise ValueError(f"duplicate generator name {n!r}")
                seen.add(n)

    # construction
    @classmethod
    def of(cls, *factors: Factor, names: Sequence[Sequence[str]] | None = None) -> GroupSpec:
        if names is None:
            names = default_names(factors)
        return cls(tuple(factors), tuple(tuple(n) for n in names))

    @classmethod
    def trivial(cls) -> GroupSpec:
        return cls((), ())

    def sub(self, indices: Sequence[int]) -> GroupSpec:
        """The sub-free-product on the given factors (in the given order)."""
        return GroupSpec(tuple(self.factors[i] for i in indices),
                         tuple(self.names[i] for i in indices))

    # generators
    @property
    def generators(self) -> tuple[str, ...]:
        return tuple(n for ns in self.names for n in ns)

    def locate(self, name: str) -> tuple[int, int]:
        for fi, ns in enumerate(self.names):
            if name in ns:
                return fi, ns.index(name)
        raise KeyError(f"unknown generator {name!r}")

    def gen_word(self, name: str, k: int = 1) -> Word:
        fi, which = self.locate(name)
        x = self.factors[fi].gen_power(which, k)
        return () if self.factors[fi].is_one(x) else ((fi, x),)

    def gen_order(self, name: str) -> int | None:
        fi, which = self.locate(name)
        f = self.factors[fi]
        if isinstance(f, Cyclic):
            return f.n
        if isinstance(f, ZxC2) and which == 1:
            return 2
        return None

    # words
    def mul(self, u: Word, v: Word) -> Word:
        out = list(u)
        for k, syl in enumerate(v):
            if out and out[-1][0] == syl[0]:
                fi = syl[0]
                f = self.factors[fi]
                x = f.mul(out[-1][1], syl[1])
                out.pop()
                if not f.is_one(x):
                    out.append((fi, x))
                    out.extend(v[k + 1:])
                    break
            else:
                out.extend(v[k:])
                break
        return tuple(out)

    def inv(self, u: Word) -> Word:
        return tuple((fi, self.factors[fi].inv(x)) for fi, x in reversed(u))

    def word_key(self, u: Word):
        return (len(u), tuple((fi, self.factors[fi].key(x)) for fi, x in u))

    def check_word(self, u: Word) -> None:
        for k, (fi, x) in enumerate(u):
            if not 0 <= fi < len(self.factors):
                raise ValueError(f"syllable {k} names factor {fi}")
            if self.factors[fi].is_one(x):
                raise ValueError(f"syllable {k} is the identity")
            if k and u[k - 1][0] == fi:
                raise ValueError(f"syllables {k - 1},{k} share a factor")

    @property
    def is_finite(self) -> bool:
        return all(f.finite for f in self.factors) and len(self.factors) <= 1

    @property
    def order(self) -> int | None:
        if not self.is_finite:
            return None
        return self.factors[0].n if self.factors else 1

    def ball(self, L: int) -> list[Word]:
        """Words with at most L syllables and Z-exponents bounded by L, short-lex."""
        if self.is_finite:
            return self.elements()
        out = [()]
        frontier = [()]
        for _ in range(L):
            nxt = []
            for u in frontier:
                last = u[-1][0] if u else None
                for fi, f in enumerate(self.factors):
                    if fi == last:
                        continue
                    for x in f.ball(L):
                        nxt.append(u + ((fi, x),))
            out.extend(nxt)
            frontier = nxt
        return sorted(out, key=self.word_key)

    def elements(self) -> list[Word]:
        if not self.is_finite:
            raise ValueError("group is infinite")
        if not self.factors:
            return [()]
        return [()] + [((0, x),) for x in self.factors[0].elements()]

    def render_word(self, u: Word) -> str:
        if not u:
            return "1"
        parts = []
        for fi, x in u:
            f, ns = self.factors[fi], self.names[fi]
            if isinstance(f, ZxC2):
                k, e = x
                if k:
                    parts.append(ns[0] if k == 1 else f"{ns[0]}^{k}")
                if e:
                    parts.append(ns[1])
            else:
                parts.append(ns[0] if x == 1 else f"{ns[0]}^{x}")
        return "*".join(parts)

    def render(self) -> str:
        if not self.factors:
            return "1"
        return " * ".join(f"{f.label()}({','.join(ns)})" for f, ns in zip(self.factors, self.names))

    def __str__(self) -> str:
        return self.render()


def default_names(factors: Sequence[Factor]) -> list[tuple[str, ...]]:
    """Default generator names: T for a lone cyclic factor, t for a lone Z,
    (t, T) for Z x C2, otherwise a, b, c, ... with (t2, T2), ... for extra Z x C2."""
    if len(factors) == 1:
        f = factors[0]
        return [("T",)] if isinstance(f, Cyclic) else [("t",)] if isinstance(f, Infinite) else [("t", "T")]
    letters = iter(_DEFAULT_LETTERS)
    out, nz = [], 0
    for f in factors:
        if isinstance(f, ZxC2):
            nz += 1
            out.append(("t", "T") if nz == 1 else (f"t{nz}", f"T{nz}"))
        else:
            out.append((next(letters),))
    return out


# ---------------------------------------------------------------- characters

@dataclass(frozen=True)
class Character:
    """A homomorphism to {+1, -1}, stored by its values on generators."""

    group: GroupSpec
    values: tuple[int, ...]
    _by_factor: tuple = field(init=False, repr=False, compare=False, default=())

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        gens = self.group.generators
        if len(self.values) != len(gens):
            raise ValueError("one value per generator is required")
        for name, v in zip(gens, self.values):
            if v not in (1, -1):
                raise ValueError(f"character value on {name} must be +1 or -1")
            order = self.group.gen_order(name)
            if v == -1 and order is not None and order % 2:
                raise ValueError(f"{name} has odd order {order}, its value must be +1")
        it = iter(self.values)
        object.__setattr__(self, "_by_factor",
                           tuple(tuple(next(it) for _ in ns) for ns in self.group.names))

    @classmethod
    def trivial(cls, G: GroupSpec) -> Character:
        return cls(G, (1,) * len(G.generators))

    @classmethod
    def from_dict(cls, G: GroupSpec, values: dict[str, int]) -> Character:
        for k in values:
            G.locate(k)
        return cls(G, tuple(values.get(n, 1) for n in G.generators))

    @classmethod
    def parse(cls, G: GroupSpec, text: str) -> Character:
        """Parse ``"t=+1,T=-1"``; unnamed generators default to +1."""
        vals = {}
        text = text.strip()
        if text and text not in ("trivial", "1"):
            for part in text.split(","):
                if "=" not in part:
                    raise ValueError(f"expected name=+1 or name=-1, got {part.strip()!r}")
                k, v = (s.strip() for s in part.split("=", 1))
                if v not in ("+1", "1", "-1"):
                    raise ValueError(f"character value for {k} must be +1 or -1, got {v!r}")
                vals[k] = -1 if v == "-1" else 1
        return cls.from_dict(G, vals)

    def as_dict(self) -> dict[str, int]:
        return dict(zip(self.group.generators, self.values))

    def render(self) -> str:
        return ",".join(f"{n}={'+1' if v == 1 else '-1'}" for n, v in self.as_dict().items())

    @property
    def is_trivial(self) -> bool:
        return all(v == 1 for v in self.values)

    def syllable(self, fi: int, x) -> int:
        vals = self._by_factor[fi]
        if isinstance(self.group.factors[fi], ZxC2):
            k, e = x
            return (vals[0] if k % 2 else 1) * (vals[1] if e else 1)
        return vals[0] if x % 2 else 1

    def __call__(self, u: Word) -> int:
        s = 1
        for fi, x in u:
            s *= self.syllable(fi, x)
        return s

    def restrict(self, indices: Sequence[int]) -> Character:
        H = self.group.sub(indices)
        d = self.as_dict()
        return Character(H, tuple(d[n] for n in H.generators))

    def __mul__(self, other: Character) -> Character:
        if other.group != self.group:
            raise ValueError("characters on different groups")
        return Character(self.group, tuple(a * b for a, b in zip(self.values, other.values)))


# ---------------------------------------------------------------- group ring

class RingElt:
    """Finitely supported integer combination of words; an element of Z[G]."""

    __slots__ = ("group", "terms", "_hash")

    def __init__(self, group: GroupSpec, terms: dict[Word, int] | Iterable[tuple[Word, int]] = ()):
        acc: dict[Word, int] = {}
        items = terms.items() if isinstance(terms, dict) else terms
        for w, c in items:
            acc[w] = acc.get(w, 0) + int(c)
        self.group = group
        self.terms = tuple(sorted(((w, c) for w, c in acc.items() if c),
                                  key=lambda wc: group.word_key(wc[0])))
        self._hash = None

    @classmethod
    def zero(cls, G: GroupSpec) -> RingElt:
        return cls(G)

    @classmethod
    def one(cls, G: GroupSpec) -> RingElt:
        return cls(G, {(): 1})

    @classmethod
    def const(cls, G: GroupSpec, c: int) -> RingElt:
        return cls(G, {(): c})

    @classmethod
    def word(cls, G: GroupSpec, u: Word, c: int = 1) -> RingElt:
        return cls(G, {u: c})

    @classmethod
    def gen(cls, G: GroupSpec, name: str, k: int = 1) -> RingElt:
        return cls(G, {G.gen_word(name, k): 1})

    def as_dict(self) -> dict[Word, int]:
        return dict(self.terms)

    def coeff(self, u: Word) -> int:
        return self.as_dict().get(u, 0)

    def support(self) -> list[Word]:
        return [w for w, _ in self.terms]

    def is_zero(self) -> bool:
        return not self.terms

    def _coerce(self, other) -> RingElt:
        if isinstance(other, RingElt):
            if other.group != self.group:
                raise ValueError("ring elements over different groups")
            return other
        if isinstance(other, int):
            return RingElt.const(self.group, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RingElt(self.group, list(self.terms) + list(other.terms))

    __radd__ = __add__

    def __neg__(self):
        return RingElt(self.group, [(w, -c) for w, c in self.terms])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ring_mul(self, other)

    def __rmul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ring_mul(other, self)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = RingElt.one(self.group)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = RingElt.const(self.group, other)
        if not isinstance(other, RingElt):
            return NotImplemented
        return self.group == other.group and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.group, self.terms))
        return self._hash

    def __repr__(self) -> str:
        return f"RingElt({render_ring_elt(self)!r})"

    def __str__(self) -> str:
        return render_ring_elt(self)


def word_mul(u: Word, v: Word, G: GroupSpec) -> Word:
    return G.mul(u, v)


def ring_mul(x: RingElt, y: RingElt) -> RingElt:
    if x.group != y.group:
        raise ValueError("ring elements over different groups")
    G = x.group
    acc: dict[Word, int] = {}
    for u, a in x.terms:
        for v, b in y.terms:
            w = G.mul(u, v)
            acc[w] = acc.get(w, 0) + a * b
    return RingElt(G, acc)


def involute(x: RingElt, w: Character) -> RingElt:
    """The anti-involution g -> w(g) g^-1, extended linearly."""
    G = x.group
    return RingElt(G, [(G.inv(u), w(u) * c) for u, c in x.terms])


def augment(x: RingElt, v: Character | None = None) -> int:
    """The twisted augmentation g -> v(g)."""
    if v is None:
        return sum(c for _, c in x.terms)
    return sum(v(u) * c for u, c in x.terms)


def omega(x: RingElt, w: Character) -> RingElt:
    """The additive twist sum n_g g -> sum w(g) n_g g."""
    return RingElt(x.group, [(u, w(u) * c) for u, c in x.terms])


# ---------------------------------------------------------------- text format

class ParseError(ValueError):
    """Syntax or name error with a source position."""

    def __init__(self, message: str, line: int = 1, col: int = 1, token: str = "",
                 source: str = "<input>"):
        self.message = message
        self.line = line
        self.col = col
        self.token = token
        self.source = source
        super().__init__(self.describe())

    def describe(self) -> str:
        tok = f" near {self.token!r}" if self.token else ""
        return f"{self.source}:{self.line}:{self.col}: {self.message}{tok}"

    def located(self, source: str, line_offset: int = 0, col_offset: int = 0) -> ParseError:
        """Same error relative to an enclosing file."""
        col = self.col + col_offset if self.line == 1 else self.col
        return ParseError(self.message, self.line + line_offset, col, self.token, source)


_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^]))")


def _tokenize(text: str) -> list[tuple[str, str, int, int]]:
    toks = []
    pos = 0
    line_starts = [0] + [m.end() for m in re.finditer("\n", text)]

    def where(p):
        ln = max(i for i, s in enumerate(line_starts) if s <= p)
        return ln + 1, p - line_starts[ln] + 1

    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            ln, col = where(pos)
            raise ParseError("unexpected character", ln, col, text[pos])
        kind = m.lastgroup
        start = m.start(kind)
        ln, col = where(start)
        toks.append((kind, m.group(kind), ln, col))
        pos = m.end()
    ln, col = where(len(text))
    toks.append(("end", "", ln, col))
    return toks


class _Parser:
    def __init__(self, text: str, names: Sequence[str]):
        self.toks = _tokenize(text)
        self.i = 0
        self.names = set(names)

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, msg, tok=None):
        kind, val, ln, col = tok or self.peek()
        raise ParseError(msg, ln, col, val if kind != "end" else "end of input")

    def expect_op(self, op):
        t = self.peek()
        if t[0] != "op" or t[1] != op:
            self.fail(f"expected {op!r}")
        return self.take()

    def letters(self) -> list[tuple[str, int]]:
        """Product of g or g^k joined by '*'; '1' is the empty product."""
        t = self.peek()
        if t[0] == "int" and t[1] == "1":
            self.take()
            return []
        out = [self.letter()]
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            out.append(self.letter())
        return out

    def letter(self) -> tuple[str, int]:
        t = self.peek()
        if t[0] != "name":
            self.fail("expected a generator name")
        self.take()
        if t[1] not in self.names:
            self.fail("unknown generator", t)
        k = 1
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            sign = 1
            if self.peek()[0] == "op" and self.peek()[1] in "+-":
                sign = -1 if self.take()[1] == "-" else 1
            e = self.peek()
            if e[0] != "int":
                self.fail("expected an integer exponent")
            self.take()
            k = sign * int(e[1])
        return (t[1], k)

    def term(self) -> tuple[int, list[tuple[str, int]]]:
        t = self.peek()
        if t[0] == "int":
            self.take()
            c = int(t[1])
            if self.peek()[0] == "op" and self.peek()[1] == "*":
                self.take()
                return c, self.letters()
            return c, []
        if t[0] == "name":
            return 1, self.letters()
        self.fail("expected a term")

    def expr(self) -> list[tuple[int, list[tuple[str, int]]]]:
        out = []
        sign = 1
        t = self.peek()
        if t[0] == "op" and t[1] in "+-":
            self.take()
            sign = -1 if t[1] == "-" else 1
        while True:
            c, letters = self.term()
            out.append((sign * c, letters))
            t = self.peek()
            if t[0] == "end":
                return out
            if t[0] == "op" and t[1] in "+-":
                self.take()
                sign = -1 if t[1] == "-" else 1
                continue
            self.fail("expected '+', '-' or end of expression")


def letters_to_word(letters: Sequence[tuple[str, int]], G: GroupSpec) -> Word:
    u: Word = ()
    for name, k in letters:
        u = G.mul(u, G.gen_word(name, k))
    return u


def parse_ring_elt(text: str, G: GroupSpec) -> RingElt:
    p = _Parser(text, G.generators)
    acc: dict[Word, int] = {}
    for c, letters in p.expr():
        u = letters_to_word(letters, G)
        acc[u] = acc.get(u, 0) + c
    return RingElt(G, acc)


def parse_free_word(text: str, names: Sequence[str]) -> tuple[tuple[str, int], ...]:
    """A single monomial in the free group, letters kept unreduced."""
    p = _Parser(text, names)
    letters = p.letters()
    if p.peek()[0] != "end":
        p.fail("expected end of word")
    return tuple(letters)


def render_ring_elt(x: RingElt) -> str:
    if not x.terms:
        return "0"
    G = x.group
    out = []
    for k, (u, c) in enumerate(x.terms):
        body = G.render_word(u)
        a = abs(c)
        piece = str(a) if not u else body if a == 1 else f"{a}*{body}"
        if k == 0:
            out.append(("-" if c < 0 else "") + piece)
        else:
            out.append((" - " if c < 0 else " + ") + piece)
    return "".join(out)


# ---------------------------------------------------------------- group text

_FACTOR = re.compile(r"\s*(?P<kind>ZxC2|Zx2|C\d+|Z|Dinf|D_inf)\s*(?:\((?P<names>[^)]*)\))?\s*\Z")


def parse_group(text: str) -> GroupSpec:
    """Parse ``"C2(a) * C2(b)"``, ``"ZxC2(t,T)"``, ``"Z"``, ``"Dinf"``, ``"1"``.

    Names in parentheses are optional; defaults follow ``default_names``.
    """
    text = text.strip()
    if text in ("", "1", "trivial"):
        return GroupSpec.trivial()
    factors: list[Factor] = []
    given: list[tuple[str, ...] | None] = []
    col = 1
    for part in text.split("*"):
        m = _FACTOR.match(part)
        if not m:
            raise ParseError("unknown group factor", 1, col, part.strip())
        kind = m.group("kind")
        names = m.group("names")
        ns = tuple(s.strip() for s in names.split(",")) if names else None
        if kind in ("Dinf", "D_inf"):
            if ns is not None and len(ns) != 2:
                raise ParseError("Dinf takes two generator names", 1, col, part.strip())
            factors += [Cyclic(2), Cyclic(2)]
            given += [(ns[0],), (ns[1],)] if ns else [None, None]
        elif kind in ("ZxC2", "Zx2"):
            factors.append(ZxC2())
            given.append(ns)
        elif kind == "Z":
            factors.append(Infinite())
            given.append(ns)
        else:
            n = int(kind[1:])
            if n < 2:
                raise ParseError("cyclic factor needs n >= 2", 1, col, part.strip())
            factors.append(Cyclic(n))
            given.append(ns)
        col += len(part) + 1
    if any(g is None for g in given):
        if not all(g is None for g in given):
            raise ParseError("either name every factor or none", 1, 1, text)
        return GroupSpec.of(*factors)
    try:
        return GroupSpec(tuple(factors), tuple(given))
    except ValueError as exc:
        raise ParseError(str(exc), 1, 1, text) from None


# ---------------------------------------------------------------- matrices

class RingMatrix:
    """Matrix over Z[G] acting on row vectors from the right: x -> x M.

    Row i is the image of the i-th basis vector, so a map C_k -> C_{k-1}
    has rank C_k rows and rank C_{k-1} columns.
    """

    __slots__ = ("group", "rows", "nrows", "ncols")

    def __init__(self, group: GroupSpec, rows: Iterable[Iterable[RingElt | int]],
                 nrows: int | None = None, ncols: int | None = None):
        rows = [[e if isinstance(e, RingElt) else RingElt.const(group, e) for e in r] for r in rows]
        self.group = group
        self.nrows = len(rows) if nrows is None else nrows
        self.ncols = (len(rows[0]) if rows else 0) if ncols is None else ncols
        if len(rows) != self.nrows or any(len(r) != self.ncols for r in rows):
            raise ValueError("rows do not match shape")
        for r in rows:
            for e in r:
                if e.group != group:
                    raise ValueError("entry over a different group")
        self.rows = tuple(tuple(r) for r in rows)

    @classmethod
    def zeros(cls, G: GroupSpec, nrows: int, ncols: int) -> RingMatrix:
        return cls(G, [[0] * ncols for _ in range(nrows)], nrows, ncols)

    @classmethod
    def identity(cls, G: GroupSpec, n: int) -> RingMatrix:
        return cls(G, [[int(i == j) for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def parse(cls, G: GroupSpec, rows: Sequence[Sequence[str]], nrows: int | None = None,
              ncols: int | None = None) -> RingMatrix:
        return cls(G, [[parse_ring_elt(s, G) for s in r] for r in rows], nrows, ncols)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other: RingMatrix) -> RingMatrix:
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out = []
        for r in self.rows:
            row = []
            for j in range(other.ncols):
                acc = RingElt.zero(self.group)
                for k, a in enumerate(r):
                    if a.terms and other.rows[k][j].terms:
                        acc = acc + a * other.rows[k][j]
                row.append(acc)
            out.append(row)
        return RingMatrix(self.group, out, self.nrows, other.ncols)

    def __add__(self, other: RingMatrix) -> RingMatrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return RingMatrix(self.group, [[a + b for a, b in zip(r, s)]
                                       for r, s in zip(self.rows, other.rows)], *self.shape)

    def __neg__(self) -> RingMatrix:
        return self.map(lambda x: -x)

    def __sub__(self, other: RingMatrix) -> RingMatrix:
        return self + (-other)

    def map(self, f) -> RingMatrix:
        return RingMatrix(self.group, [[f(e) for e in r] for r in self.rows], *self.shape)

    def transpose(self) -> RingMatrix:
        return RingMatrix(self.group, [[self.rows[i][j] for i in range(self.nrows)]
                                       for j in range(self.ncols)], self.ncols, self.nrows)

    def is_zero(self) -> bool:
        return all(e.is_zero() for r in self.rows for e in r)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RingMatrix):
            return NotImplemented
        return self.group == other.group and self.shape == other.shape and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.group, self.shape, self.rows))

    def render(self) -> list[list[str]]:
        return [[render_ring_elt(e) for e in r] for r in self.rows]

    def __repr__(self) -> str:
        return f"RingMatrix({self.render()})"


def ring_block_diag(G: GroupSpec, blocks: Sequence[RingMatrix]) -> RingMatrix:
    nr = sum(b.nrows for b in blocks)
    nc = sum(b.ncols for b in blocks)
    out: list[list[RingElt | int]] = [[0] * nc for _ in range(nr)]
    r0 = c0 = 0
    for b in blocks:
        for i in range(b.nrows):
            for j in range(b.ncols):
                out[r0 + i][c0 + j] = b.rows[i][j]
        r0 += b.nrows
        c0 += b.ncols
    return RingMatrix(G, out, nr, nc)


def ring_vstack(G: GroupSpec, blocks: Sequence[RingMatrix], ncols: int) -> RingMatrix:
    rows = [r for b in blocks for r in b.rows]
    return RingMatrix(G, rows, len(rows), ncols)


def embed_elt(x: RingElt, H: GroupSpec, indices: Sequence[int]) -> RingElt:
    """Push an element of the sub-free-product on ``indices`` into H."""
    return RingElt(H, [(tuple((indices[fi], y) for fi, y in u), c) for u, c in x.terms])
