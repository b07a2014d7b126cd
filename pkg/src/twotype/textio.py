"""Section files: ``[kind NAME]`` headers followed by ``key = value`` lines.

Used for complex and manifest files. Blank lines and comments (``#`` at the
start of a line or after whitespace) are ignored. Every value remembers its
line and column so that downstream parse errors can point into the file.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .groupring import ParseError

_HEADER = re.compile(r"\[\s*(?P<kind>[A-Za-z_]+)\s+(?P<name>[^\]\s]+)\s*\]\s*\Z")
_COMMENT = re.compile(r"(?:^|(?<=\s))#.*$")
_KEY = re.compile(r"(?P<key>[A-Za-z_][A-Za-z0-9_]*)\s*=\s*")


@dataclass(frozen=True)
class Value:
    text: str
    line: int
    col: int

    def error(self, message: str, token: str | None = None, source: str = "<input>",
              offset: int = 0) -> ParseError:
        return ParseError(message, self.line, self.col + offset,
                          self.text if token is None else token, source)


@dataclass
class Section:
    kind: str
    name: str
    line: int
    source: str
    entries: dict[str, Value] = field(default_factory=dict)

    def get(self, key: str) -> Value | None:
        return self.entries.get(key)

    def require(self, key: str) -> Value:
        if key not in self.entries:
            raise ParseError(f"[{self.kind} {self.name}] is missing key {key!r}", self.line, 1,
                             key, self.source)
        return self.entries[key]

    def check_keys(self, allowed: set[str]) -> None:
        for k, v in self.entries.items():
            if k not in allowed:
                raise ParseError(f"unknown key {k!r}", v.line, 1, k, self.source)


def parse_sections(text: str, source: str = "<input>") -> list[Section]:
    sections: list[Section] = []
    cur: Section | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _COMMENT.sub("", raw).rstrip()
        stripped = line.strip()
        if not stripped:
            continue
        indent = len(line) - len(line.lstrip())
        if stripped.startswith("["):
            m = _HEADER.match(stripped)
            if not m:
                raise ParseError("malformed section header", lineno, indent + 1, stripped, source)
            cur = Section(m.group("kind"), m.group("name"), lineno, source)
            sections.append(cur)
            continue
        m = _KEY.match(stripped)
        if not m:
            raise ParseError("expected 'key = value'", lineno, indent + 1, stripped.split()[0], source)
        if cur is None:
            raise ParseError("entry outside of any section", lineno, indent + 1, m.group("key"), source)
        key = m.group("key")
        if key in cur.entries:
            raise ParseError(f"duplicate key {key!r}", lineno, indent + 1, key, source)
        cur.entries[key] = Value(stripped[m.end():], lineno, indent + m.end() + 1)
    return sections


def find_section(sections: list[Section], kind: str, name: str | None, source: str) -> Section:
    cands = [s for s in sections if s.kind == kind]
    if name is not None:
        cands = [s for s in cands if s.name == name]
    if not cands:
        what = f"[{kind} {name}]" if name else f"a [{kind} ...] section"
        raise ParseError(f"no {what} found", 1, 1, name or kind, source)
    if name is None and len(cands) > 1:
        raise ParseError(f"several [{kind} ...] sections; select one with FILE#NAME", 1, 1, kind, source)
    return cands[0]


# ---------------------------------------------------------------- bracket lists

def parse_matrix_cells(v: Value, source: str = "<input>") -> list[list[tuple[str, int]]]:
    """``[[x, y], [z, w]]`` to rows of (cell text, column offset in the value).

    Cells are split on commas only, so they may be any text without
    brackets or commas (ring elements qualify). ``[]`` is an empty matrix.
    """
    s = v.text
    i = 0
    n = len(s)

    def skip(i):
        while i < n and s[i].isspace():
            i += 1
        return i

    def fail(msg, at):
        tok = s[at:at + 8].split(",")[0] if at < n else "end of line"
        return v.error(msg, tok or s[at:at + 1], source, at)

    i = skip(i)
    if i >= n or s[i] != "[":
        raise fail("expected '['", i)
    i = skip(i + 1)
    rows: list[list[tuple[str, int]]] = []
    if i < n and s[i] == "]":
        i += 1
    else:
        while True:
            if i >= n or s[i] != "[":
                raise fail("expected '[' to open a row", i)
            i += 1
            row = []
            if skip(i) < n and s[skip(i)] == "]":
                i = skip(i) + 1
            else:
                while True:
                    start = i
                    while i < n and s[i] not in ",[]":
                        i += 1
                    cell = s[start:i]
                    if not cell.strip():
                        raise fail("empty matrix entry", start)
                    lead = len(cell) - len(cell.lstrip())
                    row.append((cell.strip(), start + lead))
                    if i >= n:
                        raise fail("unterminated row", i)
                    if s[i] == ",":
                        i += 1
                        continue
                    if s[i] == "]":
                        i += 1
                        break
                    raise fail("unexpected '['", i)
            rows.append(row)
            i = skip(i)
            if i < n and s[i] == ",":
                i = skip(i + 1)
                continue
            if i < n and s[i] == "]":
                i += 1
                break
            raise fail("expected ',' or ']'", i)
    if skip(i) != n:
        raise fail("trailing text", skip(i))
    return rows


def parse_int(v: Value, source: str = "<input>", lo: int | None = None) -> int:
    try:
        x = int(v.text.strip())
    except ValueError:
        raise v.error("expected an integer", v.text.strip(), source) from None
    if lo is not None and x < lo:
        raise v.error(f"expected an integer >= {lo}", v.text.strip(), source)
    return x
