import pytest

from twotype.groupring import ParseError
from twotype.textio import Value, find_section, parse_int, parse_matrix_cells, parse_sections

TEXT = """# header comment
[complex E#F]
group = Dinf   # trailing comment
C0 = 1

[manifest m]
sigma = -8
"""


def test_sections_and_hash_names():
    secs = parse_sections(TEXT, "f.txt")
    assert [(s.kind, s.name) for s in secs] == [("complex", "E#F"), ("manifest", "m")]
    g = secs[0].get("group")
    assert g.text == "Dinf" and g.line == 3 and g.col == 9


def test_section_errors():
    with pytest.raises(ParseError) as ei:
        parse_sections("[complex\n", "f.txt")
    assert ei.value.line == 1
    with pytest.raises(ParseError) as ei:
        parse_sections("a = 1\n", "f.txt")
    assert "outside" in ei.value.message
    with pytest.raises(ParseError) as ei:
        parse_sections("[x y]\na = 1\na = 2\n", "f.txt")
    assert ei.value.line == 3 and ei.value.token == "a"
    with pytest.raises(ParseError):
        parse_sections("[x y]\njunk\n")


def test_find_section():
    secs = parse_sections(TEXT)
    assert find_section(secs, "manifest", None, "f").name == "m"
    with pytest.raises(ParseError):
        find_section(secs, "manifest", "zz", "f")


def test_matrix_cells_offsets():
    v = Value("[[1 - T, 0], [T]]", 4, 6)
    rows = parse_matrix_cells(v)
    assert [[c for c, _ in r] for r in rows] == [["1 - T", "0"], ["T"]]
    for r in rows:
        for cell, off in r:
            assert v.text[off:off + len(cell)] == cell
    assert parse_matrix_cells(Value("[]", 1, 1)) == []


@pytest.mark.parametrize("bad", ["[[1, 2]", "[1, 2]", "[[1,,2]]", "[[1]] x", "[[1] [2]]"])
def test_matrix_errors(bad):
    with pytest.raises(ParseError) as ei:
        parse_matrix_cells(Value(bad, 2, 5), "f.txt")
    assert ei.value.line == 2 and ei.value.col >= 5


def test_parse_int():
    assert parse_int(Value(" -8", 1, 1)) == -8
    with pytest.raises(ParseError):
        parse_int(Value("x", 1, 1))
    with pytest.raises(ParseError):
        parse_int(Value("-1", 1, 1), lo=0)
