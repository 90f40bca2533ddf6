import io

import pytest

from sidonkit import Family
from sidonkit.constructions import construct_b2g, construct_k2, construct_k3, construct_k4
from sidonkit.formats import (FamilyFormatError, format_family, parse_family, read_collisions,
                              read_family, write_collisions, write_family)
from sidonkit.verifier import find_collisions


def parse(text):
    return parse_family(text.splitlines())


def test_parse_basic_and_resorts():
    f = parse("# a comment\n\n2,5\n1,3\n 1 , 2 \n")
    assert [s.elements for s in f] == [(1, 2), (1, 3), (2, 5)]
    assert (f.n, f.k, f.zero_anchored) == (5, 2, False)


def test_parse_header_sets_ambient():
    f = parse("# N=10 k=3\n1,2,3\n")
    assert (f.n, f.k) == (10, 3)
    f = parse("# N=9 k=3 zero=1\n0,1,2\n")
    assert f.zero_anchored
    f = parse("# N=7 k=2\n")
    assert len(f) == 0 and f.n == 7


def test_parse_unsorted_line_is_sorted():
    assert parse("3,1,2\n").sets[0].elements == (1, 2, 3)


@pytest.mark.parametrize("text, line", [
    ("1,2,3\n1,2,3\n", 2),                 # duplicate set
    ("# N=10 k=3\n1,2,11\n", 2),           # outside ambient
    ("1,2\n1,2,3\n", 2),                   # k mismatch
    ("1,2\nx,3\n", 2),                     # not an integer
    ("1,-2\n", 1),                         # negative
    ("1,1\n", 1),                          # repeated element
    ("1,2\n0,3\n# N=5 k=2 zero=0\n", None),  # zero not allowed once declared
])
def test_parse_errors_name_the_line(text, line):
    with pytest.raises(FamilyFormatError) as exc:
        parse(text)
    if line is not None:
        assert exc.value.line == line
        assert f"line {line}" in str(exc.value)


def test_empty_file_without_header_is_an_error():
    with pytest.raises(FamilyFormatError):
        parse("# only comments\n")


@pytest.mark.parametrize("family", [
    construct_k2(12), construct_k3(9), construct_k4(56, 3), construct_b2g(40, 2, 2),
    Family.from_sets([(0, 1, 2), (0, 2, 5)], n=9, k=3, zero_anchored=True),
])
def test_round_trip(tmp_path, family):
    path = tmp_path / "f.txt"
    write_family(family, path, comments=["hello"])
    text = path.read_text()
    assert text.startswith("# hello\n# N=")
    back = read_family(path)
    assert back == family
    assert format_family(back) == format_family(family)


def test_collision_lines_round_trip():
    f = Family.from_sets([(2, 3, 4), (2, 3, 5), (2, 4, 5), (1, 2, 3)])
    recs = find_collisions(f)
    buf = io.StringIO()
    assert write_collisions(recs, buf) == len(recs)
    assert read_collisions(buf.getvalue().splitlines()) == recs
