"""Plain-text family files and JSON-lines collision output.

One set per line as comma-separated ascending integers, e.g. ``0,2,5``.
Blank lines and ``#`` comments are ignored, except that a comment of the form
``# N=<n> k=<k>`` (optionally followed by ``zero=1``) declares the ambient
parameters. Writers always emit that header.
"""

from __future__ import annotations

import re
from pathlib import Path
from typing import Iterable, TextIO

from .verifier import CollisionRecord, Family

_HEADER = re.compile(r"^#\s*N=(\d+)\s+k=(\d+)(?:\s+zero=([01]))?\s*$")


class FamilyFormatError(ValueError):
    """A family file could not be parsed; ``line`` is 1-based."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def parse_set_line(text: str, line: int | None = None) -> tuple[int, ...]:
    try:
        values = tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise FamilyFormatError(f"not a comma-separated integer list: {text!r}", line)
    if any(v < 0 for v in values):
        raise FamilyFormatError(f"negative element in {text!r}", line)
    return tuple(sorted(values))


def iter_set_lines(lines: Iterable[str]):
    """Yield ``(line_number, tuple)`` for every set line and
    ``(line_number, header_match)`` for a parameter header."""
    for no, raw in enumerate(lines, start=1):
        text = raw.strip()
        if not text:
            continue
        if text.startswith("#"):
            m = _HEADER.match(text)
            if m:
                yield no, m
            continue
        yield no, parse_set_line(text, no)


def parse_family(lines: Iterable[str]) -> Family:
    n = k = None
    zero = None
    sets: list[tuple[int, ...]] = []
    seen: dict[tuple[int, ...], int] = {}
    for no, item in iter_set_lines(lines):
        if isinstance(item, re.Match):
            n, k = int(item.group(1)), int(item.group(2))
            zero = item.group(3) == "1" if item.group(3) else None
            continue
        if len(set(item)) != len(item):
            raise FamilyFormatError(f"repeated element in {item}", no)
        if k is None:
            k = len(item)
        elif len(item) != k:
            raise FamilyFormatError(f"set has {len(item)} elements, expected k={k}", no)
        if n is not None and item[-1] > n:
            raise FamilyFormatError(f"element {item[-1]} exceeds N={n}", no)
        if item in seen:
            raise FamilyFormatError(f"duplicate set (first seen on line {seen[item]})", no)
        seen[item] = no
        sets.append(item)
    if k is None:
        raise FamilyFormatError("empty family without a '# N=.. k=..' header")
    if zero is None:
        zero = any(s[0] == 0 for s in sets)
    if not zero:
        for s in sets:
            if s[0] == 0:
                raise FamilyFormatError(f"element 0 outside [1, N] in {s}", seen[s])
    try:
        return Family.from_sets(sets, n=n, k=k, zero_anchored=zero)
    except ValueError as exc:
        raise FamilyFormatError(str(exc)) from exc


def read_family(path) -> Family:
    with open(path) as fh:
        return parse_family(fh)


def format_family(f: Family, comments: Iterable[str] = ()) -> str:
    head = f"# N={f.n} k={f.k}" + (" zero=1" if f.zero_anchored else "")
    out = [f"# {c}" for c in comments] + [head]
    out += [",".join(map(str, s.elements)) for s in f.sets]
    return "\n".join(out) + "\n"


def write_family(f: Family, path, comments: Iterable[str] = ()) -> None:
    Path(path).write_text(format_family(f, comments))


def write_collisions(records: Iterable[CollisionRecord], fh: TextIO) -> int:
    count = 0
    for rec in records:
        fh.write(rec.to_json() + "\n")
        count += 1
    return count


def read_collisions(lines: Iterable[str]) -> list[CollisionRecord]:
    return [CollisionRecord.from_json(t) for t in lines if t.strip()]
