"""Cayley-table files, the bundled corpus and enumeration of small loops.

Table format::

    loop 5            # kind and order
    0 1 2 3 4         # order rows of the multiplication table, 0-based
    ...
    %ldiv             # optional division tables, same layout
    ...
    %rdiv
    ...
    #! ideal A3: 1    # optional named ideal, given by generators

``#`` starts a comment. Element 0 must be the unit.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from functools import lru_cache
from importlib import resources
from pathlib import Path

import numpy as np

from .algebra import TableAlgebra, validate
from .errors import BudgetExceeded, ParseError

BUNDLED_GROUPS = ("z2", "z4", "z2xz2", "z6", "s3", "d4", "q8", "a4")


@dataclass
class CorpusEntry:
    id: str
    kind: str
    order: int
    source: str
    table: np.ndarray
    divisions: dict = field(default_factory=dict)
    ideals: dict = field(default_factory=dict)
    _algebra: TableAlgebra | None = field(default=None, repr=False, compare=False)

    def algebra(self) -> TableAlgebra:
        if self._algebra is None:
            raw = {"mul": self.table, **self.divisions}
            self._algebra = validate(self.kind, raw, name=self.id)
        return self._algebra

    def release(self) -> None:
        """Drop the memoised algebra and everything cached on it."""
        self._algebra = None


def parse_table(text: str, id: str = "<input>", source: str = "file") -> CorpusEntry:
    """Parse the Cayley-table text format (see module docstring)."""
    header = None
    sections: dict[str, list] = {"mul": []}
    current = "mul"
    ideals: dict[str, list[int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if raw.lstrip().startswith("#!"):
            _parse_directive(raw.lstrip()[2:], lineno, ideals)
            continue
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if header is None:
            parts = line.split()
            if len(parts) != 2:
                raise ParseError("header must be '<kind> <order>'", lineno, 1)
            kind, order = parts
            if kind not in ("group", "loop"):
                raise ParseError(f"unknown kind {kind!r}", lineno, 1)
            try:
                n = int(order)
            except ValueError:
                raise ParseError(f"order {order!r} is not an integer", lineno, raw.index(order) + 1) from None
            if n < 1:
                raise ParseError("order must be positive", lineno, raw.index(order) + 1)
            header = (kind, n)
            continue
        if line.startswith("%"):
            name = line[1:].strip()
            if name not in ("ldiv", "rdiv"):
                raise ParseError(f"unknown section {name!r}", lineno, raw.index("%") + 1)
            if name in sections:
                raise ParseError(f"duplicate section {name!r}", lineno, 1)
            current = name
            sections[current] = []
            continue
        row = []
        col = 0
        for tok in line.split():
            col = raw.index(tok, col)
            try:
                row.append(int(tok))
            except ValueError:
                raise ParseError(f"entry {tok!r} is not an integer", lineno, col + 1) from None
            if not 0 <= row[-1] < header[1]:
                raise ParseError(f"entry {tok} outside 0..{header[1] - 1}", lineno, col + 1)
            col += len(tok)
        if len(row) != header[1]:
            raise ParseError(f"row has {len(row)} entries, expected {header[1]}", lineno, 1)
        if len(sections[current]) == header[1]:
            raise ParseError(f"too many rows in section {current!r}", lineno, 1)
        sections[current].append(row)
    if header is None:
        raise ParseError("empty table file")
    kind, n = header
    for name, rows in sections.items():
        if len(rows) != n:
            raise ParseError(f"section {name!r} has {len(rows)} rows, expected {n}")
    table = np.array(sections.pop("mul"), dtype=np.int64)
    divisions = {k: np.array(v, dtype=np.int64) for k, v in sections.items()}
    return CorpusEntry(id, kind, n, source, table, divisions, ideals)


def _parse_directive(body: str, lineno: int, ideals: dict) -> None:
    parts = body.strip().split(None, 1)
    if not parts or parts[0] != "ideal" or len(parts) < 2 or ":" not in parts[1]:
        raise ParseError("directive must read '#! ideal NAME: g1,g2,...'", lineno, 1)
    name, gens = parts[1].split(":", 1)
    try:
        ideals[name.strip()] = [int(g) for g in gens.replace(",", " ").split()]
    except ValueError:
        raise ParseError("ideal generators must be integers", lineno, 1) from None


def format_table(kind: str, mul, ideals: dict | None = None, comment: str | None = None) -> str:
    mul = np.asarray(mul)
    lines = []
    if comment:
        lines += [f"# {c}" for c in comment.splitlines()]
    lines.append(f"{kind} {mul.shape[0]}")
    lines += [" ".join(str(int(v)) for v in row) for row in mul]
    for name, gens in (ideals or {}).items():
        lines.append(f"#! ideal {name}: {','.join(str(g) for g in gens)}")
    return "\n".join(lines) + "\n"


def load(path) -> CorpusEntry:
    """Load a table file; bare bundled names such as ``s3`` or ``s3.tbl`` also resolve.

    Bundled names give a private copy, so results cached by earlier calls in the
    same process never leak into this one.
    """
    p = Path(path)
    if p.exists():
        entry = parse_table(p.read_text(), id=p.stem, source="file")
    else:
        entry = replace(bundled(p.name), _algebra=None)
    entry.algebra()
    return entry


def bundled(name: str) -> CorpusEntry:
    """A bundled table by name; repeated calls share one entry (and one algebra)."""
    stem = name[:-4] if name.endswith(".tbl") else name
    return _bundled(stem.lower())


@lru_cache(maxsize=None)
def _bundled(stem: str) -> CorpusEntry:
    res = resources.files("relcomm").joinpath("data", f"{stem}.tbl")
    if not res.is_file():
        raise FileNotFoundError(f"no such table file or bundled algebra: {stem}")
    return parse_table(res.read_text(), id=stem, source="bundled")


def bundled_groups() -> list[CorpusEntry]:
    return [bundled(n) for n in BUNDLED_GROUPS]


# ---------------------------------------------------------------------------
# Constructions used to produce the bundled tables


def cyclic(n: int) -> np.ndarray:
    e = np.arange(n)
    return (e[:, None] + e[None, :]) % n


def direct_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Pairs ``(i, j)`` are numbered ``i * |b| + j``."""
    na, nb = a.shape[0], b.shape[0]
    i = np.arange(na * nb)
    x, y = i // nb, i % nb
    return a[x[:, None], x[None, :]] * nb + b[y[:, None], y[None, :]]


def permutation_group(perms: list[tuple]) -> np.ndarray:
    """Table of a list of permutations (identity first) under ``(p*q)(i) = p(q(i))``."""
    index = {p: k for k, p in enumerate(perms)}
    n = len(perms)
    table = np.empty((n, n), dtype=np.int64)
    for a, p in enumerate(perms):
        for b, q in enumerate(perms):
            table[a, b] = index[tuple(p[q[i]] for i in range(len(q)))]
    return table


def dihedral(n: int) -> np.ndarray:
    """``r^i s^j`` numbered ``i + n j`` with ``s r = r^-1 s``."""
    size = 2 * n
    table = np.empty((size, size), dtype=np.int64)
    for a in range(size):
        i, j = a % n, a // n
        for b in range(size):
            k, l = b % n, b // n
            # r^i s^j r^k s^l = r^(i + (-1)^j k) s^(j+l)
            table[a, b] = (i + (k if j == 0 else -k)) % n + n * ((j + l) % 2)
    return table


def quaternion() -> np.ndarray:
    """Elements ``1, -1, i, -i, j, -j, k, -k`` in that order."""
    basis = ["1", "i", "j", "k"]
    mult = {("1", x): (1, x) for x in basis}
    mult.update({(x, "1"): (1, x) for x in basis})
    mult.update({
        ("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
        ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
        ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j"),
    })
    elems = [(1, "1"), (-1, "1"), (1, "i"), (-1, "i"), (1, "j"), (-1, "j"), (1, "k"), (-1, "k")]
    index = {e: n for n, e in enumerate(elems)}
    table = np.empty((8, 8), dtype=np.int64)
    for a, (sa, xa) in enumerate(elems):
        for b, (sb, xb) in enumerate(elems):
            s, x = mult[(xa, xb)]
            table[a, b] = index[(sa * sb * s, x)]
    return table


def alternating4() -> np.ndarray:
    perms = [p for p in itertools.permutations(range(4)) if _is_even(p)]
    return permutation_group(perms)


def _is_even(p) -> bool:
    inversions = sum(1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j])
    return inversions % 2 == 0


def symmetric3() -> np.ndarray:
    """``r^i s^j`` numbered ``i + 3 j`` (so 1 = r, 2 = r^2, 3 = s) with ``r s = s r^2``."""
    return dihedral(3)


# ---------------------------------------------------------------------------
# Loop enumeration


MAX_LOOP_ORDER = 6


@lru_cache(maxsize=None)
def _reduced_latin_squares(n: int) -> tuple:
    if n == 1:
        return (np.zeros((1, 1), dtype=np.int64),)
    grid = [[0] * n for _ in range(n)]
    for i in range(n):
        grid[0][i] = i
        grid[i][0] = i
    full = (1 << n) - 1
    row_used = [(1 << i) for i in range(n)]
    col_used = [(1 << j) for j in range(n)]
    row_used[0] = full
    col_used[0] = full
    cells = [(i, j) for i in range(1, n) for j in range(1, n)]
    out = []

    def fill(k):
        if k == len(cells):
            out.append(np.array(grid, dtype=np.int64))
            return
        i, j = cells[k]
        free = full & ~(row_used[i] | col_used[j])
        while free:
            bit = free & -free
            free ^= bit
            v = bit.bit_length() - 1
            grid[i][j] = v
            row_used[i] |= bit
            col_used[j] |= bit
            fill(k + 1)
            row_used[i] ^= bit
            col_used[j] ^= bit

    fill(0)
    return tuple(out)


def gen_loops(order: int) -> list[CorpusEntry]:
    """All loop tables of the given order in reduced form (row and column 0 are the identity).

    Reduced Latin squares are not reduced up to isomorphism, so isomorphic
    loops appear several times. Results are cached for the session.
    """
    if order < 1:
        raise ValueError("order must be positive")
    if order > MAX_LOOP_ORDER:
        raise BudgetExceeded(2, _reduced_count_estimate(order), None)
    return [
        CorpusEntry(f"loop{order}-{i:04d}", "loop", order, "generated", sq)
        for i, sq in enumerate(_reduced_latin_squares(order))
    ]


def _reduced_count_estimate(order: int) -> int:
    known = {7: 16_942_080, 8: 535_281_401_856}
    return known.get(order, 10**12)


@lru_cache(maxsize=None)
def _loops_cached(max_order: int) -> tuple:
    return tuple(e for n in range(1, max_order + 1) for e in gen_loops(n))


def corpus_loops(max_order: int = MAX_LOOP_ORDER) -> list[CorpusEntry]:
    """Generated loops of every order up to ``max_order`` (cached)."""
    return list(_loops_cached(max_order))
