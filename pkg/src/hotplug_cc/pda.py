"""Placement delivery arrays.

A cell is ``STAR``, ``NULL`` (``None``) or a positive ``int``. Row and column
numbers in the public API are 1-based to match the usual ``[n] = {1..n}``
notation; the grids themselves are plain 0-based tuples.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterable, Sequence, Union

__all__ = [
    "NULL",
    "STAR",
    "Cell",
    "Pda",
    "PdaError",
    "PdaReport",
    "StarArray",
    "format_array",
    "man_pda",
    "parse_array",
    "star_pattern",
    "strip_to_stars",
    "subset_rank",
    "verify_pda",
]

STAR = "*"
NULL = None

Cell = Union[str, int, None]
Grid = tuple[tuple[Cell, ...], ...]


class PdaError(ValueError):
    pass


def _check_cell(cell: Cell) -> None:
    if cell is NULL or cell == STAR:
        return
    if isinstance(cell, bool) or not isinstance(cell, int) or cell < 1:
        raise PdaError(f"invalid cell {cell!r}")


def _freeze(cells: Iterable[Iterable[Cell]]) -> Grid:
    grid = tuple(tuple(STAR if c == STAR else c for c in row) for row in cells)
    if not grid or not grid[0]:
        raise PdaError("array must be non-empty")
    width = len(grid[0])
    for r, row in enumerate(grid, start=1):
        if len(row) != width:
            raise PdaError(f"row {r} has {len(row)} cells, expected {width}")
        for c in row:
            _check_cell(c)
    return grid


class _Array:
    cells: Grid

    @property
    def n_rows(self) -> int:
        return len(self.cells)

    @property
    def n_cols(self) -> int:
        return len(self.cells[0])

    def cell(self, row: int, col: int) -> Cell:
        if not (1 <= row <= self.n_rows and 1 <= col <= self.n_cols):
            raise IndexError(f"cell ({row}, {col}) outside {self.n_rows}x{self.n_cols}")
        return self.cells[row - 1][col - 1]

    def column_star_counts(self) -> list[int]:
        return [
            sum(1 for row in self.cells if row[c] == STAR) for c in range(self.n_cols)
        ]

    def star_rows(self, col: int) -> list[int]:
        """1-based rows holding a star in column ``col``."""
        return [r for r in range(1, self.n_rows + 1) if self.cells[r - 1][col - 1] == STAR]


@dataclass(frozen=True)
class StarArray(_Array):
    """Star/null array, each column carrying the same number of stars."""

    cells: Grid

    def __post_init__(self) -> None:
        object.__setattr__(self, "cells", _freeze(self.cells))
        for row in self.cells:
            if any(c is not NULL and c != STAR for c in row):
                raise PdaError("a star array holds only '*' and null cells")

    @property
    def Z(self) -> int:
        counts = set(self.column_star_counts())
        if len(counts) != 1:
            raise PdaError(f"columns carry unequal star counts {sorted(counts)}")
        return counts.pop()


@dataclass(frozen=True)
class Pda(_Array):
    """An F x K array of stars and integers.

    Construction only checks the cell alphabet; use :func:`verify_pda` for the
    PDA conditions.
    """

    cells: Grid

    def __post_init__(self) -> None:
        object.__setattr__(self, "cells", _freeze(self.cells))

    @property
    def S(self) -> int:
        return max((c for row in self.cells for c in row if isinstance(c, int)), default=0)

    @property
    def Z(self) -> int:
        counts = set(self.column_star_counts())
        if len(counts) != 1:
            raise PdaError(f"columns carry unequal star counts {sorted(counts)}")
        return counts.pop()

    def occurrences(self) -> dict[int, list[tuple[int, int]]]:
        """Map each integer to its 1-based (row, col) cells in row-major order."""
        where: dict[int, list[tuple[int, int]]] = defaultdict(list)
        for r, row in enumerate(self.cells, start=1):
            for c, cell in enumerate(row, start=1):
                if isinstance(cell, int):
                    where[cell].append((r, c))
        return dict(where)


@dataclass
class PdaReport:
    valid: bool
    K: int
    F: int
    Z: int | None
    S: int
    regularity: int | None = None
    reason: str = ""
    witness: tuple[tuple[int, int], ...] = ()


def verify_pda(a: Pda | Sequence[Sequence[Cell]]) -> PdaReport:
    """Check the three PDA conditions.

    C1 uniform star count per column, C2 every integer in ``1..S`` present,
    C3 equal integers sit in distinct rows/columns with stars on the opposite
    corners of their 2x2 sub-array. C3 is checked pairwise per integer, so the
    cost is quadratic in each integer's multiplicity.
    """
    pda = a if isinstance(a, Pda) else Pda(tuple(map(tuple, a)))
    F, K = pda.n_rows, pda.n_cols
    S = pda.S
    counts = pda.column_star_counts()
    Z = counts[0] if len(set(counts)) == 1 else None
    report = PdaReport(valid=False, K=K, F=F, Z=Z, S=S)

    if Z is None:
        col = next(c for c in range(1, K) if counts[c] != counts[0]) + 1
        report.reason = f"C1: column 1 has {counts[0]} stars but column {col} has {counts[col - 1]}"
        return report

    where = pda.occurrences()
    for s in range(1, S + 1):
        if s not in where:
            report.reason = f"C2: integer {s} does not occur"
            return report

    for s in range(1, S + 1):
        for (r1, c1), (r2, c2) in combinations(where[s], 2):
            if r1 == r2 or c1 == c2:
                report.reason = f"C3: integer {s} repeated in a row or column"
                report.witness = ((r1, c1), (r2, c2))
                return report
            if pda.cell(r1, c2) != STAR or pda.cell(r2, c1) != STAR:
                report.reason = f"C3: integer {s} lacks stars on the opposite corners"
                report.witness = ((r1, c1), (r2, c2))
                return report

    sizes = {len(v) for v in where.values()}
    report.regularity = sizes.pop() if len(sizes) == 1 else None
    report.valid = True
    return report


def subset_rank(subset: Iterable[int], universe: int) -> int:
    """1-based lexicographic rank of a subset among same-size subsets of ``[universe]``."""
    items = sorted(subset)
    size = len(items)
    rank = 0
    prev = 0
    for pos, x in enumerate(items):
        for y in range(prev + 1, x):
            rank += comb(universe - y, size - pos - 1)
        prev = x
    return rank + 1


def man_pda(n_users: int, t: int) -> Pda:
    """The MAN PDA for ``n_users`` users and integer parameter ``t``.

    Rows are the t-subsets of users in lexicographic order; cell (T, k) is a
    star when k is in T and otherwise the rank of ``T | {k}`` among the
    (t+1)-subsets.
    """
    if not 1 <= t <= n_users - 1:
        raise PdaError(f"t must lie in 1..{n_users - 1}, got {t}")
    rows = []
    for T in combinations(range(1, n_users + 1), t):
        members = set(T)
        rows.append(
            tuple(
                STAR if k in members else subset_rank(members | {k}, n_users)
                for k in range(1, n_users + 1)
            )
        )
    return Pda(tuple(rows))


def strip_to_stars(p: Pda | StarArray) -> StarArray:
    return StarArray(tuple(tuple(STAR if c == STAR else NULL for c in row) for row in p.cells))


def star_pattern(a: _Array, row: int, cols: Sequence[int]) -> frozenset[int]:
    """Positions ``j`` (1-based, into ``cols``) where ``a[row, cols[j]]`` is a star."""
    return frozenset(j for j, col in enumerate(cols, start=1) if a.cell(row, col) == STAR)


def _format_cell(cell: Cell) -> str:
    if cell == STAR:
        return "*"
    if cell is NULL:
        return "-"
    return str(cell)


def format_array(a: _Array) -> str:
    """Serialize as comma-separated rows: '*' star, '-' null, digits for integers."""
    return "\n".join(",".join(_format_cell(c) for c in row) for row in a.cells) + "\n"


def _parse_cell(tok: str, lineno: int) -> Cell:
    tok = tok.strip()
    if tok == "*":
        return STAR
    if tok == "-":
        return NULL
    try:
        value = int(tok)
    except ValueError:
        raise PdaError(f"line {lineno}: bad cell {tok!r}") from None
    if value < 1:
        raise PdaError(f"line {lineno}: integers must be positive, got {value}")
    return value


def parse_array(text: str) -> Grid:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        rows.append(tuple(_parse_cell(tok, lineno) for tok in raw.split(",")))
    return _freeze(rows)
