"""Combinatorial t-designs: parsing, exhaustive verification and block counts.

Points are 1-based. Block order is the order of the source file and is kept
as-is, because it fixes the row order of the placement array built from the
design.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from itertools import combinations
from math import comb
from pathlib import Path
from typing import Iterable, Sequence

__all__ = [
    "Design",
    "DesignError",
    "DesignReport",
    "blocks_matching",
    "count_blocks_containing",
    "lambda_exact",
    "lambda_s",
    "load_design",
    "parse_design",
    "serialize_design",
    "shipped_design_path",
    "verify_design",
]


class DesignError(ValueError):
    """Raised for malformed design files or inconsistent design parameters."""


@dataclass(frozen=True)
class Design:
    """A t-(v, k, lambda) design with an ordered block list.

    Each block is stored as a sorted tuple of points in ``1..v``.
    """

    t: int
    v: int
    k_block: int
    lam: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if not (1 <= self.t <= self.k_block <= self.v):
            raise DesignError(
                f"need 1 <= t <= k <= v, got t={self.t} k={self.k_block} v={self.v}"
            )
        if self.lam < 1:
            raise DesignError(f"lambda must be positive, got {self.lam}")
        seen: dict[tuple[int, ...], int] = {}
        for idx, block in enumerate(self.blocks, start=1):
            if len(set(block)) != len(block):
                raise DesignError(f"block {idx}: repeated point in {list(block)}")
            if len(block) != self.k_block:
                raise DesignError(
                    f"block {idx}: expected {self.k_block} points, got {len(block)}"
                )
            for p in block:
                if not 1 <= p <= self.v:
                    raise DesignError(f"block {idx}: point {p} outside 1..{self.v}")
            if tuple(sorted(block)) != block:
                raise DesignError(f"block {idx}: points must be stored sorted")
            if block in seen:
                raise DesignError(f"block {idx} duplicates block {seen[block]}")
            seen[block] = idx

    @classmethod
    def from_blocks(
        cls, t: int, v: int, k_block: int, lam: int, blocks: Iterable[Iterable[int]]
    ) -> "Design":
        return cls(t, v, k_block, lam, tuple(_as_block(b) for b in blocks))

    @property
    def b(self) -> int:
        return len(self.blocks)

    @property
    def points(self) -> range:
        return range(1, self.v + 1)


def _as_block(points: Iterable[int]) -> tuple[int, ...]:
    # duplicates are kept so the Design validator can report them
    return tuple(sorted(points))


def _int_fields(line: str, lineno: int) -> list[int]:
    try:
        return [int(tok) for tok in line.split()]
    except ValueError:
        raise DesignError(f"line {lineno}: expected integers, got {line!r}") from None


def parse_design(text: str) -> Design:
    """Parse the line-oriented design format.

    The first non-comment line is ``t v k lambda``; every later non-empty line
    is one block of ``k`` points. Lines starting with ``#`` are ignored.
    """
    header: list[int] | None = None
    blocks: list[tuple[int, ...]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        values = _int_fields(line, lineno)
        if header is None:
            if len(values) != 4:
                raise DesignError(
                    f"line {lineno}: header must be 't v k lambda', got {line!r}"
                )
            header = values
            continue
        blocks.append(_as_block(values))
    if header is None:
        raise DesignError("missing header line 't v k lambda'")
    t, v, k_block, lam = header
    return Design(t, v, k_block, lam, tuple(blocks))


def serialize_design(d: Design) -> str:
    lines = [f"{d.t} {d.v} {d.k_block} {d.lam}"]
    lines.extend(" ".join(map(str, block)) for block in d.blocks)
    return "\n".join(lines) + "\n"


def load_design(path: str | Path) -> Design:
    return parse_design(Path(path).read_text(encoding="utf-8"))


def shipped_design_path(name: str = "3-8-4-1.txt") -> Path:
    """Path of a design file bundled with the package."""
    return Path(str(resources.files("hotplug_cc").joinpath("data", name)))


@dataclass
class DesignReport:
    valid: bool
    violations: list[tuple[tuple[int, ...], int]] = field(default_factory=list)


def count_blocks_containing(d: Design, subset: Iterable[int]) -> int:
    target = set(subset)
    return sum(1 for block in d.blocks if target.issubset(block))


def verify_design(d: Design) -> DesignReport:
    """Count every t-subset of points and compare against lambda.

    Exhaustive over all C(v, t) subsets; every subset whose count differs from
    lambda is listed together with its actual count.
    """
    counts = {T: 0 for T in combinations(d.points, d.t)}
    for block in d.blocks:
        for T in combinations(block, d.t):
            counts[T] += 1
    violations = [(T, c) for T, c in counts.items() if c != d.lam]
    return DesignReport(valid=not violations, violations=violations)


def _exact_int(value: Fraction, what: str) -> int:
    if value.denominator != 1:
        raise DesignError(f"{what} is not an integer ({value}); parameters are inconsistent")
    return value.numerator


def lambda_s(d: Design, s: int) -> int:
    """Number of blocks containing a fixed s-subset, ``lam*C(v-s,t-s)/C(k-s,t-s)``."""
    if not 0 <= s <= d.t:
        raise ValueError(f"s must lie in 0..{d.t}, got {s}")
    value = Fraction(d.lam * comb(d.v - s, d.t - s), comb(d.k_block - s, d.t - s))
    return _exact_int(value, f"lambda_{s}")


def lambda_exact(d: Design, i: int) -> int:
    """Number of blocks meeting a fixed t-subset T in exactly a fixed i-subset Y.

    Uses the quotient ``lam*C(v-t,k-i)/C(v-t,k-t)``. The test-suite checks it
    against enumeration of ``blocks_matching`` for every (T, Y).
    """
    if not 0 <= i <= d.t:
        raise ValueError(f"i must lie in 0..{d.t}, got {i}")
    value = Fraction(
        d.lam * comb(d.v - d.t, d.k_block - i), comb(d.v - d.t, d.k_block - d.t)
    )
    return _exact_int(value, f"lambda_{i}^t")


def blocks_matching(d: Design, T: Sequence[int], Y: Iterable[int]) -> list[int]:
    """1-based indices (file order) of blocks A with ``A & T == Y``."""
    T_set = set(T)
    Y_set = set(Y)
    if len(T_set) != d.t or len(T_set) != len(T):
        raise ValueError(f"T must hold {d.t} distinct points, got {list(T)}")
    if not Y_set <= T_set:
        raise ValueError(f"Y={sorted(Y_set)} is not a subset of T={sorted(T_set)}")
    return [
        idx
        for idx, block in enumerate(d.blocks, start=1)
        if T_set.intersection(block) == Y_set
    ]
