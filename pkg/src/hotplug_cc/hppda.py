"""Hotplug placement delivery arrays (P, B).

``P`` is an F x K star/null array for all users; ``B`` is an F' x K' PDA for the
active users. For every active set ``tau`` some F' rows of ``P`` restricted to
``tau`` carry exactly the star layout of ``B``; :func:`find_zeta` picks those
rows deterministically.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

from hotplug_cc.designs import Design, lambda_exact, lambda_s, verify_design
from hotplug_cc.pda import (
    NULL,
    STAR,
    Pda,
    PdaError,
    StarArray,
    format_array,
    man_pda,
    parse_array,
    star_pattern,
    strip_to_stars,
    verify_pda,
)

__all__ = [
    "AUTO_EXHAUSTIVE_LIMIT",
    "HpPda",
    "HpPdaError",
    "HpPdaParams",
    "HpPdaReport",
    "NotHotplugError",
    "ZetaMatch",
    "find_zeta",
    "format_bundle",
    "man_hppda",
    "man_hppda_params",
    "parse_bundle",
    "tdesign_hppda",
    "tdesign_hppda_params",
    "verify_hppda",
]

AUTO_EXHAUSTIVE_LIMIT = 100_000
DEFAULT_SAMPLE_COUNT = 1000
DEFAULT_SAMPLE_SEED = 20240101


class HpPdaError(ValueError):
    pass


class NotHotplugError(HpPdaError):
    """No row selection of P reproduces B for some active set."""


@dataclass(frozen=True)
class HpPdaParams:
    """The tuple (K, K', F, F', Z, Z', S)."""

    K: int
    Kp: int
    F: int
    Fp: int
    Z: int
    Zp: int
    S: int

    def __post_init__(self) -> None:
        if self.K < self.Kp:
            raise HpPdaError(f"K' must not exceed K (K={self.K}, K'={self.Kp})")
        if self.F < self.Fp:
            raise HpPdaError(f"F' must not exceed F (F={self.F}, F'={self.Fp})")
        if self.Zp > self.Fp:
            raise HpPdaError(f"Z'={self.Zp} exceeds F'={self.Fp}")

    @property
    def subpacketization(self) -> int:
        """Number of message subfiles per file, F' - Z' + Z."""
        return self.Fp - self.Zp + self.Z

    def as_tuple(self) -> tuple[int, ...]:
        return (self.K, self.Kp, self.F, self.Fp, self.Z, self.Zp, self.S)

    def __str__(self) -> str:
        return " ".join(map(str, self.as_tuple()))


@dataclass(frozen=True)
class HpPda:
    P: StarArray
    B: Pda
    params: HpPdaParams

    def __post_init__(self) -> None:
        p = self.params
        if (self.P.n_rows, self.P.n_cols) != (p.F, p.K):
            raise HpPdaError(f"P is {self.P.n_rows}x{self.P.n_cols}, expected {p.F}x{p.K}")
        if (self.B.n_rows, self.B.n_cols) != (p.Fp, p.Kp):
            raise HpPdaError(f"B is {self.B.n_rows}x{self.B.n_cols}, expected {p.Fp}x{p.Kp}")


@dataclass(frozen=True)
class ZetaMatch:
    """Rows of P aligned with the rows of B for one active set.

    ``zeta[r]`` is the 1-based row of P matched to row ``r + 1`` of B, and
    ``b_bar`` is the filled sub-array of P on (zeta, tau), equal to B.
    """

    tau: tuple[int, ...]
    zeta: tuple[int, ...]
    b_bar: Pda


def man_hppda_params(K: int, Kp: int, t: int) -> HpPdaParams:
    if not Kp < K:
        raise HpPdaError("K' must be less than K")
    if not 1 <= t <= Kp:
        raise HpPdaError(f"t must lie in 1..{Kp}, got {t}")
    return HpPdaParams(
        K=K,
        Kp=Kp,
        F=comb(K, t),
        Fp=comb(Kp, t),
        Z=comb(K - 1, t - 1),
        Zp=comb(Kp - 1, t - 1),
        S=comb(Kp, t + 1),
    )


def man_hppda(K: int, Kp: int, t: int) -> HpPda:
    """MAN hotplug PDA: B is the MAN PDA for K' users, P the star pattern of the one for K."""
    params = man_hppda_params(K, Kp, t)
    # t == K' leaves a single all-star row in B and no transmissions
    B = man_pda(Kp, t) if t < Kp else Pda(((STAR,) * Kp,))
    P = strip_to_stars(man_pda(K, t))
    return HpPda(P=P, B=B, params=params)


def tdesign_hppda_params(d: Design, a: Sequence[int]) -> HpPdaParams:
    t = d.t
    a = list(a)
    if len(a) != t - 1:
        raise HpPdaError(f"expected {t - 1} values a_1..a_{t - 1}, got {len(a)}")
    if not any(a):
        raise HpPdaError("at least one a_s must be positive")
    for s, a_s in enumerate(a, start=1):
        limit = lambda_exact(d, s)
        if not 0 <= a_s <= limit:
            raise HpPdaError(f"a_{s}={a_s} outside 0..{limit} (lambda_{s}^t)")
    return HpPdaParams(
        K=d.v,
        Kp=t,
        F=d.b,
        Fp=sum(a_s * comb(t, s) for s, a_s in enumerate(a, start=1)),
        Z=lambda_s(d, 1),
        Zp=sum(a_s * comb(t - 1, s - 1) for s, a_s in enumerate(a, start=1)),
        S=sum(a_s * comb(t, s + 1) for s, a_s in enumerate(a, start=1)),
    )


def tdesign_hppda(d: Design, a: Sequence[int]) -> HpPda:
    """Hotplug PDA from a t-design and multiplicities ``a = (a_1, ..., a_{t-1})``.

    P has a row per block (file order) and a column per point. B has a row per
    pair (Y, i) with Y a proper non-empty subset of [t] and i in 1..a_|Y|,
    ordered by |Y| descending, then i, then Y lexicographically. Integer labels
    number the pairs (Y', i) with |Y'| >= 2 by |Y'| descending, then Y', then i.
    """
    report = verify_design(d)
    if not report.valid:
        raise HpPdaError(f"not a {d.t}-design: {len(report.violations)} t-subsets miscounted")
    params = tdesign_hppda_params(d, a)
    t = d.t
    a_of = dict(enumerate(a, start=1))

    labels: dict[tuple[tuple[int, ...], int], int] = {}
    for size in range(t, 1, -1):
        for Yp in combinations(range(1, t + 1), size):
            for i in range(1, a_of[size - 1] + 1):
                labels[(Yp, i)] = len(labels) + 1

    rows = []
    for s in range(t - 1, 0, -1):
        for i in range(1, a_of[s] + 1):
            for Y in combinations(range(1, t + 1), s):
                rows.append(
                    tuple(
                        STAR if j in Y else labels[(tuple(sorted(Y + (j,))), i)]
                        for j in range(1, t + 1)
                    )
                )
    B = Pda(tuple(rows))
    P = StarArray(
        tuple(
            tuple(STAR if pt in block else NULL for pt in d.points) for block in d.blocks
        )
    )
    return HpPda(P=P, B=B, params=params)


def find_zeta(h: HpPda, tau: Iterable[int]) -> ZetaMatch:
    """Match the rows of B to rows of P restricted to the active set ``tau``.

    B's rows are taken top to bottom; each gets the smallest unused row of P
    with the same star positions on ``tau`` (sorted ascending, so the i-th
    active user plays column i of B).
    """
    tau = tuple(sorted(tau))
    K, Kp = h.params.K, h.params.Kp
    if len(tau) != Kp or len(set(tau)) != Kp:
        raise HpPdaError(f"active set must hold {Kp} distinct users, got {list(tau)}")
    if tau[0] < 1 or tau[-1] > K:
        raise HpPdaError(f"active users must lie in 1..{K}, got {list(tau)}")

    candidates: dict[frozenset[int], list[int]] = {}
    for f in range(h.P.n_rows, 0, -1):
        candidates.setdefault(star_pattern(h.P, f, tau), []).append(f)
    cols = tuple(range(1, Kp + 1))
    zeta = []
    for r in range(1, h.B.n_rows + 1):
        pattern = star_pattern(h.B, r, cols)
        pool = candidates.get(pattern)
        if not pool:
            raise NotHotplugError(
                f"not an HpPDA for tau={list(tau)}: no unused row of P matches row {r} of B"
            )
        zeta.append(pool.pop())

    b_bar = Pda(
        tuple(
            tuple(
                h.B.cells[r][c] if h.P.cell(f, k) is NULL else STAR
                for c, k in enumerate(tau)
            )
            for r, f in enumerate(zeta)
        )
    )
    return ZetaMatch(tau=tau, zeta=tuple(zeta), b_bar=b_bar)


@dataclass
class HpPdaReport:
    valid: bool
    mode: str
    checked: int = 0
    reason: str = ""
    witness_tau: tuple[int, ...] | None = None


def verify_hppda(
    h: HpPda,
    mode: str = "auto",
    count: int = DEFAULT_SAMPLE_COUNT,
    seed: int = DEFAULT_SAMPLE_SEED,
) -> HpPdaReport:
    """Check B, the star counts of P, the parameter tuple and the matching for each tau.

    ``mode`` is ``"exhaustive"``, ``"sample"`` (``count`` seeded random active
    sets) or ``"auto"``, which is exhaustive up to ``AUTO_EXHAUSTIVE_LIMIT``
    active sets.
    """
    p = h.params
    n_sets = comb(p.K, p.Kp)
    if mode == "auto":
        mode = "exhaustive" if n_sets <= AUTO_EXHAUSTIVE_LIMIT else "sample"
    if mode not in ("exhaustive", "sample"):
        raise ValueError(f"unknown mode {mode!r}")
    report = HpPdaReport(valid=False, mode=mode)

    b_report = verify_pda(h.B)
    if not b_report.valid:
        report.reason = f"B is not a PDA: {b_report.reason}"
        return report
    if (b_report.K, b_report.F, b_report.Z, b_report.S) != (p.Kp, p.Fp, p.Zp, p.S):
        report.reason = (
            f"B has (K', F', Z', S)=({b_report.K}, {b_report.F}, {b_report.Z}, {b_report.S}),"
            f" header says ({p.Kp}, {p.Fp}, {p.Zp}, {p.S})"
        )
        return report
    counts = h.P.column_star_counts()
    bad = [k for k, c in enumerate(counts, start=1) if c != p.Z]
    if bad:
        report.reason = f"column {bad[0]} of P has {counts[bad[0] - 1]} stars, expected Z={p.Z}"
        return report
    if p.Zp > p.Z:
        report.reason = f"Z'={p.Zp} exceeds Z={p.Z}"
        return report
    if p.subpacketization > p.F:
        report.reason = f"F'-Z'+Z={p.subpacketization} exceeds F={p.F}"
        return report

    if mode == "exhaustive":
        taus: Iterable[tuple[int, ...]] = combinations(range(1, p.K + 1), p.Kp)
    else:
        rng = random.Random(seed)
        taus = (tuple(sorted(rng.sample(range(1, p.K + 1), p.Kp))) for _ in range(count))
    for tau in taus:
        try:
            find_zeta(h, tau)
        except NotHotplugError as exc:
            report.reason = str(exc)
            report.witness_tau = tau
            return report
        report.checked += 1
    report.valid = True
    return report


def format_bundle(h: HpPda) -> str:
    return f"{h.params}\n{format_array(h.P)}---\n{format_array(h.B)}"


def parse_bundle(text: str) -> HpPda:
    """Inverse of :func:`format_bundle`: header, P, a ``---`` line, then B."""
    lines = text.splitlines()
    try:
        sep = next(i for i, line in enumerate(lines) if line.strip() == "---")
    except StopIteration:
        raise HpPdaError("bundle lacks the '---' separator between P and B") from None
    if not lines or not lines[0].strip():
        raise HpPdaError("bundle lacks the header line")
    try:
        header = [int(tok) for tok in lines[0].split()]
    except ValueError:
        raise HpPdaError(f"bad header {lines[0]!r}") from None
    if len(header) != 7:
        raise HpPdaError("header must be 'K K' F F' Z Z' S'")
    try:
        P = StarArray(parse_array("\n".join(lines[1:sep])))
        B = Pda(parse_array("\n".join(lines[sep + 1 :])))
    except PdaError as exc:
        raise HpPdaError(str(exc)) from None
    return HpPda(P=P, B=B, params=HpPdaParams(*header))
