"""Rate-memory points, the converse bound and lower convex envelopes.

Scheme points are exact ``Fraction`` pairs ``(M/N, R)``. Only the converse
bound is evaluated in floating point, because it is maximised over a grid of
the auxiliary parameter alpha.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence, Union

import numpy as np

from hotplug_cc.hppda import HpPda, HpPdaParams

__all__ = [
    "BoundCurve",
    "Envelope",
    "RatePoint",
    "bound_curve",
    "converse_bound",
    "format_fraction",
    "lower_envelope",
    "proposed_point",
    "sweep",
    "theorem1_point",
]

log = logging.getLogger(__name__)

DEFAULT_ALPHA_STEP = 1e-3

HasParams = Union[HpPda, HpPdaParams]


@dataclass(frozen=True)
class RatePoint:
    m_over_n: Fraction
    rate: Fraction
    label: str = "custom"

    def __post_init__(self) -> None:
        if not 0 <= self.m_over_n <= 1:
            raise ValueError(f"M/N={self.m_over_n} outside [0, 1]")
        if self.rate < 0:
            raise ValueError(f"negative rate {self.rate}")


def _params(h: HasParams) -> HpPdaParams:
    return h.params if isinstance(h, HpPda) else h


def proposed_point(h: HasParams) -> RatePoint:
    """``(Z, S) / (F' - Z' + Z)``: the point reached with MDS-coded placement."""
    p = _params(h)
    sub = p.subpacketization
    return RatePoint(Fraction(p.Z, sub), Fraction(p.S, sub), "proposed")


def theorem1_point(h: HasParams) -> RatePoint:
    """``(Z, S) / F'``: the uncoded-placement point of the same HpPDA.

    Only meaningful for M < N, so HpPDAs with Z >= F' are rejected.
    """
    p = _params(h)
    if p.Z >= p.Fp:
        raise ValueError(f"Z={p.Z} >= F'={p.Fp}: point would need M >= N")
    return RatePoint(Fraction(p.Z, p.Fp), Fraction(p.S, p.Fp), "theorem1")


def _alpha_denominator(alpha_step: float) -> int:
    if alpha_step <= 0:
        raise ValueError("alpha_step must be positive")
    D = round(1 / alpha_step)
    if D < 1 or abs(D * alpha_step - 1) > 1e-9:
        raise ValueError(f"alpha_step={alpha_step} must be 1/D for an integer D")
    return D


def converse_bound(N: int, Kp: int, M: float, alpha_step: float = DEFAULT_ALPHA_STEP) -> float:
    """Lower bound on R for N files, K' users and memory M (in files).

    Maximum over s in 1..min(N, K') and alpha on the grid ``0, step, ..., 1``
    of ``s - 1 + alpha - (s(s-1) - l(l-1) + 2 alpha s) M / (2 (N - l + 1))``,
    where l is the least value in 1..s with
    ``(s(s-1) - l(l-1)) / 2 + alpha s <= (N - l + 1) l``. Clamped at 0.

    Alpha is written as j/D and every comparison is carried out on integers,
    so the grid itself introduces no rounding; the result under-approximates
    the continuous maximum by at most the grid step times the slope in alpha.
    """
    if not 0 <= M <= N:
        raise ValueError(f"M={M} outside [0, {N}]")
    D = _alpha_denominator(alpha_step)
    j = np.arange(D + 1, dtype=np.int64)
    M = float(M)
    best = 0.0
    for s in range(1, min(N, Kp) + 1):
        ell = np.full(j.shape, s, dtype=np.int64)
        for cand in range(s - 1, 0, -1):
            feasible = D * (s * (s - 1) - cand * (cand - 1)) + 2 * j * s <= 2 * D * (N - cand + 1) * cand
            ell = np.where(feasible, cand, ell)
        head = 2 * (N - ell + 1) * ((s - 1) * D + j)
        slope = D * (s * (s - 1) - ell * (ell - 1)) + 2 * j * s
        value = (head - slope * M) / (2 * D * (N - ell + 1))
        best = max(best, float(value.max()))
    return best


@dataclass(frozen=True)
class BoundCurve:
    N: int
    Kp: int
    samples: tuple[tuple[float, float], ...]


def bound_curve(
    N: int, Kp: int, n_samples: int = 101, alpha_step: float = DEFAULT_ALPHA_STEP
) -> BoundCurve:
    ms = np.linspace(0.0, N, n_samples)
    ms[-1] = N
    return BoundCurve(N, Kp, tuple((float(m), converse_bound(N, Kp, m, alpha_step)) for m in ms))


@dataclass(frozen=True)
class Envelope:
    """Piecewise-linear curve through ``vertices`` (sorted by M/N)."""

    vertices: tuple[RatePoint, ...]

    def __call__(self, m_over_n: Fraction | float) -> Fraction | float:
        vs = self.vertices
        if m_over_n <= vs[0].m_over_n:
            return vs[0].rate
        if m_over_n >= vs[-1].m_over_n:
            return vs[-1].rate
        for a, b in zip(vs, vs[1:]):
            if a.m_over_n <= m_over_n <= b.m_over_n:
                w = (m_over_n - a.m_over_n) / (b.m_over_n - a.m_over_n)
                return a.rate + w * (b.rate - a.rate)
        raise AssertionError("unreachable")

    def slopes(self) -> list[Fraction]:
        return [
            (b.rate - a.rate) / (b.m_over_n - a.m_over_n)
            for a, b in zip(self.vertices, self.vertices[1:])
        ]


def _cross(o: RatePoint, a: RatePoint, b: RatePoint) -> Fraction:
    return (a.m_over_n - o.m_over_n) * (b.rate - o.rate) - (a.rate - o.rate) * (b.m_over_n - o.m_over_n)


def lower_envelope(
    points: Iterable[RatePoint],
    include_endpoints: bool = False,
    N: int | None = None,
    Kp: int | None = None,
) -> Envelope:
    """Lower convex hull of the points in the (M/N, R) plane.

    With ``include_endpoints`` the trivially achievable ``(0, min(N, K'))``
    and ``(1, 0)`` are added first; that needs ``N`` and ``Kp``.
    Collinear interior points are dropped.
    """
    pts = list(points)
    if include_endpoints:
        if N is None or Kp is None:
            raise ValueError("include_endpoints needs N and Kp")
        pts += [RatePoint(Fraction(0), Fraction(min(N, Kp)), "anchor"), RatePoint(Fraction(1), Fraction(0), "anchor")]
    if not pts:
        raise ValueError("no points to envelope")
    best: dict[Fraction, RatePoint] = {}
    for p in pts:
        if p.m_over_n not in best or p.rate < best[p.m_over_n].rate:
            best[p.m_over_n] = p
    hull: list[RatePoint] = []
    for p in sorted(best.values(), key=lambda q: q.m_over_n):
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], p) <= 0:
            hull.pop()
        hull.append(p)
    return Envelope(tuple(hull))


def format_fraction(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def sweep(
    family: Sequence[HasParams],
    N: int,
    out: str | Path,
    Kp: int | None = None,
    bound_samples: int = 101,
    alpha_step: float = DEFAULT_ALPHA_STEP,
) -> list[RatePoint]:
    """Write scheme points and sampled bound values to ``out`` as ``scheme,M,R``.

    M is in files (``N * M/N``). Exact scheme points also go to a sidecar
    ``<stem>.exact.csv`` with ``p/q`` strings. Returns the scheme points.
    """
    params = [_params(h) for h in family]
    if not params:
        raise ValueError("empty HpPDA family")
    shapes = {(p.K, p.Kp) for p in params}
    if len(shapes) != 1:
        raise ValueError(f"family mixes (K, K') values {sorted(shapes)}")
    family_kp = params[0].Kp
    if Kp is not None and Kp != family_kp:
        raise ValueError(f"K'={Kp} does not match the family's K'={family_kp}")

    points = [proposed_point(p) for p in params]
    for p in params:
        try:
            points.append(theorem1_point(p))
        except ValueError as exc:
            log.info("skipping theorem1 point for (%s): %s", p, exc)

    out = Path(out)
    with out.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["scheme", "M", "R"])
        for pt in points:
            writer.writerow([pt.label, f"{float(N * pt.m_over_n):.6f}", f"{float(pt.rate):.6f}"])
        for m, r in bound_curve(N, family_kp, bound_samples, alpha_step).samples:
            writer.writerow(["converse", f"{m:.6f}", f"{r:.6f}"])

    exact = out.with_name(out.stem + ".exact.csv")
    with exact.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["scheme", "M", "R"])
        for pt in points:
            writer.writerow([pt.label, format_fraction(N * pt.m_over_n), format_fraction(pt.rate)])
    return points
