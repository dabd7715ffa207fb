"""The two worked systems (MAN (6,4) with t=2, and the 3-(8,4,1) design with a=(1,2)).

``render`` produces the deterministic text that ``hpcc demo`` compares with the
golden files shipped in ``data/golden``.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from hotplug_cc.analysis import format_fraction, proposed_point
from hotplug_cc.designs import load_design, shipped_design_path
from hotplug_cc.hppda import HpPda, find_zeta, format_bundle, man_hppda, tdesign_hppda
from hotplug_cc.pda import format_array
from hotplug_cc.scheme import format_report, simulate


@dataclass(frozen=True)
class WorkedExample:
    name: str
    h: HpPda
    N: int
    tau: tuple[int, ...]
    demands: tuple[int, ...]
    seed: int = 0


def example_man() -> WorkedExample:
    return WorkedExample("example1", man_hppda(6, 4, 2), N=6, tau=(1, 4, 5, 6), demands=(2, 3, 1, 5))


def example_tdesign() -> WorkedExample:
    d = load_design(shipped_design_path())
    return WorkedExample("example2", tdesign_hppda(d, (1, 2)), N=6, tau=(2, 6, 8), demands=(1, 3, 4))


def all_examples() -> list[WorkedExample]:
    return [example_man(), example_tdesign()]


def render(ex: WorkedExample) -> str:
    h = ex.h
    match = find_zeta(h, ex.tau)
    report = simulate(h, ex.N, ex.tau, ex.demands, seed=ex.seed)
    point = proposed_point(h)
    out = [f"# {ex.name}", "## bundle", format_bundle(h).rstrip("\n"), "## caches"]
    for k in range(1, h.params.K + 1):
        out.append(f"Z_{k}: " + ",".join(map(str, h.P.star_rows(k))))
    out.append("## delivery")
    out.append("zeta=" + ",".join(map(str, match.zeta)))
    out.append(format_array(match.b_bar).rstrip("\n"))
    for x in report.sent:
        terms = " + ".join(f"C_{{{t.file},{t.row}}}" for t in sorted(x.terms, key=lambda t: t.user))
        out.append(f"X_{x.label} = {terms}")
    out.append("## report")
    out.append(format_report(report).rstrip("\n"))
    out.append(f"M/N={format_fraction(point.m_over_n)} R={format_fraction(point.rate)}")
    return "\n".join(out) + "\n"


def golden_path(name: str) -> Path:
    return Path(str(resources.files("hotplug_cc").joinpath("data", "golden", f"{name}.txt")))
