"""Hotplug coded caching schemes built from placement delivery arrays."""

from hotplug_cc.analysis import (
    RatePoint,
    converse_bound,
    lower_envelope,
    proposed_point,
    sweep,
    theorem1_point,
)
from hotplug_cc.designs import Design, load_design, parse_design, verify_design
from hotplug_cc.gf_mds import GaloisField, RsCodec, make_codec
from hotplug_cc.hppda import (
    HpPda,
    HpPdaParams,
    find_zeta,
    man_hppda,
    tdesign_hppda,
    verify_hppda,
)
from hotplug_cc.pda import NULL, STAR, Pda, StarArray, man_pda, verify_pda
from hotplug_cc.scheme import simulate

__version__ = "0.1.0"

__all__ = [
    "NULL",
    "STAR",
    "Design",
    "GaloisField",
    "HpPda",
    "HpPdaParams",
    "Pda",
    "RatePoint",
    "RsCodec",
    "StarArray",
    "converse_bound",
    "find_zeta",
    "load_design",
    "lower_envelope",
    "make_codec",
    "man_hppda",
    "man_pda",
    "parse_design",
    "proposed_point",
    "simulate",
    "sweep",
    "tdesign_hppda",
    "theorem1_point",
    "verify_design",
    "verify_hppda",
]
