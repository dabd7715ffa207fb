"""MDS-coded placement and PDA-driven delivery for hotplug coded caching.

Each file is cut into F'-Z'+Z subfiles and encoded into F coded subfiles
``C[n, f]``. User k caches ``C[n, f]`` for every file n whenever ``P[f, k]``
is a star. For an active set the server matches F' rows of P to B and sends
one field sum per integer of B. A user strips the other terms of each sum
using its cache, which leaves F'-Z' new coded subfiles of its file; with the
Z cached ones that is enough to run the MDS decoder.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from hotplug_cc.gf_mds import (
    RsCodec,
    decode_from,
    encode,
    join_subfiles,
    make_codec,
    split_file,
    symbols_to_bytes,
)
from hotplug_cc.hppda import HpPda, ZetaMatch, find_zeta
from hotplug_cc.pda import STAR

__all__ = [
    "CacheContent",
    "DeliveryError",
    "FileLibrary",
    "SimReport",
    "Term",
    "Transmission",
    "UserOutcome",
    "build_library",
    "decode_user",
    "deliver",
    "delivered_rows",
    "demand_vectors",
    "format_report",
    "format_transmissions",
    "generate_files",
    "place",
    "simulate",
    "simulate_all",
]

log = logging.getLogger(__name__)

DEFAULT_BYTES_PER_SUBFILE = 64


class DeliveryError(ValueError):
    pass


@dataclass(frozen=True)
class FileLibrary:
    files: tuple[bytes, ...]
    codec: RsCodec
    coded: tuple[tuple[np.ndarray, ...], ...]

    @property
    def N(self) -> int:
        return len(self.files)

    def coded_subfile(self, n: int, f: int) -> np.ndarray:
        """Coded subfile ``C[n, f]`` (both 1-based)."""
        return self.coded[n - 1][f - 1]


def generate_files(N: int, size: int, seed: int) -> list[bytes]:
    rng = np.random.default_rng(seed)
    return [rng.integers(0, 256, size=size, dtype=np.uint8).tobytes() for _ in range(N)]


def build_library(files: Sequence[bytes], h: HpPda, codec: RsCodec | None = None) -> FileLibrary:
    """Split and encode every file with an [F, F'-Z'+Z] code."""
    if not files:
        raise ValueError("library needs at least one file")
    p = h.params
    if codec is None:
        codec = make_codec(p.F, p.subpacketization)
    elif (codec.n, codec.k) != (p.F, p.subpacketization):
        raise ValueError(
            f"codec is [{codec.n}, {codec.k}], HpPDA needs [{p.F}, {p.subpacketization}]"
        )
    length = max(len(w) for w in files)
    coded = []
    for w in files:
        # pad every file to the longest so all subfiles share one length
        blocks = split_file(w + bytes(length - len(w)), codec.k, codec.field)
        coded.append(tuple(encode(codec, blocks)))
    return FileLibrary(files=tuple(files), codec=codec, coded=tuple(coded))


@dataclass(frozen=True)
class CacheContent:
    user: int
    store: dict[tuple[int, int], np.ndarray]

    @property
    def rows(self) -> frozenset[int]:
        return frozenset(f for _, f in self.store)


def place(h: HpPda, lib: FileLibrary) -> list[CacheContent]:
    p = h.params
    if (lib.codec.n, lib.codec.k) != (p.F, p.subpacketization):
        raise ValueError("library codec does not match the HpPDA")
    caches = []
    for k in range(1, p.K + 1):
        rows = h.P.star_rows(k)
        store = {(n, f): lib.coded_subfile(n, f) for n in range(1, lib.N + 1) for f in rows}
        caches.append(CacheContent(user=k, store=store))
    return caches


class Term(NamedTuple):
    user: int
    file: int
    row: int


@dataclass(frozen=True)
class Transmission:
    label: int
    terms: tuple[Term, ...]
    payload: np.ndarray


def _check_demands(h: HpPda, lib: FileLibrary, demands: Sequence[int]) -> None:
    if len(demands) != h.params.Kp:
        raise DeliveryError(f"expected {h.params.Kp} demands, got {len(demands)}")
    for d in demands:
        if not 1 <= d <= lib.N:
            raise DeliveryError(f"demand out of range: {d} not in 1..{lib.N}")


def deliver(
    h: HpPda,
    lib: FileLibrary,
    tau: Sequence[int],
    demands: Sequence[int],
    match: ZetaMatch | None = None,
) -> list[Transmission]:
    """One transmission per integer s of B, summing ``C[d_k, f]`` over its cells.

    ``demands[i]`` belongs to the i-th smallest user of ``tau``.
    """
    _check_demands(h, lib, demands)
    if match is None:
        match = find_zeta(h, tau)
    terms: dict[int, list[Term]] = {s: [] for s in range(1, h.params.S + 1)}
    for r, f in enumerate(match.zeta):
        for c, user in enumerate(match.tau):
            cell = match.b_bar.cells[r][c]
            if isinstance(cell, int):
                terms[cell].append(Term(user, demands[c], f))
    out = []
    for s, ts in terms.items():
        if not ts:
            raise DeliveryError(f"integer {s} has no cells in B")
        payload = lib.coded_subfile(ts[0].file, ts[0].row).copy()
        for term in ts[1:]:
            payload ^= lib.coded_subfile(term.file, term.row)
        out.append(Transmission(label=s, terms=tuple(ts), payload=payload))
    return out


def delivered_rows(match: ZetaMatch, user: int) -> list[tuple[int, int]]:
    """(label, row of P) for each integer in the column of ``user``, top to bottom."""
    col = match.tau.index(user)
    return [
        (match.b_bar.cells[r][col], f)
        for r, f in enumerate(match.zeta)
        if match.b_bar.cells[r][col] != STAR
    ]


def decode_user(
    h: HpPda,
    cache: CacheContent,
    match: ZetaMatch,
    transmissions: Sequence[Transmission],
    demands: Sequence[int],
    codec: RsCodec,
    length: int,
) -> bytes:
    """Rebuild the demanded file of ``cache.user`` from its cache and the transmissions."""
    if cache.user not in match.tau:
        raise DeliveryError(f"user {cache.user} is not active")
    col = match.tau.index(cache.user)
    wanted = demands[col]
    by_label = {x.label: x for x in transmissions}

    recovered: dict[int, np.ndarray] = {}
    for s, f in delivered_rows(match, cache.user):
        x = by_label.get(s)
        if x is None:
            raise DeliveryError(f"missing transmission X_{s}")
        payload = x.payload.copy()
        own = 0
        for term in x.terms:
            if term.user == cache.user:
                own += 1
                continue
            key = (term.file, term.row)
            assert key in cache.store, f"user {cache.user} cannot cancel C_{key} in X_{s}"
            payload ^= cache.store[key]
        assert own == 1, f"X_{s} carries {own} terms for user {cache.user}"
        recovered[f] = payload

    cached = {f: block for (n, f), block in cache.store.items() if n == wanted}
    assert not cached.keys() & recovered.keys(), "cached and delivered rows overlap"
    pieces = {**cached, **recovered}
    assert len(pieces) == codec.k, f"user {cache.user} holds {len(pieces)} of {codec.k} rows"
    coords = sorted(pieces)
    message = decode_from(codec, coords, [pieces[f] for f in coords])
    return join_subfiles(message, codec.field, length)


@dataclass(frozen=True)
class UserOutcome:
    user: int
    demand: int
    success: bool
    bytes_compared: int


@dataclass
class SimReport:
    tau: tuple[int, ...]
    demands: tuple[int, ...]
    users: list[UserOutcome]
    rate: Fraction
    transmissions: int
    subpacketization: int
    zeta: tuple[int, ...] = ()
    sent: list[Transmission] = field(default_factory=list, repr=False)

    @property
    def success(self) -> bool:
        return all(u.success for u in self.users)


def _run(
    h: HpPda,
    lib: FileLibrary,
    caches: Sequence[CacheContent],
    tau: Sequence[int],
    demands: Sequence[int],
) -> SimReport:
    match = find_zeta(h, tau)
    sent = deliver(h, lib, match.tau, demands, match=match)
    outcomes = []
    for user, d in zip(match.tau, demands):
        original = lib.files[d - 1]
        got = decode_user(h, caches[user - 1], match, sent, demands, lib.codec, len(original))
        outcomes.append(UserOutcome(user, d, got == original, len(original)))
    sub_len = len(lib.coded[0][0])
    # rate = transmitted symbols / file symbols, counted from what was actually sent
    rate = Fraction(sum(len(x.payload) for x in sent), lib.codec.k * sub_len)
    return SimReport(
        tau=match.tau,
        demands=tuple(demands),
        users=outcomes,
        rate=rate,
        transmissions=len(sent),
        subpacketization=lib.codec.k,
        zeta=match.zeta,
        sent=sent,
    )


def simulate(
    h: HpPda,
    N: int,
    tau: Sequence[int],
    demands: Sequence[int],
    seed: int = 0,
    file_size: int | None = None,
) -> SimReport:
    """Place, deliver and decode with ``N`` seeded random files.

    ``file_size`` defaults to 64 bytes per message subfile.
    """
    if file_size is None:
        file_size = DEFAULT_BYTES_PER_SUBFILE * h.params.subpacketization
    files = generate_files(N, file_size, seed)
    lib = build_library(files, h)
    _check_demands(h, lib, demands)
    return _run(h, lib, place(h, lib), sorted(tau), demands)


def demand_vectors(Kp: int, N: int, n_random: int, rng: random.Random) -> Iterator[tuple[int, ...]]:
    """Seeded random demands, then all-equal, then all-distinct when N >= K'."""
    for _ in range(n_random):
        yield tuple(rng.randint(1, N) for _ in range(Kp))
    yield (1,) * Kp
    if N >= Kp:
        yield tuple(range(1, Kp + 1))


def _batch(args: tuple) -> list[SimReport]:
    h, N, seed, file_size, taus, n_random = args
    files = generate_files(N, file_size, seed)
    lib = build_library(files, h)
    caches = place(h, lib)
    reports = []
    for tau in taus:
        rng = random.Random(f"{seed}:{','.join(map(str, tau))}")
        for demands in demand_vectors(h.params.Kp, N, n_random, rng):
            report = _run(h, lib, caches, tau, demands)
            report.sent = []
            reports.append(report)
    return reports


def simulate_all(
    h: HpPda,
    N: int,
    seed: int = 0,
    n_random: int = 20,
    file_size: int | None = None,
    jobs: int = 1,
) -> list[SimReport]:
    """Simulate every active set with ``n_random`` random plus the two fixed demand vectors.

    Results come back sorted by active set regardless of ``jobs``.
    """
    if file_size is None:
        file_size = DEFAULT_BYTES_PER_SUBFILE * h.params.subpacketization
    taus = list(combinations(range(1, h.params.K + 1), h.params.Kp))
    if jobs <= 1:
        return _batch((h, N, seed, file_size, taus, n_random))
    from concurrent.futures import ProcessPoolExecutor

    chunks = [taus[i::jobs] for i in range(jobs)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        parts = pool.map(_batch, [(h, N, seed, file_size, c, n_random) for c in chunks])
        reports = [r for part in parts for r in part]
    order = {tau: i for i, tau in enumerate(taus)}
    reports.sort(key=lambda r: order[r.tau])
    return reports


def format_report(report: SimReport) -> str:
    lines = [
        f"tau={','.join(map(str, report.tau))} demands={','.join(map(str, report.demands))}"
    ]
    for u in report.users:
        status = "true" if u.success else "false"
        lines.append(f"user={u.user} demand={u.demand} success={status} bytes={u.bytes_compared}")
    lines.append(f"transmissions={report.transmissions} subpacketization={report.subpacketization}")
    lines.append(f"rate={report.rate.numerator}/{report.rate.denominator}")
    return "\n".join(lines) + "\n"


def format_transmissions(sent: Sequence[Transmission], lib: FileLibrary) -> str:
    """Debug dump: one line per transmission, terms and big-endian hex payload."""
    lines = []
    for x in sent:
        terms = " + ".join(f"C_{{{t.file},{t.row}}}" for t in x.terms)
        payload = symbols_to_bytes(x.payload, lib.codec.field).hex()
        lines.append(f"X_{x.label} = {terms} payload={payload}")
    return "\n".join(lines) + "\n"
