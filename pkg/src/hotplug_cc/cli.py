"""Command-line front end: ``hpcc construct|verify|simulate|sweep|bound|demo``.

Exit codes: 0 success, 1 verification or decoding failure, 2 bad usage or
parameters.
"""

from __future__ import annotations

import argparse
import difflib
import logging
import sys
from pathlib import Path
from typing import Sequence

from hotplug_cc.analysis import DEFAULT_ALPHA_STEP, converse_bound, format_fraction, sweep
from hotplug_cc.analysis import bound_curve
from hotplug_cc.designs import DesignError, load_design
from hotplug_cc.hppda import (
    HpPdaError,
    NotHotplugError,
    format_bundle,
    man_hppda,
    man_hppda_params,
    parse_bundle,
    tdesign_hppda,
    verify_hppda,
)
from hotplug_cc.scheme import (
    DeliveryError,
    build_library,
    format_report,
    format_transmissions,
    generate_files,
    simulate,
    simulate_all,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _load_bundle(path: str):
    try:
        return parse_bundle(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise UsageError(f"cannot read bundle: {exc}") from None


def cmd_construct(args: argparse.Namespace) -> int:
    if args.kind == "man":
        if None in (args.K, args.Kp, args.t):
            raise UsageError("construct man needs --K, --Kp and --t")
        h = man_hppda(args.K, args.Kp, args.t)
    else:
        if args.design is None or args.a is None:
            raise UsageError("construct tdesign needs --design and --a")
        h = tdesign_hppda(load_design(args.design), args.a)
    if args.out:
        Path(args.out).write_text(format_bundle(h), encoding="utf-8")
    print(h.params)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    h = _load_bundle(args.bundle)
    report = verify_hppda(h, mode=args.mode, count=args.count, seed=args.seed)
    if report.valid:
        print(f"valid ({report.mode}, {report.checked} active sets)")
        return EXIT_OK
    print(f"invalid: {report.reason}")
    if report.witness_tau is not None:
        print("witness tau=" + ",".join(map(str, report.witness_tau)))
    return EXIT_FAIL


def cmd_simulate(args: argparse.Namespace) -> int:
    h = _load_bundle(args.bundle)
    if args.exhaustive:
        reports = simulate_all(
            h, args.N, seed=args.seed, n_random=args.random_demands,
            file_size=args.file_size, jobs=args.jobs,
        )
        failures = 0
        for r in reports:
            ok = r.success
            failures += not ok
            print(
                f"tau={','.join(map(str, r.tau))} demands={','.join(map(str, r.demands))} "
                f"success={'true' if ok else 'false'}"
            )
        print(f"runs={len(reports)} failures={failures}")
        print(f"rate={format_fraction(reports[0].rate)}")
        return EXIT_OK if failures == 0 else EXIT_FAIL

    if args.tau is None or args.demands is None:
        raise UsageError("simulate needs --tau and --demands (or --exhaustive)")
    report = simulate(h, args.N, args.tau, args.demands, seed=args.seed, file_size=args.file_size)
    sys.stdout.write(format_report(report))
    if args.dump:
        size = args.file_size or 64 * h.params.subpacketization
        lib = build_library(generate_files(args.N, size, args.seed), h)
        Path(args.dump).write_text(format_transmissions(report.sent, lib), encoding="utf-8")
    return EXIT_OK if report.success else EXIT_FAIL


def cmd_sweep(args: argparse.Namespace) -> int:
    if args.man_family:
        K, Kp = args.man_family
        family = [man_hppda_params(K, Kp, t) for t in range(1, Kp + 1)]
    elif args.bundles:
        family = [_load_bundle(b) for b in args.bundles]
    else:
        raise UsageError("sweep needs --man-family K KP or one or more --bundle files")
    points = sweep(family, args.N, args.out, bound_samples=args.samples, alpha_step=args.alpha_step)
    print(f"wrote {len(points)} scheme points to {args.out}")
    return EXIT_OK


def cmd_bound(args: argparse.Namespace) -> int:
    if args.M is not None:
        print(f"{converse_bound(args.N, args.Kp, args.M, args.alpha_step):.6f}")
        return EXIT_OK
    curve = bound_curve(args.N, args.Kp, args.samples, args.alpha_step)
    lines = ["M,R"] + [f"{m:.6f},{r:.6f}" for m, r in curve.samples]
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_demo(args: argparse.Namespace) -> int:
    from hotplug_cc.worked import all_examples, golden_path, render

    status = EXIT_OK
    for ex in all_examples():
        text = render(ex)
        golden = golden_path(ex.name)
        if args.update:
            golden.write_text(text, encoding="utf-8")
            print(f"{ex.name}: golden updated")
            continue
        expected = golden.read_text(encoding="utf-8")
        if text == expected:
            print(f"{ex.name}: matches golden output")
        else:
            status = EXIT_FAIL
            print(f"{ex.name}: differs from golden output")
            sys.stdout.writelines(
                difflib.unified_diff(expected.splitlines(True), text.splitlines(True), "golden", "run")
            )
        if args.verbose:
            sys.stdout.write(text)
    return status


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hpcc", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build an HpPDA bundle")
    p.add_argument("kind", choices=["man", "tdesign"])
    p.add_argument("--K", type=int)
    p.add_argument("--Kp", type=int, help="number of active users K'")
    p.add_argument("--t", type=int)
    p.add_argument("--design", help="design file (t-design family)")
    p.add_argument("--a", type=int_list, help="comma-separated a_1,...,a_{t-1}")
    p.add_argument("--out", help="bundle file to write")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="check an HpPDA bundle")
    p.add_argument("bundle")
    p.add_argument("--mode", choices=["auto", "exhaustive", "sample"], default="auto")
    p.add_argument("--count", type=int, default=1000, help="active sets to sample")
    p.add_argument("--seed", type=int, default=20240101)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="run placement, delivery and decoding")
    p.add_argument("bundle")
    p.add_argument("--N", type=int, required=True, help="number of files")
    p.add_argument("--tau", type=int_list, help="active users, comma-separated")
    p.add_argument("--demands", type=int_list, help="file per active user, in ascending user order")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--file-size", type=int, help="bytes per file (default 64 per subfile)")
    p.add_argument("--exhaustive", action="store_true", help="every active set, several demand vectors")
    p.add_argument("--random-demands", type=int, default=20)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--dump", help="write transmissions (hex payloads) to this file")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="rate-memory points and bound samples as CSV")
    p.add_argument("--man-family", type=int, nargs=2, metavar=("K", "KP"))
    p.add_argument("--bundle", dest="bundles", action="append")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--samples", type=int, default=101)
    p.add_argument("--alpha-step", type=float, default=DEFAULT_ALPHA_STEP)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("bound", help="converse bound at one M or as a sampled curve")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--Kp", type=int, required=True)
    p.add_argument("--M", type=float)
    p.add_argument("--samples", type=int, default=101)
    p.add_argument("--alpha-step", type=float, default=DEFAULT_ALPHA_STEP)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("demo", help="replay both worked examples against golden output")
    p.add_argument("--update", action="store_true", help="rewrite the golden files")
    p.set_defaults(func=cmd_demo)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except NotHotplugError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (UsageError, HpPdaError, DesignError, DeliveryError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
