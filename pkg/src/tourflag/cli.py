"""Command-line surface for reproduction runs.

Subcommands: enumerate, density, verify, decompose, limits.  Exit codes:
0 success, 1 verification failure, 2 usage error (bad encodings, names,
malformed files), 3 capability/budget error.  Every command accepts
--json for machine-readable output; rationals are printed exactly, with
decimals only as annotations.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .arith import format_rational
from .certificates import (
    builtin_cert_dir,
    load_certificate,
    slack_table,
    verify,
    verify_eigen,
    verify_rank1,
)
from .errors import CapabilityError
from .flags import density
from .structures import (
    KNOWN_LIMITS,
    DecompositionTree,
    c3_decompose,
    empirical_limit,
)
from .tournaments import (
    enumerate_tournaments,
    resolve_tournament,
    reverse_lookup,
)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_CAPABILITY = 3


def _annotated(value: Fraction) -> str:
    return f"{format_rational(value)} (~{float(value):.6f})"


def cmd_enumerate(args) -> int:
    ts = enumerate_tournaments(args.n)
    if args.json:
        payload = {
            "n": args.n,
            "count": len(ts),
            "tournaments": None
            if args.count_only
            else [{"encoding": t.encode(), "name": reverse_lookup(t)} for t in ts],
        }
        print(json.dumps(payload))
        return EXIT_OK
    if args.count_only:
        print(len(ts))
        return EXIT_OK
    for t in ts:
        name = reverse_lookup(t)
        print(f"{t.encode()}\t{name}" if name else t.encode())
    return EXIT_OK


def cmd_density(args) -> int:
    pattern = resolve_tournament(args.pattern)
    host = resolve_tournament(args.host)
    value = density(pattern, host)
    if args.json:
        print(
            json.dumps(
                {
                    "pattern": args.pattern,
                    "host": args.host,
                    "density": format_rational(value),
                    "decimal": float(value),
                }
            )
        )
    else:
        print(_annotated(value))
    return EXIT_OK


def _resolve_cert_path(name: str, cert_dir: str | None) -> Path:
    direct = Path(name)
    if direct.exists():
        return direct
    base = Path(cert_dir) if cert_dir else (
        Path("certs") if Path("certs").is_dir() else builtin_cert_dir()
    )
    for candidate in (base / name, base / f"{name}.json"):
        if candidate.exists():
            return candidate
    raise FileNotFoundError(f"certificate not found: {name!r} (searched {base})")


def cmd_verify(args) -> int:
    try:
        path = _resolve_cert_path(args.certificate, args.cert_dir)
        cert = load_certificate(path)
    except (FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = verify(cert, charpoly=args.charpoly, tables=args.tables)
    if args.rank1:
        report.checks.extend(verify_rank1(cert).checks)
    if args.eigen:
        report.checks.extend(verify_eigen(cert).checks)
    if args.json:
        payload = {
            "target": cert.target_name,
            "claimed_bound": format_rational(cert.claimed_bound),
            "ok": report.ok,
            "checks": [
                {"name": c.name, "passed": c.passed, "detail": c.detail}
                for c in report.checks
            ],
        }
        if args.tables:
            payload["slack_table"] = {
                name: format_rational(v) for name, v in slack_table(cert).items()
            }
        print(json.dumps(payload))
    else:
        print(f"certificate {cert.target_name}: claimed bound {format_rational(cert.claimed_bound)}")
        for line in report.lines():
            print(line)
        print("RESULT:", "pass" if report.ok else "FAIL")
    return EXIT_OK if report.ok else EXIT_VERIFY_FAILED


def cmd_decompose(args) -> int:
    t = resolve_tournament(args.tournament)
    result = c3_decompose(t)
    payload = result.to_json()
    if isinstance(result, DecompositionTree):
        payload = {"decomposable": True, "tree": payload}
    else:
        payload = {"decomposable": False, "witness": payload}
    print(json.dumps(payload, indent=None if args.json else 1))
    return EXIT_OK


def cmd_limits(args) -> int:
    target = resolve_tournament(args.target)
    if args.family == "carousel":
        sizes = [m for m in range(11, args.max_size + 1, 10)]
    elif args.family == "triangular":
        sizes = []
        m = 9
        while m <= args.max_size:
            sizes.append(m)
            m *= 3
    else:
        sizes = [args.max_size]
    if not sizes:
        print(f"error: --max-size {args.max_size} too small for family {args.family}",
              file=sys.stderr)
        return EXIT_USAGE
    limit = KNOWN_LIMITS.get((args.family, args.target))
    partial = None
    try:
        points = empirical_limit(
            args.family, target, sizes, seed=args.seed, samples=args.samples
        )
    except CapabilityError as exc:
        partial = exc.partial or []
        points = partial
        print(f"capability limit hit: {exc}", file=sys.stderr)
    rows = []
    for p in points:
        row = {
            "size": p.size,
            "density": format_rational(p.density),
            "decimal": float(p.density),
        }
        if p.samples is not None:
            row["samples"] = p.samples
            prob = float(p.density)
            row["stderr"] = (prob * (1 - prob) / p.samples) ** 0.5
        if limit is not None:
            row["gap"] = abs(float(p.density) - float(limit))
        rows.append(row)
    if args.json:
        print(json.dumps({
            "family": args.family,
            "target": args.target,
            "limit": format_rational(limit) if limit is not None else None,
            "rows": rows,
        }))
    else:
        if limit is not None:
            print(f"known limit: {_annotated(limit)}")
        for row in rows:
            line = f"size {row['size']:>4}  density {row['density']} (~{row['decimal']:.6f})"
            if "gap" in row:
                line += f"  gap {row['gap']:.6f}"
            if "samples" in row:
                line += f"  [{row['samples']} samples, stderr {row['stderr']:.6f}]"
            print(line)
    return EXIT_CAPABILITY if partial is not None else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tourflag",
        description="Exact subtournament densities, certificate verification "
        "and cycle-blow-up decomposition.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="list tournaments of a given size up to isomorphism")
    p.add_argument("n", type=int)
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("density", help="exact induced density p(pattern; host)")
    p.add_argument("pattern")
    p.add_argument("host")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("verify", help="verify a semidefinite certificate file")
    p.add_argument("certificate")
    p.add_argument("--tables", action="store_true", help="also match the shipped slack table")
    p.add_argument("--charpoly", action="store_true", help="also match shipped characteristic polynomials")
    p.add_argument("--rank1", action="store_true", help="also check rank-1 witnesses")
    p.add_argument("--eigen", action="store_true", help="also check eigenpair witnesses")
    p.add_argument("--cert-dir", default=None, help="directory for bare certificate names (default ./certs, else built-in)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("decompose", help="recursive cyclic decomposition or forbidden witness")
    p.add_argument("tournament")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("limits", help="density of a target along an extremal family")
    p.add_argument("family", choices=["carousel", "triangular", "random"])
    p.add_argument("target")
    p.add_argument("--max-size", type=int, default=41)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_limits)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CapabilityError as exc:
        print(f"capability error: {exc}", file=sys.stderr)
        return EXIT_CAPABILITY
    except (ValueError, KeyError, IndexError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
