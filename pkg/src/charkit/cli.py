"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 I/O error, 3 verification failure.
A JSON config file can seed the scan configuration; explicit flags win.
"""

from __future__ import annotations

import argparse
import json
import sys

from .characters import character_by_index, character_meta
from .experiments import (
    ScanConfig,
    direction_experiment,
    emit,
    identity_suite,
    major_arc_compare,
    odd_order_report,
    product_structure_report,
    pv_scan,
)
from .pretentious import nearest_character

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_VERIFY = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON file mirroring the scan config")
    p.add_argument("--qmin", type=int)
    p.add_argument("--qmax", type=int)
    p.add_argument("--primes-only", action="store_true", default=None)
    p.add_argument("--order", type=int, help="restrict to characters of this order")
    p.add_argument("--conductor-bound", type=int)
    p.add_argument("--y-policy", choices=["q", "logq"])
    p.add_argument("--smooth-exp", type=int, choices=[2, 12])
    p.add_argument("--threads", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="output path")
    p.add_argument("--format", choices=["csv", "json"])
    p.add_argument(
        "--skip-identities",
        action="store_true",
        help="skip the identity-suite prerequisite",
    )


def build_parser() -> _Parser:
    parser = _Parser(prog="charkit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    for name, hint in [
        ("scan", "per-character M and nearest-pretender scan"),
        ("odd-order", "odd-order characters vs the population"),
        ("direction", "direction experiment at a prime modulus"),
    ]:
        p = sub.add_parser(name, help=hint)
        _add_common(p)
        if name == "direction":
            p.add_argument("--q", type=int, required=True)
            p.add_argument("--x", type=int)
            p.add_argument("--theta", type=float, default=0.0)

    p = sub.add_parser("product", help="product-structure report")
    _add_common(p)
    p.add_argument(
        "--char",
        action="append",
        required=True,
        metavar="q:index",
        help="character as modulus:index, repeatable",
    )

    p = sub.add_parser("arc-compare", help="major-arc main-term comparison")
    _add_common(p)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--chi-index", type=int, required=True)
    p.add_argument("--alpha", required=True, help="real number or b/r fraction")

    p = sub.add_parser("verify", help="run the exact identity suite")
    _add_common(p)

    p = sub.add_parser("nearest", help="nearest small-conductor character")
    _add_common(p)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--chi-index", type=int, required=True)

    return parser


def _config_from_args(args: argparse.Namespace) -> ScanConfig:
    base: dict = {}
    if getattr(args, "config", None):
        with open(args.config) as fh:
            base = json.load(fh)
    overrides = {
        "q_min": args.qmin,
        "q_max": args.qmax,
        "primes_only": args.primes_only,
        "orders": (args.order,) if getattr(args, "order", None) else None,
        "y_policy": args.y_policy,
        "conductor_bound": args.conductor_bound,
        "smoothness_exponent": args.smooth_exp,
        "threads": args.threads,
        "seed": args.seed,
        "output_path": args.out,
        "output_format": args.format,
    }
    merged = dict(base)
    for k, v in overrides.items():
        if v is not None:
            merged[k] = v
    allowed = set(ScanConfig.__dataclass_fields__)
    unknown = set(merged) - allowed
    if unknown:
        raise SystemExit(EXIT_USAGE)
    if "orders" in merged and merged["orders"] is not None:
        merged["orders"] = tuple(merged["orders"])
    return ScanConfig(**merged)


def _require_identities(args: argparse.Namespace, cfg: ScanConfig) -> None:
    if args.skip_identities:
        return
    report = identity_suite(seed=cfg.seed)
    if not report.ok:
        print(report.first_failure, file=sys.stderr)
        raise SystemExit(EXIT_VERIFY)


def _parse_char(spec: str):
    try:
        q_str, idx_str = spec.split(":")
        q, idx = int(q_str), int(idx_str)
    except ValueError:
        print(f"error: bad character spec {spec!r}, want q:index", file=sys.stderr)
        raise SystemExit(EXIT_USAGE) from None
    return character_by_index(q, idx)


def _parse_alpha(spec: str) -> float:
    if "/" in spec:
        num, den = spec.split("/")
        return int(num) / int(den)
    return float(spec)


def _emit_or_print(rows: list[dict], cfg: ScanConfig) -> None:
    if cfg.output_path:
        try:
            emit(rows, cfg.output_path, cfg.output_format)
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            raise SystemExit(EXIT_IO) from None
    else:
        json.dump(rows, sys.stdout, indent=1, default=str)
        print()


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _config_from_args(args)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (TypeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        if args.command == "verify":
            report = identity_suite(seed=cfg.seed, verbose=True)
            return EXIT_OK if report.ok else EXIT_VERIFY

        if args.command == "scan":
            _require_identities(args, cfg)
            rows, summary = pv_scan(cfg)
            _emit_or_print(rows, cfg)
            print(json.dumps({"summary": summary}, indent=1, default=str))
            return EXIT_OK

        if args.command == "odd-order":
            _require_identities(args, cfg)
            g = args.order or 3
            summary = odd_order_report(cfg, g)
            print(json.dumps(summary, indent=1, default=str))
            return EXIT_OK

        if args.command == "product":
            chis = [_parse_char(s) for s in args.char]
            try:
                summary = product_structure_report(
                    chis, cfg.conductor_bound
                )
            except ValueError as exc:
                print(f"error: {exc}", file=sys.stderr)
                return EXIT_USAGE
            print(json.dumps(summary, indent=1, default=str))
            return EXIT_OK

        if args.command == "direction":
            x = args.x or args.q
            summary = direction_experiment(args.q, x, args.theta)
            print(json.dumps(summary, indent=1, default=str))
            return EXIT_OK

        if args.command == "arc-compare":
            chi = character_by_index(args.q, args.chi_index)
            if not character_meta(chi).is_primitive:
                print("error: character must be primitive", file=sys.stderr)
                return EXIT_USAGE
            cmp = major_arc_compare(chi, _parse_alpha(args.alpha), cfg)
            print(
                json.dumps(
                    {
                        "alpha": cmp.alpha,
                        "b": cmp.arc.b,
                        "r": cmp.arc.r,
                        "N": cmp.arc.N,
                        "is_major": cmp.arc.is_major,
                        "true_sum": str(cmp.true_sum),
                        "main_term": str(cmp.main_term),
                        "discrepancy": cmp.discrepancy,
                        "normalized_discrepancy": cmp.discrepancy
                        / cmp.normalizer,
                    },
                    indent=1,
                )
            )
            return EXIT_OK

        if args.command == "nearest":
            chi = character_by_index(args.q, args.chi_index)
            if chi.is_principal:
                print("error: principal character", file=sys.stderr)
                return EXIT_USAGE
            y = cfg.distance_y(args.q)
            near = nearest_character(chi, cfg.conductor_bound, y)
            print(
                json.dumps(
                    {
                        "q": args.q,
                        "chi_index": args.chi_index,
                        "m": near.conductor,
                        "xi_index": near.xi.index,
                        "dist_sq": near.dist_sq,
                        "parity_product": near.parity_product,
                        "runners_up": [
                            {
                                "m": psi.q,
                                "xi_index": psi.index,
                                "dist_sq": d,
                            }
                            for psi, d in near.runners_up[:5]
                        ],
                    },
                    indent=1,
                )
            )
            return EXIT_OK
    except SystemExit:
        raise
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
