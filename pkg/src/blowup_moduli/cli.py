"""Command-line front end.

Subcommands: ``betti`` (tables by any of the three methods),
``verify-config`` (checks on a configuration file), ``glue`` (apply a
gluing map to two configuration files), ``classify`` (membership in the
image of the gluing locus), and ``suite`` (the acceptance criteria).
Exit codes: 0 success, 1 verification failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .acceptance import run_criteria
from .cover import (
    betti_to_json,
    betti_to_tsv,
    build_cover_charge1,
    build_cover_charge2_q2,
    closed_form_betti,
    compute_pages,
    simplex_assembly_betti,
)
from .errors import EigenvalueCollision, NotInNL, NotIntegrable, NotSplitOverQi
from .gluing import (
    BlowupCenters,
    boxplus0,
    boxplusL,
    classify_C_image,
    default_delta,
)
from .monad import (
    Config0,
    Config1,
    config_from_json,
    config_to_json,
    integrable,
    monad_residual,
    nondegenerate,
    special_subspaces,
)
from .scalars import parse_scalar

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def _parse_centers(text: str) -> BlowupCenters:
    """Parse "x1L,x2L;x1R,x2R" with exact rational entries."""
    try:
        left, right = text.split(";")
        xl = tuple(parse_scalar(t) for t in left.split(","))
        xr = tuple(parse_scalar(t) for t in right.split(","))
        return BlowupCenters(xl, xr)
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(f"bad centers {text!r}: {exc}") from None


def _load_config(path: str):
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    return config_from_json(data)


def _cmd_betti(args) -> int:
    charge, q = args.charge, args.q
    method = args.method
    if method == "cech" and not (charge == 1 or (charge == 2 and q == 2)):
        print(
            "error: the cover method needs charge 1 (any q) or charge 2 with q = 2",
            file=sys.stderr,
        )
        return EXIT_USAGE
    if method == "simplex" and not (charge == 2 and q >= 2):
        print("error: the simplex method needs charge 2 and q >= 2", file=sys.stderr)
        return EXIT_USAGE
    if method == "closed-form":
        table = closed_form_betti(charge, q, args.max_degree)
    elif method == "cech":
        cover = build_cover_charge1(q) if charge == 1 else build_cover_charge2_q2()
        table = compute_pages(cover, args.max_degree).betti
    else:
        table = simplex_assembly_betti(q, args.max_degree)
    if args.format == "tsv":
        sys.stdout.write(betti_to_tsv(table))
    else:
        sys.stdout.write(betti_to_json(table) + "\n")
    return EXIT_OK


_CHECKS = ("integrability", "nondegeneracy", "monad-complex", "special-subspaces")


def _cmd_verify(args) -> int:
    try:
        cfg = _load_config(args.file)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: cannot read configuration: {exc}", file=sys.stderr)
        return EXIT_USAGE
    checks = args.checks.split(",") if args.checks else list(_CHECKS)
    bad = [c for c in checks if c not in _CHECKS]
    if bad:
        print(f"error: unknown checks {bad}", file=sys.stderr)
        return EXIT_USAGE
    failed = False
    for check in checks:
        try:
            if check == "integrability":
                ok = integrable(cfg)
                print(f"integrability: {'ok' if ok else 'FAIL'}")
            elif check == "nondegeneracy":
                ok = nondegenerate(cfg)
                print(f"nondegeneracy: {'ok' if ok else 'FAIL'}")
            elif check == "monad-complex":
                ok = monad_residual(cfg).is_zero()
                print(f"monad-complex: {'ok (B o A = 0)' if ok else 'FAIL (B o A != 0)'}")
            else:
                found = special_subspaces(cfg)
                ok = True
                print(f"special-subspaces: {len(found)} found")
                for s in found:
                    print(f"  kind={s.kind} dim={s.dim}")
        except (NotSplitOverQi, NotIntegrable) as exc:
            ok = False
            print(f"{check}: FAIL ({exc})")
        failed = failed or not ok
    return EXIT_FAIL if failed else EXIT_OK


def _cmd_glue(args) -> int:
    try:
        left = _load_config(args.left)
        right = _load_config(args.right)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: cannot read configuration: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.op == "boxplus0":
            if not isinstance(left, Config0) or not isinstance(right, Config0):
                raise TypeError("boxplus0 takes two plane configurations")
            glued = boxplus0(left, right)
        else:
            if not isinstance(left, Config1) or not isinstance(right, Config0):
                raise TypeError(
                    "boxplusL takes a blow-up configuration and a plane one"
                )
            glued = boxplusL(left, right)
    except (EigenvalueCollision, NotIntegrable, TypeError, ValueError) as exc:
        print(f"error: gluing failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    payload = config_to_json(glued)
    payload["provenance"] = {
        "operation": args.op,
        "inputs": [args.left, args.right],
        "centers": args.centers_text,
        "delta": str(args.delta) if args.delta else None,
    }
    text = json.dumps(payload, indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")
    return EXIT_OK


def _cmd_classify(args) -> int:
    try:
        cfg = _load_config(args.file)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: cannot read configuration: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if not isinstance(cfg, Config1) or cfg.k != 2:
        print("error: classification needs a charge-two blow-up configuration", file=sys.stderr)
        return EXIT_USAGE
    try:
        verdict = classify_C_image(cfg, args.centers, mirror=args.mirror)
    except (NotSplitOverQi, NotInNL) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if verdict.in_image:
        print("InImage")
        print(json.dumps(
            {
                "blowup_factor": config_to_json(verdict.factors.m1),
                "plane_factor": config_to_json(verdict.factors.m2),
            },
            indent=2,
        ))
        return EXIT_OK
    print(f"NotInImage: {verdict.reason}")
    return EXIT_FAIL


def _cmd_suite(args) -> int:
    results = run_criteria(seed=args.seed, name_filter=args.filter, maxdeg=args.max_degree)
    if not results:
        print("no criteria match the filter", file=sys.stderr)
        return EXIT_USAGE
    for r in results:
        print(r.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    return EXIT_FAIL if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blowup-moduli",
        description="Exact configuration calculus and cohomology tables for "
        "framed-bundle moduli on blown-up planes.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("betti", help="print a cohomology table")
    p.add_argument("--charge", type=int, choices=(1, 2), required=True)
    p.add_argument("--q", type=int, required=True, help="number of blown-up points")
    p.add_argument("--max-degree", type=int, default=24)
    p.add_argument(
        "--method",
        choices=("closed-form", "cech", "simplex"),
        default="closed-form",
    )
    p.add_argument("--format", choices=("tsv", "json"), default="tsv")
    p.set_defaults(fn=_cmd_betti)

    p = sub.add_parser("verify-config", help="run checks on a configuration file")
    p.add_argument("--file", required=True)
    p.add_argument(
        "--checks",
        default="",
        help="comma list from: " + ",".join(_CHECKS) + " (default: all)",
    )
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("glue", help="glue two charge-one configuration files")
    p.add_argument("--op", choices=("boxplus0", "boxplusL"), required=True)
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--centers", dest="centers_text", default="0,0;1,0")
    p.add_argument("--delta", default=None, help="rational ball radius p/q")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_glue)

    p = sub.add_parser("classify", help="test membership in the gluing-locus image")
    p.add_argument("--file", required=True)
    p.add_argument("--centers", type=_parse_centers, default=_parse_centers("0,0;1,0"))
    p.add_argument("--mirror", action="store_true", help="classify on the right chart")
    p.set_defaults(fn=_cmd_classify)

    p = sub.add_parser("suite", help="run the acceptance criteria")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--filter", default=None, help="run only criteria whose name contains this")
    p.add_argument("--max-degree", type=int, default=24)
    p.set_defaults(fn=_cmd_suite)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "delta", None) is not None:
        try:
            args.delta = Fraction(args.delta)
        except (ValueError, ZeroDivisionError):
            parser.error(f"bad --delta {args.delta!r}")
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
