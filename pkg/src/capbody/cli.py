"""Command-line front end: ``capbody {generate,validate,solve,verify,cases,stranded}``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import warnings

import numpy as np

from .audits import run_audits
from .caps import CapBody, Packing, is_centrally_symmetric, is_unconditional, validate_packing
from .errors import CapBodyError, GenerationStalled, InternalContradiction, InvalidInputError
from .generate import CANNED, canned, central_s2, unconditional_s3
from .illumination import DirectionSet, verify_illumination
from .oracle import mc_verify
from .solver3d import solve_central_s2
from .solver4d import detect_case, solve_unconditional_s3, stranded_distance

EXIT_OK, EXIT_FAIL, EXIT_INVALID = 0, 1, 2


def _radii(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'lo,hi', got {text!r}") from None
    return lo, hi


def _read_json(source: str):
    if source.startswith("canned:"):
        return canned(source.split(":", 1)[1]).to_json()
    try:
        if source == "-":
            return json.load(sys.stdin)
        with open(source) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidInputError(f"cannot read {source}: {exc}") from exc


def load_geometry(source: str) -> Packing | CapBody:
    data = _read_json(source)
    if not isinstance(data, dict):
        raise InvalidInputError("expected a JSON object with 'caps' or 'vertices'")
    if "vertices" in data:
        return CapBody.from_json(data)
    return Packing.from_json(data)


def _packing(geom: Packing | CapBody) -> Packing:
    return geom.caps() if isinstance(geom, CapBody) else geom


def _dump(obj, out: str | None) -> None:
    text = obj if isinstance(obj, str) else json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(header: list[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in row])
    return buf.getvalue()


def _packing_csv(p: Packing) -> str:
    header = [f"c{i + 1}" for i in range(p.dim)] + ["radius"]
    return _csv(header, ([*c.center, c.radius] for c in p.caps))


def cmd_generate(args) -> int:
    kind = args.kind
    stalled = False
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", GenerationStalled)
        if kind.startswith("canned:"):
            packing = canned(kind.split(":", 1)[1])
        elif kind == "central-s2":
            g = central_s2(args.n_caps, args.radii or (0.05, 1.0), args.seed)
            packing, stalled = g.packing, g.stalled
        elif kind == "unconditional-s3":
            g = unconditional_s3(args.n_caps, args.radii or (0.05, 0.5), args.seed, args.base)
            packing, stalled = g.packing, g.stalled
        else:
            raise InvalidInputError(f"unknown kind {kind!r}")
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    if args.format == "csv":
        _dump(_packing_csv(packing), args.out)
    else:
        out = packing.to_json()
        if stalled:
            out["stalled"] = True
        _dump(out, args.out)
    return EXIT_OK


def cmd_validate(args) -> int:
    geom = load_geometry(args.input)
    if isinstance(geom, CapBody):
        geom.validate()
    p = _packing(geom)
    violation = validate_packing(p)
    report = {
        "dim": p.dim,
        "n_caps": len(p),
        "packing_ok": violation is None,
        "centrally_symmetric": is_centrally_symmetric(p),
        "unconditional": is_unconditional(p),
    }
    if violation is not None:
        report["violation"] = {"i": violation.i, "j": violation.j, "overlap": violation.overlap}
    _dump(report, args.out)
    return EXIT_OK if violation is None else EXIT_INVALID


def solve(p: Packing):
    if p.dim == 3:
        return solve_central_s2(p)
    if p.dim == 4:
        return solve_unconditional_s3(p)
    raise InvalidInputError(f"no solver for dimension {p.dim}; supported: 3, 4")


def cmd_solve(args) -> int:
    sol = solve(_packing(load_geometry(args.input)))
    if args.format == "csv":
        d = sol.directions.dim
        _dump(_csv([f"u{i + 1}" for i in range(d)], sol.directions.directions), args.out)
    else:
        _dump(sol.to_json(), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    geom = load_geometry(args.input)
    dirs = DirectionSet.from_json(_read_json(args.directions))
    p = _packing(geom)
    cert = verify_illumination(p, dirs)
    ok = cert.valid
    report = {"certificate": cert.to_json()}
    if args.oracle:
        body = geom if isinstance(geom, CapBody) else CapBody.from_packing(geom)
        mc = mc_verify(body, dirs, n=args.oracle, seed=args.seed)
        report["oracle"] = mc.to_json()
        ok = ok and mc.ok
    report["pass"] = ok
    if args.format == "csv":
        rows = zip(range(len(p)), cert.assignment, cert.margins)
        _dump(_csv(["cap", "direction", "margin"], rows), args.out)
    else:
        _dump(report, args.out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_cases(args) -> int:
    if args.audit:
        rows = run_audits(resolution=args.resolution)
        if args.format == "csv":
            _dump(_csv(["audit", "expected", "observed", "pass"],
                       ((r.name, r.expected, r.observed, r.passed) for r in rows)), args.out)
        else:
            _dump({"audits": [r.to_json() for r in rows], "pass": all(r.passed for r in rows)}, args.out)
        return EXIT_OK if all(r.passed for r in rows) else EXIT_FAIL
    table = []
    for name in CANNED:
        p = canned(name)
        kind = solve_central_s2(p).to_json()["case"] if p.dim == 3 else detect_case(p).kind.value
        table.append({"name": name, "dim": p.dim, "n_caps": len(p), "case": kind})
    if args.format == "csv":
        _dump(_csv(["name", "dim", "n_caps", "case"], (list(r.values()) for r in table)), args.out)
    else:
        _dump({"cases": table}, args.out)
    return EXIT_OK


def cmd_stranded(args) -> int:
    p = _packing(load_geometry(args.input))
    s = stranded_distance(p, args.resolution)
    if args.format == "csv":
        _dump(_csv([f"x{i + 1}" for i in range(p.dim)] + ["distance"], [[*s.point, s.distance]]), args.out)
    else:
        _dump({"point": [float(x) + 0.0 for x in s.point], "distance": s.distance}, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="capbody", description="Illumination of cap bodies of the unit ball.")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", parents=[common], help="random or canned packings")
    g.add_argument("kind", help="central-s2, unconditional-s3 or canned:<name> (" + ", ".join(CANNED) + ")")
    g.add_argument("--n-caps", type=int, default=10)
    g.add_argument("--radii", type=_radii, help="radius range lo,hi")
    g.add_argument("--base", choices=sorted(set(CANNED) - {"octahedron-s2"}),
                   help="canned family placed first (unconditional-s3)")
    g.set_defaults(func=cmd_generate)

    v = sub.add_parser("validate", parents=[common], help="check a packing or cap body")
    v.add_argument("input", help="JSON file, '-' for stdin, or canned:<name>")
    v.set_defaults(func=cmd_validate)

    s = sub.add_parser("solve", parents=[common], help="construct illumination directions")
    s.add_argument("input")
    s.set_defaults(func=cmd_solve)

    f = sub.add_parser("verify", parents=[common], help="check directions against a packing or cap body")
    f.add_argument("input")
    f.add_argument("directions", help="JSON with a 'directions' list (solve output works)")
    f.add_argument("--oracle", type=int, default=0, metavar="N", help="also run the Monte Carlo oracle on N rays")
    f.set_defaults(func=cmd_verify)

    c = sub.add_parser("cases", parents=[common], help="canned configurations and numerical audits")
    c.add_argument("--audit", action="store_true")
    c.add_argument("--resolution", type=int, help="grid points for the stranded-distance audits")
    c.set_defaults(func=cmd_cases)

    t = sub.add_parser("stranded", parents=[common], help="point farthest from every cap")
    t.add_argument("input")
    t.add_argument("--resolution", type=int, help="number of grid points before refinement")
    t.set_defaults(func=cmd_stranded)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InternalContradiction as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (InvalidInputError, CapBodyError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
