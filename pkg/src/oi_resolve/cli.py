"""``oi-resolve`` command line.

Exit status: 0 when everything requested passes, 1 when a verification
fails, 2 for unusable input.
"""
from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

from . import __version__
from .box_complex import build, mode_for_rows
from .oi_core import InsufficientDataError, WidthCapError, width_cap
from .oi_family import FlatOIFamily, family_report
from .oi_free_complex import FreeOIComplex, evaluate_at_width, evaluated_homology, minimize
from .oi_ideal import MonomialOIIdeal, expand, ideal_class
from .resolution import (
    algebra_complex,
    betti_table,
    cellular_resolution,
    matrix_dump,
    verify_d_squared,
    verify_exact_up_to,
    verify_minimal_width,
)
from .schemas import COMPLEX_SCHEMA, IDEAL_SCHEMA, SCHEMA_TAG, InputError, load_json, validate

FIXTURE_PACKAGE = "oi_resolve.fixtures"


class VerificationFailed(Exception):
    def __init__(self, report: dict):
        super().__init__(report.get("message", "verification failed"))
        self.report = report


def fixture_names() -> list[str]:
    files = resources.files(FIXTURE_PACKAGE).iterdir()
    return sorted(f.name[:-5] for f in files if f.name.endswith(".json"))


def fixture_text(name: str) -> str:
    path = resources.files(FIXTURE_PACKAGE) / f"{name}.json"
    if not path.is_file():
        raise InputError(f"unknown fixture {name!r}; known: {', '.join(fixture_names())}")
    return path.read_text()


def _resolve_path(path: str) -> str | None:
    """Accept ``fixture:NAME`` as a shorthand for a shipped fixture."""
    return path[len("fixture:"):] if path.startswith("fixture:") else None


def load_ideal(path: str) -> MonomialOIIdeal:
    name = _resolve_path(path)
    if name is not None:
        obj = json.loads(fixture_text(name))
        validate(obj, IDEAL_SCHEMA)
    else:
        obj = load_json(path, IDEAL_SCHEMA)
    try:
        return MonomialOIIdeal.from_json(obj)
    except ValueError as exc:
        raise InputError(f"invalid ideal: {exc}") from exc


def load_complex(path: str) -> FreeOIComplex:
    name = _resolve_path(path)
    if name is not None:
        obj = json.loads(fixture_text(name))
        validate(obj, COMPLEX_SCHEMA)
    else:
        obj = load_json(path, COMPLEX_SCHEMA)
    try:
        return FreeOIComplex.from_json(obj)
    except (ValueError, KeyError, IndexError) as exc:
        raise InputError(f"invalid complex: {exc}") from exc


def _betti_rows(table) -> list[list[int]]:
    return [[i, d, n] for (i, d), n in table.items()]


def _resolution_at(I: MonomialOIIdeal, w: int):
    if w < I.gen_width:
        return algebra_complex(w, I.signature)
    gens = expand(I, w)
    try:
        C = build(gens, mode_for_rows(I.signature.rows))
    except ValueError as exc:
        raise InputError(f"no complex-of-boxes at width {w}: {exc}") from exc
    return cellular_resolution(C, gens)


# ---------------------------------------------------------------------------
# commands; each returns (report dict, text lines)


def cmd_expand(args):
    I = load_ideal(args.ideal)
    gens = expand(I, args.width)
    rep = {"width": args.width, "count": len(gens), "generators": [str(g) for g in gens]}
    text = [f"# width {args.width}: {len(gens)} generators"] + [str(g) for g in gens]
    return rep, text


def cmd_classify(args):
    I = load_ideal(args.ideal)
    w = I.gen_width if args.width is None else args.width
    gens = expand(I, w)
    classes = ideal_class(gens, w) if gens else {}
    rep = {"width": w, "classes": classes}
    text = [f"# width {w}"] + [f"{k} {'yes' if v else 'no'}" for k, v in classes.items()]
    return rep, text


def cmd_boxes(args):
    I = load_ideal(args.ideal)
    gens = expand(I, args.width)
    if not gens:
        raise InputError(f"the ideal vanishes at width {args.width}")
    try:
        C = build(gens, mode_for_rows(I.signature.rows))
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    fv = list(C.f_vector())
    if args.emit_fvector:
        return {"width": args.width, "f_vector": fv}, [" ".join(map(str, fv))]
    rep = C.to_json()
    rep.pop("schema")
    text = [f"# f-vector {' '.join(map(str, fv))}"]
    for k, faces in sorted(C.faces_by_dim.items()):
        text.append(f"dim {k}: " + " ".join(str(f) for f in faces))
    return rep, text


def cmd_resolve(args):
    I = load_ideal(args.ideal)
    R = _resolution_at(I, args.width)
    rep: dict = {
        "width": args.width,
        "ranks": R.ranks(),
        "degrees": R.degrees,
        "complex": {k: v for k, v in R.to_json().items() if k != "schema"},
    }
    text = [f"# width {args.width}", "ranks " + " ".join(map(str, R.ranks()))]
    if args.betti:
        rows = _betti_rows(betti_table(R))
        rep["betti"] = rows
        text.append("# betti level degree count")
        text += [f"{i} {d} {n}" for i, d, n in rows]
    if args.dump_matrices:
        dump = matrix_dump(R)
        rep["matrices"] = R.to_json()["differentials"]
        text.append(dump.rstrip("\n"))
    ok = True
    if args.verify:
        D = args.degree_bound if args.degree_bound is not None else R.max_degree() + 2
        checks = {}
        sq = verify_d_squared(R)
        checks["d_squared"] = sq.to_json()
        mn = verify_minimal_width(R)
        checks["minimal"] = {"ok": mn}
        primes = [args.prime] + ([args.second_prime] if args.second_prime else [])
        for p in primes:
            try:
                ex = verify_exact_up_to(R, D, p)
            except ValueError as exc:
                raise InputError(str(exc)) from exc
            checks[f"exact_mod_{p}"] = {"ok": ex.ok, "message": ex.message,
                                        "homology": ex.data["homology"]}
        ok = all(c["ok"] for c in checks.values())
        rep["verification"] = checks
        for name, c in checks.items():
            text.append(f"{name} {'pass' if c['ok'] else 'FAIL'}")
    rep["ok"] = ok
    if not ok:
        raise VerificationFailed({**rep, "message": "verification failed"})
    return rep, text


def cmd_family(args):
    I = load_ideal(args.ideal)
    fam = FlatOIFamily(I, args.max_width)
    try:
        rep = family_report(fam, args.max_width, naturality=args.verify_naturality, classify=args.classify)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    rep.pop("schema")
    ok = True
    text = [f"# family up to width {args.max_width}"]
    for lvl in rep["levels"]:
        line = f"level {lvl['level']}: ranks {' '.join(map(str, lvl['ranks']))}"
        line += "; generators " + (" ".join(f"{w}x{n}" for w, n in lvl["generator_widths"]) or "none")
        if "classification" in lvl:
            c = lvl["classification"]
            line += f"; {c['kind']}"
            if c.get("shape") is not None:
                line += " {" + ",".join(map(str, c["shape"])) + "}"
        text.append(line)
    if args.verify_naturality:
        nat = rep["naturality"]
        ok = ok and nat["ok"]
        text.append(f"naturality {'pass' if nat['ok'] else 'FAIL'} ({nat['message']})")
    if args.verify:
        cert = []
        for w in range(args.max_width + 1):
            R = fam.complex(w)
            D = R.max_degree() + 2
            entry = {
                "width": w,
                "d_squared": verify_d_squared(R).ok,
                "minimal": verify_minimal_width(R),
                "exact": verify_exact_up_to(R, D, I.signature.base_field_prime).ok,
            }
            cert.append(entry)
            ok = ok and entry["d_squared"] and entry["minimal"] and entry["exact"]
        rep["certificate"] = cert
        bad = [c["width"] for c in cert if not (c["d_squared"] and c["minimal"] and c["exact"])]
        text.append("per-width certificate " + ("pass" if not bad else f"FAIL at widths {bad}"))
    rep["ok"] = ok
    if not ok:
        raise VerificationFailed({**rep, "message": "verification failed"})
    return rep, text


def _trim(table):
    """Drop all-zero rows at the top so tables of different lengths compare."""
    rows = [list(r) for r in table]
    while rows and not any(rows[-1]):
        rows.pop()
    return rows


def cmd_minimize(args):
    C = load_complex(args.complex)
    M = minimize(C)
    rep = {
        "before": [[list(s) for s in lvl] for lvl in C.shapes()],
        "after": [[list(s) for s in lvl] for lvl in M.shapes()],
        "minimal": M.is_minimal(),
        "widthwise_minimal": M.is_widthwise_minimal(),
        "complex": {k: v for k, v in M.to_json().items() if k != "schema"},
    }
    text = [
        "before " + " | ".join(" ".join(f"{w}:{d}" for w, d in lvl) or "-" for lvl in C.shapes()),
        "after  " + " | ".join(" ".join(f"{w}:{d}" for w, d in lvl) or "-" for lvl in M.shapes()),
        f"minimal {'yes' if rep['minimal'] else 'no'}",
        f"widthwise_minimal {'yes' if rep['widthwise_minimal'] else 'no'}",
    ]
    ok = rep["minimal"]
    if args.verify:
        cap = args.cap if args.cap is not None else C.default_cap()
        D = args.degree_bound if args.degree_bound is not None else max(
            (g.degree for lvl in C.levels for g in lvl), default=0) + 2
        bad = [w for w in range(cap + 1) if not verify_d_squared(evaluate_at_width(C, w))]
        rep["d_squared"] = {"ok": not bad, "failing_widths": bad}
        text.append(f"d_squared through width {cap}: " + ("pass" if not bad else f"FAIL at widths {bad}"))
        same = False
        if not bad:
            before = evaluated_homology(C, cap, D, args.prime)
            after = evaluated_homology(M, cap, D, args.prime)
            same = all(_trim(before[w]) == _trim(after[w]) for w in before)
            text.append(f"homology through width {cap}, degree {D}: {'unchanged' if same else 'CHANGED'}")
        rep["homology_unchanged"] = same
        ok = ok and same
    rep["ok"] = ok
    if not ok:
        raise VerificationFailed({**rep, "message": "minimization check failed"})
    return rep, text


def cmd_fixtures(args):
    if args.export:
        out = Path(args.export)
        out.mkdir(parents=True, exist_ok=True)
        for name in fixture_names():
            (out / f"{name}.json").write_text(fixture_text(name))
        return {"exported": fixture_names(), "directory": str(out)}, [f"exported {n}" for n in fixture_names()]
    if args.name:
        obj = json.loads(fixture_text(args.name))
        return {"name": args.name, "fixture": obj}, [fixture_text(args.name).rstrip("\n")]
    descs = {n: json.loads(fixture_text(n)).get("description", "") for n in fixture_names()}
    return {"fixtures": descs}, [f"{n}: {d}" for n, d in descs.items()]


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--width-cap", type=int, default=None, help="raise the width cap (default 12)")

    parser = argparse.ArgumentParser(prog="oi-resolve", description="Complex-of-boxes resolutions of monomial OI-ideals.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", parents=[common], help="minimal generators of I(w)")
    p.add_argument("--ideal", required=True)
    p.add_argument("--width", type=int, required=True)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("classify", parents=[common], help="which order-ideal class I(w) belongs to")
    p.add_argument("--ideal", required=True)
    p.add_argument("--width", type=int)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("boxes", parents=[common], help="the complex-of-boxes at one width")
    p.add_argument("--ideal", required=True)
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--emit-fvector", action="store_true")
    p.set_defaults(func=cmd_boxes)

    p = sub.add_parser("resolve", parents=[common], help="cellular resolution at one width")
    p.add_argument("--ideal", required=True)
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--verify", action="store_true")
    p.add_argument("--betti", action="store_true")
    p.add_argument("--prime", type=int, default=2)
    p.add_argument("--second-prime", type=int)
    p.add_argument("--degree-bound", type=int)
    p.add_argument("--dump-matrices", action="store_true")
    p.set_defaults(func=cmd_resolve)

    p = sub.add_parser("family", parents=[common], help="the OI-family of resolutions")
    p.add_argument("--ideal", required=True)
    p.add_argument("--max-width", type=int, default=8)
    p.add_argument("--verify-naturality", action="store_true")
    p.add_argument("--classify", action="store_true")
    p.add_argument("--verify", action="store_true", help="certify every width")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("minimize", parents=[common], help="split off trivial summands")
    p.add_argument("--complex", required=True)
    p.add_argument("--verify", action="store_true", help="compare evaluated homology")
    p.add_argument("--cap", type=int)
    p.add_argument("--degree-bound", type=int)
    p.add_argument("--prime", type=int, default=32003)
    p.set_defaults(func=cmd_minimize)

    p = sub.add_parser("fixtures", parents=[common], help="list, show or export shipped fixtures")
    p.add_argument("name", nargs="?")
    p.add_argument("--export", metavar="DIR")
    p.set_defaults(func=cmd_fixtures)
    return parser


def _emit(args, report: dict, text: list[str]) -> None:
    if args.format == "json":
        body = json.dumps(report, indent=2, sort_keys=True) + "\n"
    else:
        body = "\n".join(text) + "\n"
    if args.output:
        Path(args.output).write_text(body)
    else:
        sys.stdout.write(body)


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    head = {"schema": SCHEMA_TAG, "command": args.command}
    try:
        if args.width_cap is not None:
            with width_cap(args.width_cap):
                report, text = args.func(args)
        else:
            report, text = args.func(args)
    except VerificationFailed as exc:
        report = {**head, **exc.report, "ok": False}
        _emit(args, report, [f"FAIL: {exc}"] + [f"{k}: {v}" for k, v in sorted(exc.report.items()) if k == "verification"])
        return 1
    except InputError as exc:
        print(f"oi-resolve: error: {exc}", file=sys.stderr)
        for d in exc.diagnostics:
            print(f"  {d}", file=sys.stderr)
        return 2
    except (WidthCapError, InsufficientDataError, ValueError) as exc:
        print(f"oi-resolve: error: {exc}", file=sys.stderr)
        return 2
    report = {**head, **report}
    report.setdefault("ok", True)
    _emit(args, report, text)
    return 0


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
