"""Command-line front end: ``lensgrid <subcommand> ...``.

Exit codes: 0 success, 1 validation failure, 2 I/O or syntax error,
3 refused move, 4 generator cap exceeded.  Output is deterministic: rows are
sorted and rationals are always printed as reduced ``num/den`` strings.
"""

from __future__ import annotations

import argparse
import csv
import difflib
import io
import json
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, Sequence

from .floer import CapExceeded, ChainComplex, compare_orientation, degree_law_violations, homology_of_complex, verify_d_squared
from .grading import NORMALIZATIONS, GradingEngine
from .grid import (
    DiagramError,
    DiagramSyntaxError,
    GridDiagram,
    diagram_from_dict,
    lift_diagram,
    make_trivial_link,
    recognize_trivial,
    reverse_orientation,
    serialize_diagram,
    trace_components,
    trivial_form_violations,
)
from .homfly import LaurentPoly, SkeinError, eval_script, expression_from_json, reverse_expression, table_from_json
from .moves import AXES, CORNERS, MoveRefused, commute, cycle, destabilize, stabilize

EXIT_OK, EXIT_INVALID, EXIT_IO, EXIT_REFUSED, EXIT_CAP = 0, 1, 2, 3, 4

FIXTURES = ("g1", "g2", "la", "lb", "trivial_l41")


class UsageError(Exception):
    """Bad input file or argument; maps to exit code 2."""


def rat(x: Fraction | int) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


# --- I/O helpers --------------------------------------------------------------

def _read_text(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _read_json(path: str) -> Any:
    try:
        return json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def load_diagram(path: str) -> GridDiagram:
    obj = _read_json(path)
    try:
        return diagram_from_dict(obj)
    except DiagramSyntaxError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _emit(text: str, out: str | None) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc.strerror or exc}") from exc


# --- renderers ----------------------------------------------------------------

def _table_text(header: list[str], rows: list[list[str]], fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return buf.getvalue()
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(header)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    lines += ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]
    return "\n".join(lines) + "\n"


def _dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def render_components(G: GridDiagram, fmt: str) -> str:
    info = trace_components(G)
    comps = [
        {"index": j, "O": list(c.O), "X": list(c.X), "k": c.k, "class": c.homology_class}
        for j, c in enumerate(info.components)
    ]
    form = recognize_trivial(G)
    trivial = None
    if form is not None:
        trivial = {"counts": list(form.counts), "render": form.render(), "render_ascending": form.render_ascending()}
    if fmt == "json":
        return _dumps({"p": G.p, "q": G.q, "n": G.n, "components": comps, "trivial": trivial})
    rows = [[str(c["index"]), " ".join(map(str, c["O"])), " ".join(map(str, c["X"])), str(c["k"]), str(c["class"])] for c in comps]
    text = _table_text(["component", "O", "X", "k", "class"], rows, fmt)
    if fmt == "text":
        if trivial is None:
            text += "trivial form: no (" + "; ".join(trivial_form_violations(G)) + ")\n"
        else:
            text += f"trivial form: {trivial['render']} (ascending {trivial['render_ascending']})\n"
    return text


def render_gradings(G: GridDiagram, fmt: str, cap: int | None, normalization: str) -> str:
    C = ChainComplex.build(G, cap, normalization)
    entries = sorted(zip(C.gens, C.gradings), key=lambda t: (t[0].permutation, t[0].m))
    if fmt == "json":
        return _dumps({
            "p": G.p, "q": G.q, "n": G.n,
            "generators": [
                {"permutation": list(g.permutation), "m": list(g.m), "spin": gr.spin,
                 "maslov": rat(gr.maslov), "alexander": [rat(a) for a in gr.alexander]}
                for g, gr in entries
            ],
        })
    rows = [
        [" ".join(map(str, g.permutation)), " ".join(map(str, g.m)), str(gr.spin), rat(gr.maslov), " ".join(rat(a) for a in gr.alexander)]
        for g, gr in entries
    ]
    return _table_text(["permutation", "m", "spin", "maslov", "alexander"], rows, fmt)


def homology_json(H) -> dict:
    return {
        "p": H.p, "q": H.q, "n": H.n, "components": H.components, "k": list(H.k),
        "table": [
            {"spin": r.spin, "maslov": rat(r.maslov), "alexander": [rat(a) for a in r.alexander], "dim": r.dim}
            for r in H.rows
        ],
    }


def render_homology(H, fmt: str) -> str:
    if fmt == "json":
        return _dumps(homology_json(H))
    rows = [[str(r.spin), rat(r.maslov), " ".join(rat(a) for a in r.alexander), str(r.dim)] for r in H.rows]
    text = _table_text(["spin", "maslov", "alexander", "dim"], rows, fmt)
    if fmt == "text":
        text += f"total dimension {H.total}; k = {list(H.k)}"
        if any(k > 1 for k in H.k):
            text += " (table includes the V_j tensor factors, one per extra O marking)"
        text += "\n"
    return text


# --- subcommands --------------------------------------------------------------

def cmd_validate(args) -> int:
    obj = _read_json(args.file)
    try:
        G = diagram_from_dict(obj)
    except DiagramSyntaxError as exc:
        raise UsageError(f"{args.file}: {exc}") from exc
    except DiagramError as exc:
        print("invalid")
        for v in exc.violations:
            print(f"  - {v}")
        return EXIT_INVALID
    print(f"valid: p={G.p} q={G.q} n={G.n}")
    return EXIT_OK


def cmd_components(args) -> int:
    _emit(render_components(load_diagram(args.file), args.format), None)
    return EXIT_OK


def cmd_gradings(args) -> int:
    G = load_diagram(args.file)
    _emit(render_gradings(G, args.format, args.cap, args.alexander), None)
    return EXIT_OK


def cmd_homology(args) -> int:
    G = load_diagram(args.file)
    C = ChainComplex.build(G, args.cap, args.alexander)
    status = EXIT_OK
    notes = []
    checks = args.check or []
    if "d2" in checks:
        report = verify_d_squared(G, complex_=C)
        laws = degree_law_violations(C)
        notes.append("d2: " + report.describe())
        notes.append("degree laws: " + ("hold" if not laws else f"{len(laws)} violations"))
        notes += [f"  {v}" for v in laws[:20]]
        if not report.ok or laws:
            status = EXIT_INVALID
    H = homology_of_complex(C)
    if "orientation" in checks:
        rep = compare_orientation(G, args.cap)
        notes.append(f"orientation: k = {rep.k}; bijection {'holds' if rep.ok else 'fails'}")
        if not rep.ok:
            status = EXIT_INVALID
    _emit(render_homology(H, args.format), None)
    for line in notes:
        print(line, file=sys.stderr if args.format != "text" else sys.stdout)
    return status


def cmd_lift(args) -> int:
    _emit(serialize_diagram(lift_diagram(load_diagram(args.file))), args.output)
    return EXIT_OK


def cmd_reverse(args) -> int:
    _emit(serialize_diagram(reverse_orientation(load_diagram(args.file))), args.output)
    return EXIT_OK


def _parse_cell(text: str) -> tuple[int, int]:
    try:
        a, b = (int(t) for t in text.split(","))
    except ValueError:
        raise UsageError(f"cell must be 'a,b', got {text!r}") from None
    return (a, b)


def cmd_move(args) -> int:
    G = load_diagram(args.file)
    try:
        if args.op == "stabilize":
            H = stabilize(G, args.marking, args.family, args.corner)
        elif args.op == "destabilize":
            if args.cell is None:
                raise UsageError("destabilize needs --cell a,b (lower-left cell of the 2x2 block)")
            H = destabilize(G, _parse_cell(args.cell), args.family, args.corner)
        elif args.op == "commute":
            H = commute(G, args.at, args.axis)
        else:
            H = cycle(G, args.axis, args.shift)
    except IndexError as exc:
        raise UsageError(str(exc)) from exc
    _emit(serialize_diagram(H), args.output)
    return EXIT_OK


def cmd_trivial(args) -> int:
    try:
        counts = [int(c) for c in args.counts.split(",")]
        G = make_trivial_link(args.p, args.q, counts)
    except ValueError as exc:
        if isinstance(exc, DiagramError):
            raise
        raise UsageError(str(exc)) from exc
    _emit(serialize_diagram(G), args.output)
    return EXIT_OK


def _load_table(path: str | None) -> dict | None:
    if path is None:
        return None
    try:
        return table_from_json(_read_json(path))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{path}: bad table: {exc}") from exc


def homfly_eval_text(script: Any, table: dict | None, symbolic: bool) -> tuple[str, bool]:
    res = eval_script(script, None if symbolic else table)
    lines = []
    for sym, c in res.expression.terms.items():
        lines.append(f"{sym.render()}: {c}")
    if symbolic or table is None:
        return "\n".join(lines) + "\n", True
    if res.missing:
        lines.append("missing table entries: " + ", ".join(s.render() for s in res.missing))
        return "\n".join(lines) + "\n", False
    lines.append(f"value: {res.value}")
    return "\n".join(lines) + "\n", True


def cmd_homfly(args) -> int:
    try:
        if args.homfly_cmd == "eval":
            text, ok = homfly_eval_text(_read_json(args.script), _load_table(args.table), args.symbolic)
            _emit(text, None)
            return EXIT_OK if ok else EXIT_INVALID
        obj = _read_json(args.exprfile)
        expr = expression_from_json(obj.get("expr", obj) if isinstance(obj, dict) else obj)
        rev = reverse_expression(expr)
        out = {"p": rev.p, "terms": [{"symbol": list(s.counts), "render": s.render(), "coeff": str(c)} for s, c in rev.terms.items()]}
        _emit(_dumps(out), None)
        return EXIT_OK
    except (SkeinError, KeyError, TypeError) as exc:
        raise UsageError(f"skein input error: {exc}") from exc


# --- reproduce-appendix ---------------------------------------------------------

def data_dir() -> Path:
    return Path(str(resources.files("lensgrid") / "data"))


def fixture_outputs(base: Path) -> dict[str, str]:
    """Golden-file name -> text produced from the bundled fixtures."""
    out = {}
    for name in FIXTURES:
        G = diagram_from_dict(json.loads((base / f"{name}.json").read_text(encoding="utf-8")))
        out[f"{name}.components.json"] = render_components(G, "json")
        if name != "trivial_l41":
            out[f"{name}.gradings.json"] = render_gradings(G, "json", None, "standard")
            C = ChainComplex.build(G)
            out[f"{name}.homology.json"] = render_homology(homology_of_complex(C), "json")
    table = table_from_json(json.loads((base / "homfly" / "l41_lift_table.json").read_text(encoding="utf-8")))
    for name in ("a22", "b22"):
        script = json.loads((base / "homfly" / f"{name}.json").read_text(encoding="utf-8"))
        out[f"{name}.homfly.txt"] = homfly_eval_text(script, table, False)[0]
    return out


def reference_notes(base: Path) -> list[str]:
    """Compare fixture outputs with the reference values stored in each fixture."""
    notes = []
    for name in FIXTURES:
        obj = json.loads((base / f"{name}.json").read_text(encoding="utf-8"))
        ref = obj.get("reference", {})
        G = diagram_from_dict(obj)
        if "classes" in ref:
            got = sorted(trace_components(G).classes)
            notes.append(f"{name} classes: {'agree' if got == sorted(ref['classes']) else f'differ (got {got})'}")
        if "homology" in ref:
            H = homology_json(homology_of_complex(ChainComplex.build(G)))
            key = lambda r: (r["spin"], r["maslov"], tuple(r["alexander"]), r["dim"])  # noqa: E731
            same = sorted(map(key, H["table"])) == sorted(map(key, ref["homology"]))
            notes.append(f"{name} homology: {'agrees with' if same else 'differs from'} the reference table")
    for name in ("a22", "b22"):
        script = json.loads((base / "homfly" / f"{name}.json").read_text(encoding="utf-8"))
        table = table_from_json(json.loads((base / "homfly" / "l41_lift_table.json").read_text(encoding="utf-8")))
        if "expected" in script:
            same = eval_script(script, table).value == LaurentPoly.parse(script["expected"])
            notes.append(f"{name} HOMFLY-PT: {'agrees with' if same else 'differs from'} the reference polynomial")
    return notes


def cmd_reproduce(args) -> int:
    base = Path(args.data) if args.data else data_dir()
    golden = base / "golden"
    outputs = fixture_outputs(base)
    failed = 0
    for fname, text in sorted(outputs.items()):
        path = golden / fname
        if args.update:
            golden.mkdir(parents=True, exist_ok=True)
            path.write_text(text, encoding="utf-8")
            print(f"wrote {fname}")
            continue
        if not path.exists():
            print(f"MISSING {fname}")
            failed += 1
            continue
        want = path.read_text(encoding="utf-8")
        if want == text:
            print(f"ok      {fname}")
        else:
            failed += 1
            print(f"DIFF    {fname}")
            sys.stdout.writelines(difflib.unified_diff(want.splitlines(True), text.splitlines(True), "golden", "computed"))
    if not args.update:
        for line in reference_notes(base):
            print(f"note: {line}")
    return EXIT_INVALID if failed else EXIT_OK


# --- parser -------------------------------------------------------------------

def _cap(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("cap must be at least 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lensgrid", description="Grid homology and HOMFLY-PT skein calculus for links in lens spaces.")
    sub = ap.add_subparsers(dest="command", required=True)
    fmt = dict(choices=["text", "csv", "json"], default="text")

    s = sub.add_parser("validate", help="check a diagram file")
    s.add_argument("file")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("components", help="trace link components and homology classes")
    s.add_argument("file")
    s.add_argument("--format", **fmt)
    s.set_defaults(func=cmd_components)

    s = sub.add_parser("gradings", help="spin, Maslov and Alexander degrees of every generator")
    s.add_argument("file")
    s.add_argument("--format", **fmt)
    s.add_argument("--cap", type=_cap)
    s.add_argument("--alexander", choices=NORMALIZATIONS, default="standard", help="Alexander normalization")
    s.set_defaults(func=cmd_gradings)

    s = sub.add_parser("homology", help="GF(2) homology of the grid complex")
    s.add_argument("file")
    s.add_argument("--format", **fmt)
    s.add_argument("--cap", type=_cap)
    s.add_argument("--check", action="append", choices=["d2", "orientation"])
    s.add_argument("--alexander", choices=NORMALIZATIONS, default="standard", help="Alexander normalization")
    s.set_defaults(func=cmd_homology)

    for name, func, helptext in (("lift", cmd_lift, "diagram of the lift to S^3"), ("reverse", cmd_reverse, "reverse the orientation")):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("file")
        s.add_argument("-o", "--output")
        s.set_defaults(func=func)

    s = sub.add_parser("move", help="apply a grid move")
    s.add_argument("file")
    s.add_argument("--op", required=True, choices=["stabilize", "destabilize", "commute", "cycle"])
    s.add_argument("--family", choices=["O", "X"], default="X")
    s.add_argument("--corner", choices=sorted(CORNERS), default="NW")
    s.add_argument("--marking", type=int, default=0)
    s.add_argument("--cell", help="lower-left cell 'a,b' of the block to destabilize")
    s.add_argument("--axis", choices=AXES, default="col")
    s.add_argument("--at", type=int, default=0)
    s.add_argument("--shift", type=int, default=1)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_move)

    s = sub.add_parser("trivial", help="build a trivial-link diagram")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--counts", required=True, help="comma-separated counts per class, ascending")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_trivial)

    s = sub.add_parser("homfly", help="HOMFLY-PT skein calculus")
    hs = s.add_subparsers(dest="homfly_cmd", required=True)
    e = hs.add_parser("eval", help="evaluate a skein script")
    e.add_argument("script")
    e.add_argument("--table")
    e.add_argument("--symbolic", action="store_true")
    r = hs.add_parser("reverse", help="reverse the orientation of an expression")
    r.add_argument("exprfile")
    s.set_defaults(func=cmd_homfly)

    s = sub.add_parser("reproduce-appendix", help="recompute the bundled fixtures and diff against golden files")
    s.add_argument("--data", help="alternative data directory")
    s.add_argument("--update", action="store_true", help="rewrite the golden files")
    s.set_defaults(func=cmd_reproduce)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except DiagramError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except MoveRefused as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
