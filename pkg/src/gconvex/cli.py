"""Command-line front end.

    gfan enumerate --rank 3 --out reports/ --jobs 4
    gfan check fan.json [--json]
    gfan orthant 121 110 1 [--svg frag.svg]
    gfan reduce fan.json 1 -2 0
    gfan catalog-export --out reports/
    gfan render d5 --out d5.svg

Exit codes: 0 ok, 2 validation failure, 3 count mismatch, 4 I/O error,
5 parse error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import catalog, classify, reduction
from .datum import MutationDatum
from .fan import Fan, StructuralError, UnsupportedError, validate

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_COUNT = 3
EXIT_IO = 4
EXIT_PARSE = 5


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


# -- io helpers ----------------------------------------------------------------


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def write_text(path: Path, text: str) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror}", EXIT_IO) from exc


def read_fan(path: str) -> Fan:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}", EXIT_IO) from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}", EXIT_PARSE) from exc
    if isinstance(data, dict) and "fan" in data and "rays" not in data:
        data = data["fan"]
    if not isinstance(data, dict) or "rays" not in data or "max_cones" not in data:
        raise CliError(f"{path}: expected an object with 'rays' and 'max_cones'", EXIT_PARSE)
    try:
        return Fan.from_dict(data)
    except (TypeError, ValueError) as exc:
        raise CliError(f"{path}: {exc}", EXIT_VALIDATION) from exc


def parse_triple(text: str) -> MutationDatum:
    try:
        return MutationDatum.parse(text)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_PARSE) from exc


def parse_ray(tokens: Sequence[str]) -> tuple[int, ...]:
    parts = [p for t in tokens for p in t.replace(",", " ").split()]
    try:
        return tuple(int(p) for p in parts)
    except ValueError as exc:
        raise CliError(f"cannot read a ray from {' '.join(tokens)!r}", EXIT_PARSE) from exc


# -- svg ------------------------------------------------------------------------

# e1 to the lower left, e2 to the right, e3 up
AXO = ((-0.82, -0.57), (1.0, 0.0), (0.0, 1.0))


def _xy(v: Sequence[int], scale: float) -> tuple[float, float]:
    x = sum(c * a[0] for c, a in zip(v, AXO)) * scale
    y = sum(c * a[1] for c, a in zip(v, AXO)) * scale
    return x, -y


def render_svg(f: Fan, scale: float = 60.0, title: str = "") -> str:
    """Edges of every maximal cone drawn between its ray generators."""
    if f.rank != 3:
        raise CliError("only rank-3 fans can be rendered", EXIT_VALIDATION)
    pts = [_xy(r, scale) for r in f.rays]
    axes = [_xy(tuple(2 * int(i == j) for j in range(3)), scale) for i in range(3)]
    allx = [p[0] for p in pts + axes] + [-a[0] for a in axes]
    ally = [p[1] for p in pts + axes] + [-a[1] for a in axes]
    pad = 20.0
    x0, y0 = min(allx) - pad, min(ally) - pad
    w, h = max(allx) - x0 + pad, max(ally) - y0 + pad
    out = [
        '<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{x0:.2f} {y0:.2f} {w:.2f} {h:.2f}" width="{w:.0f}" height="{h:.0f}">'
    ]
    if title:
        out.append(f"<title>{title}</title>")
    for k, (ax, ay) in enumerate(axes):
        out.append(
            f'<line x1="{-ax:.2f}" y1="{-ay:.2f}" x2="{ax:.2f}" y2="{ay:.2f}" '
            'stroke="#bbb" stroke-width="0.8"/>'
        )
        out.append(f'<text x="{ax:.2f}" y="{ay:.2f}" font-size="10" fill="#888">e{k + 1}</text>')
    edges = sorted({tuple(sorted(p)) for c in f.max_cones for p in
                    ((c[0], c[1]), (c[0], c[2]), (c[1], c[2]))})
    for a, b in edges:
        (xa, ya), (xb, yb) = pts[a], pts[b]
        out.append(
            f'<line x1="{xa:.2f}" y1="{ya:.2f}" x2="{xb:.2f}" y2="{yb:.2f}" '
            'stroke="#3a6ea5" stroke-width="1.5"/>'
        )
    out.append('<circle cx="0.00" cy="0.00" r="2" fill="#000"/>')
    for k, (x, y) in enumerate(pts):
        out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="4" fill="#666"/>')
        label = ",".join(str(c) for c in f.rays[k])
        out.append(f'<text x="{x + 5:.2f}" y="{y - 5:.2f}" font-size="9">{k + 1}: ({label})</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


# -- subcommands ------------------------------------------------------------------


def cmd_enumerate(args) -> int:
    out = Path(args.out)
    if args.rank == 2:
        rep = classify.enumerate_rank2()
        data = rep.to_dict()
        write_text(out / "rank2_report.json", dumps(data))
        got, want = (data["fan_count"], data["class_count"]), (16, 7)
        if got != want:
            diff = {"fan_count": [16, got[0]], "class_count": [7, got[1]]}
            write_text(out / "count_diff.json", dumps(diff))
            print(f"count mismatch: {diff}", file=sys.stderr)
            return EXIT_COUNT
        print(f"rank 2: {got[0]} convex fans in {got[1]} classes")
        return EXIT_OK

    rep = classify.enumerate_rank3(jobs=args.jobs, analyze=True)
    data = rep.to_dict()
    data["reduction_templates"] = reduction.template_frequencies([c.fan for c in rep.realizable])
    write_text(out / "rank3_report.json", dumps(data))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["datum", "ray_count", "cone_count", "realizable"])
    w.writerows(rep.summary_rows())
    write_text(out / "rank3_summary.csv", buf.getvalue())
    try:
        rep.check()
    except classify.CountMismatch as exc:
        write_text(out / "count_diff.json", dumps({k: list(v) for k, v in exc.diffs.items()}))
        print(f"count mismatch: {exc}", file=sys.stderr)
        return EXIT_COUNT
    c = rep.counts()
    print(
        f"rank 3: {rep.admissible_count} admissible data, {c['candidate_orbits']} orbits, "
        f"{c['realizable']} realizable, {c['excluded']} excluded"
    )
    return EXIT_OK


def check_report(f: Fan) -> dict:
    try:
        flags = classify.analyze_fan(f)
    except UnsupportedError as exc:
        raise CliError(str(exc), EXIT_VALIDATION) from exc
    failures = list(validate(f).failures)
    required = [k for k in classify.REQUIRED_FLAGS]
    for k in required:
        if not flags.get(k, False):
            failures.append(f"{k} failed")
    return {"ok": not failures, "flags": flags, "failures": failures}


def cmd_check(args) -> int:
    rep = check_report(read_fan(args.fan))
    if args.json:
        sys.stdout.write(dumps(rep))
    else:
        for k, v in rep["flags"].items():
            print(f"{k:24s} {'pass' if v else 'FAIL'}")
        for msg in rep["failures"]:
            print(f"  - {msg}")
        print("all checks pass" if rep["ok"] else "some checks failed")
    return EXIT_OK if rep["ok"] else EXIT_VALIDATION


def cmd_orthant(args) -> int:
    d12, d32 = parse_triple(args.d12), parse_triple(args.d32)
    fid = catalog.orthant_id_for(d12, d32, args.h13)
    if fid is None:
        raise CliError(f"({d12}, {d32}) is not a convex g-fan datum", EXIT_VALIDATION)
    f = catalog.orthant_fan(fid)
    doc = {"id": str(fid), "d12": list(d12), "d32": list(d32), **f.to_dict()}
    text = dumps(doc)
    if args.out:
        write_text(Path(args.out), text)
    else:
        sys.stdout.write(text)
    if args.svg:
        write_text(Path(args.svg), render_svg(f, args.scale, str(fid)))
    return EXIT_OK


def cmd_reduce(args) -> int:
    f = read_fan(args.fan)
    ray = parse_ray(args.ray)
    try:
        red = reduction.reduction(f, ray)
        p, q = reduction.maximal_paths_at_ray(f, ray)
        templates = list(reduction.match_template(p, q))
    except reduction.DomainError as exc:
        raise CliError(str(exc), EXIT_VALIDATION) from exc
    except StructuralError as exc:
        raise CliError(f"reduction at {ray}: {exc}", EXIT_VALIDATION) from exc

    def path_doc(path):
        return {
            "steps": [
                {"position": s.position, "exchanged": list(s.exchanged), "incoming": list(s.incoming),
                 "a": s.a, "b": s.b}
                for s in path.steps
            ],
            "text": str(path),
        }

    doc = {
        "ray": list(ray),
        "complement": [list(c) for c in red.complement],
        "fan": red.fan.to_dict(),
        "host_rays": [list(h) for h in red.host],
        "paths": [path_doc(p), path_doc(q)],
        "templates": templates,
    }
    sys.stdout.write(dumps(doc))
    return EXIT_OK


def cmd_catalog_export(args) -> int:
    write_text(Path(args.out) / "catalog.json", dumps(catalog.catalog_dict()))
    return EXIT_OK


def cmd_render(args) -> int:
    target = args.target
    if Path(target).suffix == ".json" or Path(target).exists():
        f, title = read_fan(target), Path(target).stem
    else:
        try:
            fid = catalog.OrthantFanId.parse(target)
        except ValueError as exc:
            raise CliError(f"{target!r} is neither a fan file nor a fragment name", EXIT_PARSE) from exc
        f, title = catalog.orthant_fan(fid), str(fid)
    svg = render_svg(f, args.scale, title)
    if args.out:
        write_text(Path(args.out), svg)
    else:
        sys.stdout.write(svg)
    return EXIT_OK


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gfan", description="Convex sign-coherent fans of rank 2 and 3.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="run the rank-2 or rank-3 enumeration")
    p.add_argument("--rank", type=int, choices=(2, 3), default=3)
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--jobs", type=int, default=None, help="worker processes (default: $GFAN_JOBS or 1)")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("check", help="validate a fan file")
    p.add_argument("fan")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("orthant", help="orthant fan of R^3_{+-+} for (d12, d32)")
    p.add_argument("d12", help="triple such as 121")
    p.add_argument("d32")
    p.add_argument("h13", nargs="?", type=int, choices=(0, 1), default=0)
    p.add_argument("--out")
    p.add_argument("--svg")
    p.add_argument("--scale", type=float, default=60.0)
    p.set_defaults(func=cmd_orthant)

    p = sub.add_parser("reduce", help="reduce a rank-3 fan at a ray")
    p.add_argument("fan")
    p.add_argument("ray", nargs="+", help="three integers, e.g. 1 -2 0")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("catalog-export", help="write catalog.json")
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_catalog_export)

    p = sub.add_parser("render", help="SVG of a fan file or of a fragment such as d5 or d10_1'")
    p.add_argument("target")
    p.add_argument("--out")
    p.add_argument("--scale", type=float, default=60.0)
    p.set_defaults(func=cmd_render)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "jobs", 0) is None:
        try:
            args.jobs = classify.default_jobs()
        except ValueError:
            print("GFAN_JOBS must be an integer", file=sys.stderr)
            return EXIT_PARSE
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
