"""Command-line experiment driver.

Every subcommand prints a table (default), CSV or JSON.  Randomised
sampling uses Python's ``random.Random`` (Mersenne Twister) seeded with
``--seed``, so identical arguments give byte-identical output.

Exit codes: 0 ok, 1 verification failure, 2 usage / parse error,
3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
import tempfile
import time
from pathlib import Path

from . import colorings as col
from . import covfun, graphperf, homog, lipfn, rado
from .errors import ParseError, ResourceError, UsageError
from .seqspace import TruncatedSpace, format_point, parse_space

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3

GRAPH_NAMES = {
    "K2": lambda: graphperf.complete_graph(2),
    "K3": lambda: graphperf.complete_graph(3),
    "K4": lambda: graphperf.complete_graph(4),
    "E2": lambda: rado.FiniteGraph(2),
    "P3": lambda: rado.FiniteGraph(3, [(0, 1), (1, 2)]),
    "C4": lambda: graphperf.cycle_graph(4),
    "C5": lambda: graphperf.cycle_graph(5),
    "C7": lambda: graphperf.cycle_graph(7),
}


def parse_range(text: str) -> list[int]:
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
            if hi < lo:
                raise ValueError
            return list(range(lo, hi + 1))
        return [int(text)]
    except ValueError:
        raise UsageError(f"bad range {text!r} (expected N or A..B)") from None


# -- colorings by name ------------------------------------------------------


def coloring_spec(name: str, depth: int) -> dict:
    if name.startswith("table:"):
        return {"coloring": "table", "table": name[len("table:"):]}
    if name == "ars":
        return {"coloring": "ars", "n": depth}
    profile = {"cmin": "binary", "cmax": "factorial", "cparity": "factorial",
               "crandom": "factorial"}.get(name)
    if profile is None:
        raise UsageError(f"unknown coloring {name!r}")
    return {"coloring": name, "space": f"{profile}:{depth}"}


def build_coloring(spec: dict) -> col.PairColoring:
    kind = spec.get("coloring")
    if kind == "table":
        path = spec["table"]
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc}") from None
        return col.PairColoring.from_table_text(text, name=f"table:{path}")
    if kind == "ars":
        return col.ars_coloring(int(spec["n"]))
    space = parse_space(spec["space"])
    if kind == "cmin":
        return col.c_min(space)
    if kind == "cmax":
        return col.c_max(space.depth)
    if kind == "cparity":
        return col.c_parity(space)
    if kind == "crandom":
        return col.c_random_coloring(space)
    raise UsageError(f"unknown coloring {kind!r}")


def _colorings(args):
    if args.table:
        yield None, {"coloring": "table", "table": args.table}
        return
    sizes = parse_range(args.n) if args.coloring == "ars" and args.n else parse_range(args.depth)
    for d in sizes:
        yield d, coloring_spec(args.coloring, d)


# -- output -----------------------------------------------------------------


def render(rows: list[dict], columns: list[str], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n", extrasaction="ignore")
        w.writeheader()
        for r in rows:
            w.writerow({k: r.get(k, "") for k in columns})
        return buf.getvalue()
    cells = [[str(r.get(k, "")) for k in columns] for r in rows]
    widths = [max([len(c)] + [len(row[i]) for row in cells]) for i, c in enumerate(columns)]
    lines = ["  ".join(c.rjust(w) for c, w in zip(columns, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(v.rjust(w) for v, w in zip(row, widths)) for row in cells]
    return "\n".join(lines) + "\n"


def write_atomic(path: str, text: str):
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=target.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit(args, rows, columns):
    text = render(rows, columns, args.format)
    if args.out:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)


def _cert_path(args, stem):
    if not args.cert_dir:
        return None
    return str(Path(args.cert_dir) / f"{stem}.json")


# -- subcommands ------------------------------------------------------------


def cmd_hm(args):
    rows = []
    for d, spec in _colorings(args):
        c = build_coloring(spec)
        row = {"coloring": spec["coloring"], "depth": "" if d is None else d, "points": c.n}
        t0 = time.perf_counter()
        try:
            k, cert = homog.hm_exact(c, cap=args.cap or homog.DEFAULT_SOLVER_CAP)
            row["hm"] = k
            row["lower_bound"] = homog.hom_cover_lower_bound(c)
            path = _cert_path(args, f"hm_{spec['coloring']}_{d}")
            if path:
                doc = cert.to_json()
                doc["coloring"] = spec
                write_atomic(path, homog.dumps_certificate(doc))
        except ResourceError:
            row["hm"] = "cap"
            row["lower_bound"] = ""
        if args.timing:
            row["seconds"] = f"{time.perf_counter() - t0:.3f}"
        rows.append(row)
    cols = ["coloring", "depth", "points", "hm", "lower_bound"] + (["seconds"] if args.timing else [])
    return rows, cols


def cmd_covlip(args):
    rows = []
    for d in parse_range(args.depth):
        row = {"a_exp": args.a_exp, "b_exp": args.b_exp, "depth": d}
        try:
            k, cover = lipfn.cov_lip_exact(args.a_exp, args.b_exp, d,
                                           cap=args.cap or lipfn.DEFAULT_CANDIDATE_CAP)
            row["k"] = k
            path = _cert_path(args, f"covlip_{args.a_exp}_{args.b_exp}_{d}")
            if path:
                write_atomic(path, homog.dumps_certificate(cover.to_json()))
        except ResourceError:
            row["k"] = "cap"
        rows.append(row)
    return rows, ["a_exp", "b_exp", "depth", "k"]


def cmd_covfn(args):
    rows = []
    for n in parse_range(args.n):
        row = {"n": n, "class_bound": covfun.class_lower_bound(n),
               "construction": len(covfun.surjection_cover(n).functions) if n >= 1 else 0}
        try:
            k, fam = covfun.min_fn_cover(n, max_n=args.cap or covfun.MAX_EXACT_N)
            row["min_k"] = k
            path = _cert_path(args, f"covfn_{n}")
            if path:
                doc = {"kind": "covfn", "n": n, "k": k, "functions": [list(f) for f in fam.functions]}
                write_atomic(path, homog.dumps_certificate(doc))
        except ResourceError:
            row["min_k"] = "cap"
        rows.append(row)
    return rows, ["n", "min_k", "class_bound", "construction"]


def cmd_norm(args):
    rows = []
    for d, spec in _colorings(args):
        c = build_coloring(spec)
        rows.append({"coloring": spec["coloring"], "depth": "" if d is None else d,
                     "points": c.n, "norm": rado.norm(c)})
    return rows, ["coloring", "depth", "points", "norm"]


def cmd_perfect(args):
    rng = random.Random(args.seed)
    rows = []
    for d in parse_range(args.depth):
        space = TruncatedSpace.binary(d) if args.coloring == "cmin" else TruncatedSpace.factorial(d)
        if args.coloring in ("cmin", "cparity"):
            color = col.parity_color
        elif args.coloring in ("cmax", "crandom"):
            color = col.c_random_color
        else:
            raise UsageError(f"perfect supports cmin|cparity|cmax|crandom, not {args.coloring!r}")
        for s in range(args.samples):
            pts = sorted({tuple(rng.randrange(a) for a in space.arities) for _ in range(args.size)})
            c = col.PairColoring.from_function(pts, color)
            G = c.graph()
            res = graphperf.is_perfect(G)
            row = {"coloring": args.coloring, "depth": d, "sample": s, "points": len(pts),
                   "omega": graphperf.clique_number(G), "chi": graphperf.chromatic_number(G),
                   "perfect": int(res.perfect)}
            if args.coloring in ("cmin", "cparity"):
                row["mirsky"] = max(graphperf.mirsky_antichain_cover(graphperf.lex_poset(pts)), default=0)
            rows.append(row)
    return rows, ["coloring", "depth", "sample", "points", "omega", "chi", "mirsky", "perfect"]


def _load_graph(args):
    if args.graph in GRAPH_NAMES:
        return GRAPH_NAMES[args.graph]()
    try:
        return rado.FiniteGraph.from_text(Path(args.graph).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read graph {args.graph}: {exc}") from None


def cmd_embed(args):
    G = _load_graph(args)
    pts = graphperf.realize_graph_in_cmax(G, max_depth=args.max_depth)
    if pts is None:
        raise ResourceError(f"no realisation within depth {args.max_depth}")
    depth = len(pts[0])
    space = TruncatedSpace.factorial(depth)
    c = col.PairColoring.from_function(pts, col.c_random_color)
    ok = c.graph() == G
    rows = [{"vertex": v, "label": p[-1], "depth": depth, "point": format_point(p, space), "verified": int(ok)}
            for v, p in enumerate(pts)]
    return rows, ["vertex", "label", "depth", "point", "verified"]


def cmd_rado(args):
    rows = []
    if args.witness is not None:
        u_text, _, v_text = args.witness.partition(";")
        U = [int(t) for t in u_text.split(",") if t.strip()]
        V = [int(t) for t in v_text.split(",") if t.strip()]
        z = rado.extension_witness(U, V)
        rows.append({"U": " ".join(map(str, U)), "V": " ".join(map(str, V)), "witness": z})
        return rows, ["U", "V", "witness"]
    for b in range(args.n):
        for a in range(b):
            rows.append({"a": a, "b": b, "edge": rado.rado_edge(a, b)})
    return rows, ["a", "b", "edge"]


def verify_document(doc: dict, base: Path | None = None) -> bool:
    kind = doc.get("kind")
    if kind == "hm":
        spec = doc["coloring"]
        if not isinstance(spec, dict):
            raise UsageError("hm certificate lacks a coloring spec")
        spec = dict(spec)
        if spec.get("coloring") == "table" and base is not None and not Path(spec["table"]).is_absolute():
            candidate = base / spec["table"]
            if candidate.exists():
                spec["table"] = str(candidate)
        c = build_coloring(spec)
        return homog.CoverCertificate.from_json(doc, c).verify()
    if kind == "covlip":
        cover = lipfn.LipCover.from_json(doc)
        return cover.verify()
    if kind == "covfn":
        fam = covfun.FnFamily.of(int(doc["n"]), doc["functions"])
        return fam.covers() and int(doc["k"]) == len(fam)
    raise UsageError(f"unknown certificate kind {kind!r}")


def cmd_verify(args):
    path = Path(args.cert)
    try:
        doc = json.loads(path.read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    try:
        ok = verify_document(doc, path.parent)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, UsageError):
            raise
        raise ParseError(f"malformed certificate: {exc!r}") from None
    rows = [{"certificate": path.name, "kind": doc.get("kind"), "k": doc.get("k"), "valid": int(ok)}]
    return rows, ["certificate", "kind", "k", "valid"], ok


SUITE = [
    ("hm_cmin", ["hm", "--coloring", "cmin", "--depth", "2..4"]),
    ("hm_cmax", ["hm", "--coloring", "cmax", "--depth", "2..4"]),
    ("hm_ars", ["hm", "--coloring", "ars", "--n", "1..3"]),
    ("covlip", ["covlip", "--a-exp", "0", "--b-exp", "-1", "--depth", "1..2"]),
    ("covlip_neg", ["covlip", "--a-exp", "-1", "--b-exp", "-1", "--depth", "1..2"]),
    ("covfn", ["covfn", "--n", "1..5"]),
    ("norm_cmax", ["norm", "--coloring", "cmax", "--depth", "2..4"]),
    ("perfect_cmin", ["perfect", "--coloring", "cmin", "--depth", "6", "--samples", "10", "--size", "8"]),
    ("perfect_cmax", ["perfect", "--coloring", "cmax", "--depth", "6", "--samples", "10", "--size", "8"]),
    ("embed_c5", ["embed", "--graph", "C5"]),
    ("rado_n6", ["rado", "--n", "6"]),
]


def cmd_suite(args):
    out_dir = Path(args.out_dir)
    rows = []
    for name, argv in SUITE:
        for fmt in ("csv", "json"):
            extra = ["--format", fmt, "--out", str(out_dir / f"{name}.{fmt}")]
            if argv[0] in ("perfect",):
                extra += ["--seed", str(args.seed)]
            if argv[0] in ("hm", "covlip", "covfn") and fmt == "json":
                extra += ["--cert-dir", str(out_dir / "certs")]
            code = main(argv + extra)
            if code != EXIT_OK:
                raise ResourceError(f"suite step {name} failed with exit code {code}")
        rows.append({"experiment": name, "csv": f"{name}.csv", "json": f"{name}.json"})
    return rows, ["experiment", "csv", "json"]


# -- argument parsing -------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="cantorhm",
        description="Finite-depth experiments on pair-colorings of Cantor/Baire space.",
        epilog="Random sampling uses random.Random(--seed) (Mersenne Twister); same seed, same output.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["table", "csv", "json"], default="table")
    common.add_argument("--out", help="write output here (atomically) instead of stdout")
    common.add_argument("--seed", type=int, default=0, help="64-bit seed for random.Random")
    common.add_argument("--cap", type=int, default=None, help="solver cap (meaning depends on command)")
    sub = p.add_subparsers(dest="command", required=True)

    def colored(sp):
        sp.add_argument("--coloring", default="cmin",
                        help="cmin|cparity|cmax|crandom|ars|table:<path>")
        sp.add_argument("--depth", default="2", help="N or A..B")
        sp.add_argument("--n", default=None, help="grid size for ars (N or A..B)")
        sp.add_argument("--table", default=None, help="coloring table file (same as table:<path>)")

    sp = sub.add_parser("hm", parents=[common], help="exact homogeneity numbers")
    colored(sp)
    sp.add_argument("--cert-dir", default=None, help="write one JSON certificate per row here")
    sp.add_argument("--timing", action="store_true", help="add a wall-clock seconds column")
    sp.set_defaults(func=cmd_hm)

    sp = sub.add_parser("covlip", parents=[common], help="exact Lipschitz covering numbers")
    sp.add_argument("--a-exp", type=int, default=0)
    sp.add_argument("--b-exp", type=int, default=-1)
    sp.add_argument("--depth", default="1")
    sp.add_argument("--cert-dir", default=None)
    sp.set_defaults(func=cmd_covlip)

    sp = sub.add_parser("covfn", parents=[common], help="least function covers of n x n")
    sp.add_argument("--n", default="1..5")
    sp.add_argument("--cert-dir", default=None)
    sp.set_defaults(func=cmd_covfn)

    sp = sub.add_parser("norm", parents=[common], help="Rado norm of a coloring")
    colored(sp)
    sp.set_defaults(func=cmd_norm)

    sp = sub.add_parser("perfect", parents=[common], help="perfection of sampled induced graphs")
    sp.add_argument("--coloring", default="cmin")
    sp.add_argument("--depth", default="6")
    sp.add_argument("--samples", type=int, default=10)
    sp.add_argument("--size", type=int, default=8)
    sp.set_defaults(func=cmd_perfect)

    sp = sub.add_parser("embed", parents=[common], help="realise a graph inside c_max")
    sp.add_argument("--graph", default="C5", help=f"{'|'.join(GRAPH_NAMES)} or a graph file")
    sp.add_argument("--max-depth", type=int, default=40)
    sp.set_defaults(func=cmd_embed)

    sp = sub.add_parser("rado", parents=[common], help="Rado edges or an extension witness")
    sp.add_argument("--n", type=int, default=4)
    sp.add_argument("--witness", default=None, help="'U;V' comma lists, e.g. '0,1;2'")
    sp.set_defaults(func=cmd_rado)

    sp = sub.add_parser("verify", parents=[common], help="re-check a JSON certificate")
    sp.add_argument("cert")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("suite", parents=[common], help="run the full experiment suite")
    sp.add_argument("--out-dir", required=True)
    sp.set_defaults(func=cmd_suite)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "coloring", "").startswith("table:"):
        args.table = args.coloring[len("table:"):]
        args.coloring = "table"
    try:
        result = args.func(args)
        ok = True
        if len(result) == 3:
            rows, columns, ok = result
        else:
            rows, columns = result
        emit(args, rows, columns)
        return EXIT_OK if ok else EXIT_VERIFY
    except ResourceError as exc:
        print(f"cantorhm: resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except UsageError as exc:
        print(f"cantorhm: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
