"""Command-line pipeline: build codes, contract lattices, run checks.

One binary with four subcommands.  `build` assembles a code from factor
graphs and runs the requested tasks, `contract` performs edge
contraction chains with explicit stabilizer family choices, `distance`
runs the search methods on their own, and `inspect` summarizes a flag
graph without assembling a code.  Reports are JSON with sorted keys so
identical jobs produce identical bytes; seeds and budgets are embedded
in every report.  Exit codes: 0 success, 2 validation failure, 3 budget
exceeded.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

import numpy as np

from rainbow import __version__, gf2
from rainbow.assembly import (
    Assignment,
    AssemblyError,
    assemble,
    logical_basis,
    predicted_k,
)
from rainbow.contraction import (
    contract,
    contracted_code,
    contractibility_check,
)
from rainbow.distance import (
    DEFAULT_BUDGET,
    DistanceError,
    exact_distance_upto,
    isd_upper_bound,
)
from rainbow.graphs import GraphError, circuit_rank, parse_factor
from rainbow.products import (
    build_simplex_graph,
    cartesian_product,
    save_simplex,
)
from rainbow.strings import install_strings, labelled_interactions
from rainbow.subgraphs import clique_census
from rainbow.transversal import (
    TransversalError,
    ccz_interactions,
    check_triorthogonality,
    find_bipartition,
    orientation_bipartition,
)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_BUDGET = 3

TASKS = ("params", "logicals", "triorth", "distance", "contract", "export")
CENSUS_MAX_K = 64

_MULTIPLIER = re.compile(r"^[x×](\d+)$")


class CliError(ValueError):
    """Malformed command line or input file."""


def split_factor_specs(tokens) -> list[str]:
    """Lex factor tokens into one shorthand per factor.

    Tokens may pack several factors separated by commas; a bare integer
    piece continues the previous factor (so "kbip:4,4" survives the
    split) and "x3" repeats the previous factor three times in total.
    """
    pieces: list[str] = []
    for token in tokens:
        for piece in str(token).split(","):
            piece = piece.strip()
            if not piece:
                continue
            if piece.isdigit() and pieces and ":" in pieces[-1]:
                pieces[-1] += "," + piece
                continue
            m = _MULTIPLIER.match(piece)
            if m:
                if not pieces:
                    raise CliError(f"multiplier {piece!r} has no factor")
                pieces.extend([pieces[-1]] * (int(m.group(1)) - 1))
                continue
            pieces.append(piece)
    if not pieces:
        raise CliError("need at least one factor")
    return pieces


def parse_colour(token) -> int:
    text = str(token).strip().lower()
    if text.startswith("c"):
        text = text[1:]
    if not text.isdigit():
        raise CliError(f"bad colour {token!r}; use c0 or 0")
    return int(text)


def parse_colour_list(text: str) -> list[int]:
    colours = [parse_colour(t) for t in str(text).split(",") if t.strip()]
    if not colours:
        raise CliError(f"no colours in {text!r}")
    return colours


def load_families(path) -> list[dict]:
    """Read a stabilizer family file into a list of contraction stages.

    The file holds either a flat JSON list of families (one stage) or
    {"stages": [{"colours": [...], "families": [...]}, ...]} with
    cumulative colour sets.  A family is {"side": "X"|"Z", "colours":
    [...], "kind": "maximal"|"rainbow"}.
    """
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if isinstance(doc, dict) and "stages" in doc:
        stages = []
        previous: set[int] = set()
        for stage in doc["stages"]:
            colours = sorted(parse_colour(c) for c in stage["colours"])
            if not previous <= set(colours):
                raise CliError(
                    f"stage colours {colours} do not extend {sorted(previous)}"
                )
            stages.append(
                {
                    "colours": colours,
                    "families": _normalize_families(stage["families"]),
                }
            )
            previous = set(colours)
        if not stages:
            raise CliError("family file has an empty stage list")
        return stages
    if isinstance(doc, list):
        return [{"colours": None, "families": _normalize_families(doc)}]
    raise CliError("family file must be a list or a {'stages': [...]} object")


def _normalize_families(entries) -> list[dict]:
    families = []
    for entry in entries:
        side = str(entry["side"]).lower()
        if side not in ("x", "z"):
            raise CliError(f"family side must be X or Z, got {entry['side']!r}")
        families.append(
            {
                "side": side,
                "colours": sorted(parse_colour(c) for c in entry["colours"]),
                "kind": str(entry.get("kind", "maximal")).lower(),
            }
        )
    if not families:
        raise CliError("empty family list")
    return families


def load_bipartition(path, n: int):
    bits = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line not in ("0", "1"):
                raise CliError(f"bipartition lines must be 0 or 1, got {line!r}")
            bits.append(int(line))
    if len(bits) != n:
        raise CliError(f"bipartition file has {len(bits)} lines for n={n}")
    return bits


def write_alist(m, path) -> None:
    """Write a check matrix in the sparse alist text layout.

    First line is "n m" (columns then rows), then the maximum column
    and row degrees, the per-column and per-row degree lists, and the
    1-based index lists padded with zeros to the maximum degree.
    """
    cols = gf2.transpose(m)
    col_supports = [cols.row_support(i) for i in range(cols.nrows)]
    row_supports = [m.row_support(i) for i in range(m.nrows)]
    max_col = max((len(s) for s in col_supports), default=0)
    max_row = max((len(s) for s in row_supports), default=0)
    lines = [
        f"{m.ncols} {m.nrows}",
        f"{max_col} {max_row}",
        " ".join(str(len(s)) for s in col_supports),
        " ".join(str(len(s)) for s in row_supports),
    ]
    for supports, width in ((col_supports, max_col), (row_supports, max_row)):
        for s in supports:
            entries = [str(i + 1) for i in s] + ["0"] * (width - len(s))
            lines.append(" ".join(entries))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_dense(m, path) -> None:
    """Write a check matrix as plain 0/1 text, one row per line."""
    rows = m.to_dense()
    lines = ["".join("1" if b else "0" for b in row) for row in rows]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def emit_report(report: dict, out_dir) -> str:
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(text, encoding="utf-8")
    return text


def _build_graph(args):
    specs = split_factor_specs(args.factors)
    factors = [parse_factor(s) for s in specs]
    p = cartesian_product(factors)
    g = build_simplex_graph(p)
    return specs, factors, p, g


def _resolve_assignment(args, g) -> Assignment:
    d = g.n_colours - 1
    x = d if args.x is None else args.x
    z = 2 if args.z is None else args.z
    return Assignment(kind=args.kind, x=x, z=z)


def _params_report(code, specs, factors) -> dict:
    rx, rz = code.ranks()
    report = {
        "n": code.n,
        "k": code.k,
        "rank_x": rx,
        "rank_z": rz,
        "rows_x": code.hx.nrows,
        "rows_z": code.hz.nrows,
        "max_generator_weight": code.generator_weight_max(),
        "factors": specs,
        "predicted_k": None,
    }
    a = code.assignment
    if a is not None and a.kind != "pin":
        try:
            report["predicted_k"] = predicted_k(
                a, [circuit_rank(f) for f in factors], len(factors)
            )
        except AssemblyError:
            pass
    return report


def _bipartition_for(args, g, p):
    if getattr(args, "bipartition", None):
        return load_bipartition(args.bipartition, g.n_flags), "file"
    try:
        return find_bipartition(g).a, "two-colouring"
    except GraphError:
        return orientation_bipartition(p).a, "orientation"


def _logicals_report(code, p):
    labels = None
    try:
        labels = install_strings(code, p)
    except AssemblyError:
        pass
    lx, lz = logical_basis(code)
    report = {
        "k": lx.nrows,
        "x_weights": lx.row_weights().tolist(),
        "z_weights": lz.row_weights().tolist(),
        "string_labels": None if labels is None else [repr(s) for s in labels],
    }
    return report, labels


def _triorth_report(code, a, source, labels) -> dict:
    triorth = check_triorthogonality(code, a)
    conditions = []
    for c in triorth.conditions:
        entry = {"number": c.number, "ok": c.ok, "note": c.note}
        if c.counterexample is not None:
            entry["counterexample"] = list(c.counterexample)
        conditions.append(entry)
    ones = int(np.count_nonzero(np.asarray(a)))
    report = {
        "bipartition_source": source,
        "halves": [len(a) - ones, ones],
        "conditions": conditions,
        "gate_found": triorth.gate_found,
        "interactions": None,
    }
    if triorth.gate_found and code.k <= CENSUS_MAX_K:
        if labels is not None:
            triples = [
                [repr(x) for x in t]
                for t in labelled_interactions(code, a, labels)
            ]
        else:
            triples = [list(t) for t in ccz_interactions(code, a)]
        report["interactions"] = triples
    elif triorth.gate_found:
        report["note"] = (
            f"interaction census skipped for k={code.k} > {CENSUS_MAX_K}"
        )
    return report


def _distance_report(report_obj) -> dict:
    return {
        "side": report_obj.side,
        "method": report_obj.method,
        "exact_floor": report_obj.exact_floor,
        "best_upper": report_obj.best_upper,
        "witness": None
        if report_obj.witness is None
        else list(report_obj.witness),
        "certified": report_obj.certified,
        "wmax": report_obj.wmax,
        "iterations": report_obj.iterations,
        "seed": report_obj.seed,
    }


def _run_distance(code, args) -> dict:
    iterations = getattr(args, "isd_iterations", 0) or 0
    if getattr(args, "method", None) == "isd":
        iterations = iterations or args.iterations
    if iterations:
        rep = isd_upper_bound(
            code, side=args.side, iterations=iterations, seed=args.seed
        )
    else:
        rep = exact_distance_upto(
            code, side=args.side, wmax=args.wmax, budget=args.budget
        )
    return _distance_report(rep)


def _run_contract(g, stages, wmax: int, budget: int) -> dict:
    """Contract through cumulative colour stages and assemble each code."""
    screening = {}
    stage_reports = []
    cg = None
    done: list[int] = []
    for stage in stages:
        colours = stage["colours"]
        for c in colours:
            if c in done:
                continue
            report = contractibility_check(g, c)
            screening[f"c{c}"] = {
                "ok": report.ok,
                "violations": len(report.violations),
            }
            cg = contract(cg if cg is not None else g, c)
            done.append(c)
        spec = [(f["side"], f["colours"], f["kind"]) for f in stage["families"]]
        code = contracted_code(cg, spec)
        rx, rz = code.ranks()
        stage_reports.append(
            {
                "colours": [f"c{c}" for c in done],
                "n": code.n,
                "k": code.k,
                "rank_x": rx,
                "rank_z": rz,
                "families": stage["families"],
            }
        )
    result = {"screening": screening, "stages": stage_reports}
    if wmax:
        rep = exact_distance_upto(code, side="both", wmax=wmax, budget=budget)
        result["distance"] = _distance_report(rep)
    return result


def _stages_from_args(args) -> list[dict]:
    if not getattr(args, "families", None):
        raise CliError("contraction needs --families <file>")
    stages = load_families(args.families)
    colours_arg = getattr(args, "colours", None)
    if stages[0]["colours"] is None:
        if not colours_arg:
            raise CliError("a flat family list needs --colours")
        stages[0]["colours"] = sorted(parse_colour_list(colours_arg))
    elif colours_arg:
        final = sorted(parse_colour_list(colours_arg))
        if final != stages[-1]["colours"]:
            raise CliError(
                f"--colours {final} conflicts with the final stage "
                f"{stages[-1]['colours']}"
            )
    return stages


def _export(code, g, args, report) -> list[str]:
    if args.out is None:
        raise CliError("export needs --out <directory>")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, matrix in (("hx", code.hx), ("hz", code.hz)):
        write_alist(matrix, out / f"{name}.alist")
        written.append(f"{name}.alist")
        write_dense(matrix, out / f"{name}.txt")
        written.append(f"{name}.txt")
    if getattr(args, "dump_graph", False):
        path = out / "simplex.json"
        save_simplex(g, path)
        written.append("simplex.json")
    return written


def _spec_echo(args, specs) -> dict:
    echo = {"command": args.command, "factors": specs}
    for key in ("kind", "x", "z", "side", "wmax", "seed"):
        if hasattr(args, key):
            echo[key] = getattr(args, key)
    if hasattr(args, "tasks"):
        echo["tasks"] = args.tasks
    return echo


def run_build(args) -> dict:
    tasks = [t.strip() for t in args.tasks.split(",") if t.strip()]
    for t in tasks:
        if t not in TASKS:
            raise CliError(f"unknown task {t!r}; expected subset of {TASKS}")
    if not tasks:
        raise CliError("need at least one task")
    specs, factors, p, g = _build_graph(args)
    a = _resolve_assignment(args, g)
    code = assemble(g, a)
    report: dict = {
        "version": __version__,
        "spec": _spec_echo(args, specs),
        "assignment": {"class": a.kind, "x": a.x, "z": a.z},
    }
    labels = None
    if "params" in tasks:
        report["params"] = _params_report(code, specs, factors)
    if "logicals" in tasks:
        report["logicals"], labels = _logicals_report(code, p)
    if "triorth" in tasks:
        bits, source = _bipartition_for(args, g, p)
        report["triorth"] = _triorth_report(code, bits, source, labels)
    if "distance" in tasks:
        report["distance"] = _run_distance(code, args)
    if "contract" in tasks:
        stages = _stages_from_args(args)
        report["contract"] = _run_contract(
            g, stages, getattr(args, "contract_wmax", 0), args.budget
        )
    if "export" in tasks:
        report["exports"] = _export(code, g, args, report)
    return report


def run_contract(args) -> dict:
    specs, factors, p, g = _build_graph(args)
    stages = _stages_from_args(args)
    report = {
        "version": __version__,
        "spec": _spec_echo(args, specs),
        "contract": _run_contract(g, stages, args.wmax, args.budget),
    }
    return report


def run_distance(args) -> dict:
    specs, factors, p, g = _build_graph(args)
    a = _resolve_assignment(args, g)
    code = assemble(g, a)
    report = {
        "version": __version__,
        "spec": _spec_echo(args, specs),
        "assignment": {"class": a.kind, "x": a.x, "z": a.z},
        "params": _params_report(code, specs, factors),
        "distance": _run_distance(code, args),
    }
    return report


def run_inspect(args) -> dict:
    specs, factors, p, g = _build_graph(args)
    factor_info = [
        {
            "spec": spec,
            "vertices": f.n_vertices,
            "levels": list(f.level_counts()),
            "circuit_rank": circuit_rank(f),
        }
        for spec, f in zip(specs, factors)
    ]
    try:
        find_bipartition(g)
        bipartite = True
    except GraphError:
        bipartite = False
    report = {
        "version": __version__,
        "spec": _spec_echo(args, specs),
        "factors": factor_info,
        "n_flags": g.n_flags,
        "n_colours": g.n_colours,
        "bipartite": bipartite,
        "clique_census": {
            f"c{c}": {str(size): count for size, count in sorted(cc.items())}
            for c in range(g.n_colours)
            for cc in (clique_census(g, c),)
        },
        "contractibility": {
            f"c{c}": contractibility_check(g, c).ok
            for c in range(g.n_colours)
        },
    }
    if args.out is not None and getattr(args, "dump_graph", False):
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        save_simplex(g, out / "simplex.json")
        report["exports"] = ["simplex.json"]
    return report


def _add_factor_args(sub) -> None:
    sub.add_argument(
        "--factors",
        nargs="+",
        required=True,
        help="factor shorthands or graph files; comma or space separated, "
        "xN repeats the previous factor",
    )
    sub.add_argument("--out", default=None, help="directory for report.json and exports")


def _add_assignment_args(sub) -> None:
    sub.add_argument(
        "--class",
        dest="kind",
        default="generic",
        choices=("pin", "generic", "anti_generic", "mixed"),
        help="stabilizer family class",
    )
    sub.add_argument("--x", type=int, default=None, help="X family size (default: D)")
    sub.add_argument("--z", type=int, default=None, help="Z family size (default: 2)")


def _add_distance_args(sub) -> None:
    sub.add_argument("--side", default="both", choices=("x", "z", "both"))
    sub.add_argument("--wmax", type=int, default=4, help="exhaustive sweep cutoff")
    sub.add_argument("--seed", type=int, default=0, help="sampling seed")
    sub.add_argument(
        "--budget",
        type=int,
        default=DEFAULT_BUDGET,
        help="candidate budget for exhaustive sweeps",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rainbow",
        description="rainbow code construction pipeline "
        "(RAINBOW_THREADS caps worker threads)",
    )
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    build = subs.add_parser("build", help="assemble a code and run tasks")
    _add_factor_args(build)
    _add_assignment_args(build)
    _add_distance_args(build)
    build.add_argument(
        "--tasks",
        default="params",
        help=f"comma list from {','.join(TASKS)}",
    )
    build.add_argument(
        "--isd-iterations",
        type=int,
        default=0,
        help="run sampling instead of the exhaustive sweep",
    )
    build.add_argument(
        "--bipartition",
        default=None,
        help="file with one 0/1 line per qubit overriding the computed split",
    )
    build.add_argument("--colours", default=None, help="colours for the contract task")
    build.add_argument("--families", default=None, help="family file for the contract task")
    build.add_argument(
        "--contract-wmax",
        type=int,
        default=0,
        help="exhaustive sweep cutoff on the final contracted code",
    )
    build.add_argument(
        "--dump-graph",
        action="store_true",
        help="also export the simplex graph as JSON",
    )

    cont = subs.add_parser("contract", help="edge contraction chain")
    _add_factor_args(cont)
    cont.add_argument("--colours", default=None, help="comma list, e.g. c0,c3")
    cont.add_argument("--families", required=True, help="family file (list or stages)")
    cont.add_argument("--wmax", type=int, default=0, help="sweep cutoff on the final code")
    cont.add_argument("--budget", type=int, default=DEFAULT_BUDGET)

    dist = subs.add_parser("distance", help="distance search on a built code")
    _add_factor_args(dist)
    _add_assignment_args(dist)
    _add_distance_args(dist)
    dist.add_argument("--method", default="exact", choices=("exact", "isd"))
    dist.add_argument("--iterations", type=int, default=1000, help="sampling iterations")

    insp = subs.add_parser("inspect", help="summarize a flag graph")
    _add_factor_args(insp)
    insp.add_argument("--dump-graph", action="store_true")
    return parser


RUNNERS = {
    "build": run_build,
    "contract": run_contract,
    "distance": run_distance,
    "inspect": run_inspect,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = RUNNERS[args.command](args)
    except DistanceError as exc:
        code = EXIT_BUDGET if exc.required is not None else EXIT_VALIDATION
        print(f"error: {exc}", file=sys.stderr)
        return code
    except (
        CliError,
        GraphError,
        AssemblyError,
        TransversalError,
        json.JSONDecodeError,
        OSError,
        KeyError,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    text = emit_report(report, args.out)
    sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
