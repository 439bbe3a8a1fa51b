"""Command line front end.

Exit codes: 0 success, 1 malformed input or usage, 2 degenerate or
non-generic data (including exhausted retry schedules and assembly
mismatches in user-supplied cells), 3 violated invariant (any failing
check in the verify suites).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import verify as verify_mod
from .errors import (
    AmbiguousNu,
    DegenerateConfiguration,
    DimensionMismatch,
    EmptySet,
    FaceMismatch,
    FlatFoliateError,
    GenericityExhausted,
    InvalidCounts,
    MalformedInput,
    MTooSmall,
    NonCommuting,
    NonGenericProbe,
    NonIntegralWinding,
    NotAFace,
    NotAntipodal,
    TooFewQuasisections,
    TypeMismatch,
    ZeroVector,
)
from .exactgeom import configuration_index
from .formats import (
    decay_row,
    format_fraction,
    load_configurations,
    load_points,
    write_crossings_json,
    write_decay_csv,
)
from .localformula import euler_number, sullivan_bound
from .toruslab import (
    decay_experiment,
    diagonal_pair,
    euler_estimate,
    folner_report,
    identity_pair,
    standard_rotation_pair,
    unipotent_pair,
)
from .triangulations import (
    ProductCell,
    assemble_triangulation,
    kuhn_triangulation,
    staircase_triangulation,
    triangulate_product_cell,
)

_MALFORMED = (
    MalformedInput,
    ZeroVector,
    DimensionMismatch,
    TypeMismatch,
    InvalidCounts,
    TooFewQuasisections,
    MTooSmall,
    NonCommuting,
    EmptySet,
)
_DEGENERATE = (
    DegenerateConfiguration,
    NonGenericProbe,
    NonIntegralWinding,
    GenericityExhausted,
    NotAntipodal,
    NotAFace,
    AmbiguousNu,
    FaceMismatch,
)


class _Parser(argparse.ArgumentParser):
    """argparse with usage failures mapped to exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma separated int list: {text!r}") from exc


def build_parser() -> _Parser:
    parser = _Parser(prog="flatfoliate", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("index", help="spherical configuration index of a tuple of rays")
    p.add_argument("--input", required=True, help='JSON file with {"points": [["p/q", ...], ...]}')

    p = sub.add_parser("formula", help="Euler number formula over a crossing list")
    p.add_argument("--input", required=True, help='JSON file with {"crossings": [{dim, bordered, regular}, ...]}')

    p = sub.add_parser("triangulate", help="canonical cell triangulations, emitted as JSON")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--cube", type=int, metavar="N", help="marked-pair triangulation of the N-cube")
    group.add_argument(
        "--staircase",
        nargs=2,
        type=int,
        metavar=("K", "M"),
        help="staircase triangulation of a product of two simplices",
    )
    group.add_argument(
        "--product",
        metavar="FILE",
        help="numbering-driven triangulation of one cell from a JSON cell file",
    )
    group.add_argument(
        "--assemble",
        metavar="FILE",
        help="assemble the cells of a JSON cell file into one complex",
    )
    p.add_argument("--marked", help="cube marked vertex as a 0/1 string, e.g. 010")

    p = sub.add_parser("torus-decay", help="flat bundle decay report with figures")
    p.add_argument("--L", type=_int_list, default=[2, 3, 4, 6, 8], help="comma separated box sizes")
    p.add_argument("--output", required=True, help="CSV output path; figures are placed beside it")
    p.add_argument(
        "--schedule",
        type=int,
        default=0,
        metavar="N",
        help="start the base ray retry schedule at entry N",
    )
    p.add_argument(
        "--vacuous",
        choices=("diagonal", "unipotent", "identity"),
        help="replace the rotation holonomies by a vacuous pair",
    )
    p.add_argument("--crossings-out", metavar="PREFIX", help="dump per-size crossing JSON files")
    p.add_argument("--no-figures", action="store_true", help="skip PNG rendering")
    p.add_argument(
        "--mutate-sign",
        action="store_true",
        help="strip the permutation sign factors from the chain sums (sanity mutation)",
    )

    p = sub.add_parser("folner", help="box isoperimetry and coverage checks")
    p.add_argument("--max-size", type=int, default=16)
    p.add_argument("--thickness", type=int, default=1)

    p = sub.add_parser("verify", help="run the invariant suites")
    p.add_argument("--mutate-sign", action="store_true", help="run the torus suite with the sign mutation")
    p.add_argument("--seed", type=int, default=20260823)
    p.add_argument("--torus-size", type=int, default=2)
    return parser


def _cmd_index(args) -> int:
    points = load_points(args.input)
    value = configuration_index(points)
    print(f"{value:+d}" if value else "0")
    return 0


def _cmd_formula(args) -> int:
    configs = load_configurations(args.input)
    if not configs:
        # No crossings at all: the sum is empty and the bound vacuous.
        print("formula_value 0/1")
        print("bound 0/1")
        return 0
    dims = {cfg.dim for cfg in configs}
    if len(dims) != 1:
        raise MalformedInput("all crossings must share one dimension")
    n = dims.pop()
    total = euler_number(configs, n)
    ks = [cfg.regular_count for cfg in configs]
    bound = sullivan_bound(len(configs), min(ks), max(ks), n)
    print(f"formula_value {format_fraction(total)}")
    print(f"bound {format_fraction(bound)}")
    if total.denominator != 1:
        print("warning: formula total is not an integer", file=sys.stderr)
    return 0


def _json_label(label):
    if isinstance(label, tuple):
        return [_json_label(x) for x in label]
    return label


def _tuple_label(label):
    if isinstance(label, list):
        return tuple(_tuple_label(x) for x in label)
    return label


def _load_product_cells(path: str) -> list:
    """Cells from {"cells": [...]} or a single bare cell object.

    Each cell: {"cube_dim": k, "simplex_dim": m, "vertices": [{"cube":
    [0,1,...], "simplex": j, "label": ..., "nu": int}, ...]}; JSON array
    labels become tuples.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise MalformedInput("expected a JSON object")
    raw_cells = data.get("cells", [data] if "vertices" in data else None)
    if not isinstance(raw_cells, list) or not raw_cells:
        raise MalformedInput('expected a nonempty "cells" array (or one bare cell)')
    cells = []
    for raw in raw_cells:
        try:
            labels = {}
            nu = {}
            for v in raw["vertices"]:
                key = (tuple(int(c) for c in v["cube"]), int(v["simplex"]))
                label = _tuple_label(v["label"])
                labels[key] = label
                nu[label] = int(v["nu"])
            cells.append(
                ProductCell(
                    cube_dim=int(raw["cube_dim"]),
                    simplex_dim=int(raw["simplex_dim"]),
                    labels=labels,
                    nu=nu,
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedInput(f"malformed cell entry: {exc}") from exc
    return cells


def _cmd_triangulate(args) -> int:
    if args.cube is not None:
        marked = None
        if args.marked is not None:
            if set(args.marked) - {"0", "1"} or len(args.marked) != args.cube:
                raise MalformedInput(f"--marked needs a 0/1 string of length {args.cube}")
            v0 = tuple(int(c) for c in args.marked)
            marked = (v0, tuple(1 - c for c in v0))
        tri = kuhn_triangulation(args.cube, marked=marked)
        kind = f"cube({args.cube})"
    elif args.staircase is not None:
        k, m = args.staircase
        tri = staircase_triangulation(k, m)
        kind = f"staircase({k},{m})"
    elif args.product is not None:
        cells = _load_product_cells(args.product)
        if len(cells) != 1:
            raise MalformedInput("--product expects exactly one cell")
        tri = triangulate_product_cell(cells[0])
        kind = f"product({cells[0].cube_dim},{cells[0].simplex_dim})"
    else:
        cells = _load_product_cells(args.assemble)
        tri = assemble_triangulation(cells)
        kind = f"assemble({len(cells)} cells)"
    doc = {
        "kind": kind,
        "vertex_count": len(tri.vertices),
        "simplex_count": len(tri.maximal_simplices),
        "euler_characteristic": tri.euler_characteristic(),
        "vertices": [_json_label(v) for v in tri.vertices],
        "maximal_simplices": [
            [_json_label(v) for v in s] for s in tri.maximal_simplices
        ],
    }
    if tri.coords is not None:
        vols = tri.maximal_volumes()
        doc["volume_total"] = format_fraction(sum(vols))
        doc["volumes"] = sorted({format_fraction(v) for v in vols})
    print(json.dumps(doc, indent=2))
    return 0


def _cmd_torus_decay(args) -> int:
    if args.vacuous == "diagonal":
        hol = diagonal_pair()
    elif args.vacuous == "unipotent":
        hol = unipotent_pair()
    elif args.vacuous == "identity":
        hol = identity_pair()
    else:
        hol = standard_rotation_pair()
    results = decay_experiment(
        hol,
        args.L,
        schedule_start=args.schedule,
        drop_orientation_sign=args.mutate_sign,
    )
    rows = [decay_row(data.L, report) for data, report in results]
    out = Path(args.output)
    write_decay_csv(out, rows)
    print(f"wrote {out}")
    for row in rows:
        print(
            f"L={row['L']} X={row['X']} k={row['k_min']}..{row['k_max']} "
            f"bound={format_fraction(row['bound'])} "
            f"formula={format_fraction(row['formula_value'])}"
        )
    nonint = [row for row in rows if row["formula_value"].denominator != 1]
    if nonint:
        print("warning: non-integer formula totals present", file=sys.stderr)
    if args.crossings_out:
        for data, _ in results:
            path = Path(f"{args.crossings_out}_L{data.L}.json")
            write_crossings_json(path, data)
            print(f"wrote {path}")
    if not args.no_figures:
        from .figures import save_crossings_figure, save_decay_figure

        decay_png = out.with_suffix(".png")
        save_decay_figure(rows, decay_png)
        print(f"wrote {decay_png}")
        largest = max(results, key=lambda pair: pair[0].L)[0]
        crossings_png = out.with_name(out.stem + f"_crossings_L{largest.L}.png")
        save_crossings_figure(largest, crossings_png)
        print(f"wrote {crossings_png}")
    return 0


def _cmd_folner(args) -> int:
    if args.max_size < 2:
        raise MalformedInput("--max-size must be at least 2")
    for L in range(2, args.max_size + 1):
        rep = folner_report(L, args.thickness)
        print(
            f"L={rep['L']} ratio={format_fraction(rep['ratio'])} "
            f"inner={rep['n_inner']} boundary={rep['n_boundary']} "
            f"neighborhood_ok={rep['neighborhood_ok']}"
        )
    sizes = folner_report(2)["ball_sizes"]
    print(f"word balls: {sizes[0]},{sizes[1]},{sizes[2]}")
    return 0


def _cmd_verify(args) -> int:
    results = verify_mod.run_all(
        seed=args.seed, mutate_sign=args.mutate_sign, torus_size=args.torus_size
    )
    failed = 0
    for res in results:
        status = "ok" if res.passed else "FAIL"
        line = f"{status} [{res.suite}] {res.name}"
        if res.detail and not res.passed:
            line += f" ({res.detail})"
        print(line)
        failed += 0 if res.passed else 1
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 3 if failed else 0


_COMMANDS = {
    "index": _cmd_index,
    "formula": _cmd_formula,
    "triangulate": _cmd_triangulate,
    "torus-decay": _cmd_torus_decay,
    "folner": _cmd_folner,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except _DEGENERATE as exc:
        print(f"degenerate data: {exc}", file=sys.stderr)
        return 2
    except _MALFORMED as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FlatFoliateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
