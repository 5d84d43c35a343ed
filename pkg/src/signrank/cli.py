"""Command line front end: generate matrices, compute certificates, emit
reproducible JSON reports.

Exit codes: 0 success, 2 input error, 3 size-limit rejection, 4 numerical
non-convergence (the report is still written).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import tempfile

import numpy as np

from . import census, generators
from .embed import signrank_bracket
from .errors import MatrixFormatError, SizeLimitError
from .matrix import parse_sign_matrix, regularity, to_boolean, distinct_rows
from .spectral import (
    MAX_ITERATIONS,
    identity_witness,
    forster_bound,
    regular_upper_bound,
    sigma2_trace_floor,
    spectral_signrank_lower,
    star_norm_floor,
    top_singular_values,
)
from .stabbing import vc1_path, welzl_path
from .vc import dual_sign_rank, vc_dimension

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_SIZE = 3
EXIT_NUMERIC = 4


def _round_floats(obj):
    """12 significant digits on every float, recursively."""
    if isinstance(obj, float):
        return float(f"{obj:.12g}")
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def _emit(doc, out_path: str | None, fmt: str) -> None:
    doc = _round_floats(doc)
    if fmt == "json":
        text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    else:
        lines = []
        for key, value in sorted(doc.items()):
            if isinstance(value, (dict, list)):
                value = json.dumps(value, sort_keys=True)
            lines.append(f"{key} = {value}\n")
        text = "".join(lines)
    _write_text(text, out_path)


def _write_text(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(out_path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".signrank-")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, out_path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _load_matrix(path: str):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise MatrixFormatError(f"cannot read {path}: {exc}") from exc
    return parse_sign_matrix(text)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="signrank",
        description="Sign-rank certificates, orderings, generators, and censuses",
    )
    # Global flags are accepted both before and after the subcommand; the
    # per-subcommand copies default to SUPPRESS so they never clobber values
    # given at the top level.
    common = argparse.ArgumentParser(add_help=False)
    for flags, kwargs in (
        (("--seed",), dict(type=int, help="seed for all randomness")),
        (("--tol",), dict(type=float, help="numerical tolerance")),
        (("--budget",), dict(type=int, help="iteration budget for searches")),
        (("--out",), dict(help="output path (default stdout)")),
        (("--format",), dict(choices=("text", "json"))),
    ):
        parser.add_argument(*flags, **kwargs)
        common.add_argument(*flags, default=argparse.SUPPRESS, **kwargs)
    parser.set_defaults(seed=0, tol=1e-9, budget=400, out=None, format="json")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser(
        "gen", help="write a generated matrix in text format", parents=[common]
    )
    gen.add_argument(
        "generator",
        choices=(
            "signed-identity",
            "disjointness",
            "projective",
            "hamming-ball",
            "grid",
            "intervals",
            "line-subset",
            "heavy-free",
        ),
    )
    gen.add_argument("--n", type=int, default=None)
    gen.add_argument("--d", type=int, default=None)
    gen.add_argument("--p", type=int, default=None)
    gen.add_argument(
        "--planted", action="store_true", help="plant random prefix line orders"
    )

    for name, helptext in (
        ("analyze", "full bound report for a matrix file"),
        ("approx", "multiplicative sign-rank approximation"),
        ("path", "low-stabbing row ordering"),
        ("bounds", "spectral certificates and floors only"),
    ):
        cmd = sub.add_parser(name, help=helptext, parents=[common])
        cmd.add_argument("input", help="matrix file in '+'/'-' format")

    enum = sub.add_parser(
        "enumerate", help="census of classes by VC dimension", parents=[common]
    )
    enum.add_argument("--n", type=int, required=True)
    enum.add_argument("--d", type=int, required=True)
    enum.add_argument("--sample", action="store_true", help="Monte Carlo estimate")
    enum.add_argument("--samples", type=int, default=2000)
    enum.add_argument("--size", type=int, default=None, help="class size to sample")
    return parser


def _require(args, names: list[str]) -> None:
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise ValueError(
            f"generator {args.generator!r} needs --" + ", --".join(missing)
        )


def _cmd_gen(args) -> int:
    rng = np.random.default_rng(args.seed)
    name = args.generator
    if name == "signed-identity":
        _require(args, ["n"])
        matrix = generators.signed_identity(args.n)
    elif name == "disjointness":
        _require(args, ["n"])
        matrix = generators.disjointness(args.n)
    elif name == "projective":
        _require(args, ["p"])
        matrix = generators.projective_incidence(args.p, args.d if args.d else 2)
    elif name == "hamming-ball":
        _require(args, ["n", "d"])
        matrix = generators.hamming_ball(args.n, args.d).matrix
    elif name == "grid":
        _require(args, ["n", "d"])
        matrix = generators.grid_hyperplane(args.n, args.d)
    elif name == "intervals":
        _require(args, ["p"])
        orders = None
        if args.planted:
            plane = generators.ProjectiveSpace.build(args.p, 2)
            orders = generators.planted_line_orders(plane, rng)
        matrix = generators.interval_class(args.p, orders).matrix
    elif name == "line-subset":
        _require(args, ["p"])
        matrix = generators.line_subset_random(args.p, rng)
    else:  # heavy-free
        _require(args, ["n", "d"])
        matrix = generators.heavy_dominant_free_random(args.n, args.d, rng)
    _write_text(matrix.to_text(), args.out)
    return EXIT_OK


def _cmd_analyze(args) -> int:
    S = _load_matrix(args.input)
    rng = np.random.default_rng(args.seed)
    report = signrank_bracket(
        S,
        rng,
        instance=os.path.basename(args.input),
        hinge_alternations=args.budget,
        tol=args.tol,
    )
    doc = report.to_json_dict()
    doc["approx_sign_rank"] = report.welzl_max_sc + 1
    _emit(doc, args.out, args.format)
    cap = max(1, min(MAX_ITERATIONS, args.budget))
    summary = top_singular_values(S.entries.astype(float), tol=args.tol, max_iterations=cap)
    if summary.iterations >= cap:
        return EXIT_NUMERIC
    return EXIT_OK


def _cmd_approx(args) -> int:
    S = _load_matrix(args.input)
    rng = np.random.default_rng(args.seed)
    Sd = distinct_rows(S)
    vc = vc_dimension(Sd)
    if vc <= 1:
        ordering = vc1_path(Sd)
        method = "vc1"
    else:
        ordering, _ = welzl_path(Sd, rng, d=vc)
        method = "welzl"
    doc = {
        "instance": os.path.basename(args.input),
        "method": method,
        "max_sign_changes": ordering.max_sign_changes,
        "approx_sign_rank": ordering.max_sign_changes + 1,
    }
    _emit(doc, args.out, args.format)
    return EXIT_OK


def _cmd_path(args) -> int:
    S = _load_matrix(args.input)
    rng = np.random.default_rng(args.seed)
    Sd = distinct_rows(S)
    vc = vc_dimension(Sd)
    doc = {
        "instance": os.path.basename(args.input),
        "n_rows": Sd.n_rows,
        "n_cols": Sd.n_cols,
        "vc": vc,
    }
    if vc <= 1:
        ordering = vc1_path(Sd)
        doc["method"] = "vc1"
    else:
        ordering, state = welzl_path(Sd, rng, d=vc)
        doc["method"] = "welzl"
        doc["x_log"] = [float(x) for x in state.x_log]
        doc["constant_observed"] = ordering.max_sign_changes / Sd.n_rows ** (
            1.0 - 1.0 / vc
        )
    doc["permutation"] = list(ordering.permutation)
    doc["sign_changes"] = list(ordering.sign_changes)
    doc["max_sign_changes"] = ordering.max_sign_changes
    _emit(doc, args.out, args.format)
    return EXIT_OK


def _cmd_bounds(args) -> int:
    S = _load_matrix(args.input)
    B = to_boolean(S)
    info = regularity(B)
    cap = max(1, min(MAX_ITERATIONS, args.budget))
    summary = top_singular_values(S.entries.astype(float), tol=args.tol, max_iterations=cap)
    doc = {
        "instance": os.path.basename(args.input),
        "n_rows": S.n_rows,
        "n_cols": S.n_cols,
        "vc": vc_dimension(S),
        "dual": dual_sign_rank(S),
        "is_regular": info.degree is not None,
        "degree": info.degree,
        "spectrum": {
            "sigma1": summary.sigma1,
            "sigma2": summary.sigma2,
            "residual": summary.residual,
            "iterations": summary.iterations,
        },
    }
    if S.n_rows == S.n_cols:
        doc["star_norm_floor"] = star_norm_floor(S)
        doc["forster_identity"] = forster_bound(S, identity_witness(S, tol=args.tol))
    if info.degree is not None:
        doc["sigma2_trace_floor"] = sigma2_trace_floor(B)
        doc["regular_upper_bound"] = regular_upper_bound(S)
        if info.degree >= 1 and 2 * info.degree <= S.n_rows:
            doc["spectral_lower_bound"] = spectral_signrank_lower(S, tol=args.tol)
    _emit(doc, args.out, args.format)
    if summary.iterations >= cap:
        return EXIT_NUMERIC
    return EXIT_OK


def _cmd_enumerate(args) -> int:
    if args.sample:
        if args.size is None:
            raise ValueError("--sample needs --size (the class size to draw)")
        rng = np.random.default_rng(args.seed)
        estimate = census.sample_census(args.n, args.d, args.size, args.samples, rng)
        _emit(dataclasses.asdict(estimate), args.out, args.format)
        return EXIT_OK
    if args.n > census.MAX_EXACT_N:
        raise SizeLimitError(
            f"exact census supports n <= {census.MAX_EXACT_N}; rerun with --sample"
        )
    result = census.enumerate_census(args.n, args.d)
    _emit(dataclasses.asdict(result), args.out, args.format)
    return EXIT_OK


_COMMANDS = {
    "gen": _cmd_gen,
    "analyze": _cmd_analyze,
    "approx": _cmd_approx,
    "path": _cmd_path,
    "bounds": _cmd_bounds,
    "enumerate": _cmd_enumerate,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except SizeLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except (MatrixFormatError, ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
