"""The ``malcev`` command line.

Exit status: 0 success, 1 validation failure, 2 numerical tolerance failure,
3 malformed input.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import corpus
from .bar import h0
from .braid_kz import BraidWord, braid_holonomy
from .envelope import is_grouplike
from .exactla import format_rational
from .free_lie import nilpotent_quotient
from .interchange import (
    InterchangeError,
    format_complex,
    load_dga,
    load_forms,
    load_path,
    load_presentation,
    read_json,
)
from .transport import DEFAULT_TOL, TransportError, check_integrability, transport
from .verify import SUITES, run_suite

OK, INVALID, TOLERANCE, MALFORMED = 0, 1, 2, 3
GROUPLIKE_TOL = 1e-8
DIGITS = 12

# suites whose failures are exact (validation) rather than numerical
_EXACT_SUITES = {"d2", "equivariance", "peter-weyl", "witt"}


@dataclass
class RunConfig:
    subcommand: str
    dga: str | None = None
    path: str | None = None
    form: str | None = None
    lie: str | None = None
    trunc: int | None = None
    cap: int = 6
    tol: float = DEFAULT_TOL
    seed: int = 0
    json: bool = False
    n: int | None = None
    word: str | None = None
    suite: str = "all"

    def check(self) -> None:
        if self.trunc is not None and self.trunc < 1:
            raise InterchangeError("--trunc must be at least 1")
        if self.cap < 0:
            raise InterchangeError("--cap must be nonnegative")
        if not self.tol > 0:
            raise InterchangeError("--tol must be positive")


def _num(z: complex) -> str:
    z = complex(z)
    if z.imag == 0:
        return f"{z.real:.{DIGITS}g}"
    return f"{z.real:.{DIGITS}g}{z.imag:+.{DIGITS}g}j"


def _coef(c) -> str:
    return format_rational(c) if isinstance(c, (int, Fraction)) else _num(c)


def _emit(cfg: RunConfig, doc: dict, lines: list[str]) -> None:
    if cfg.json:
        print(json.dumps(doc, sort_keys=True, indent=2))
    else:
        print("\n".join(lines))


def _series_doc(series) -> list[dict]:
    labels = series.algebra.lie.labels
    return [
        {"word": [labels[i] for i in m], "value": format_complex(c, DIGITS)}
        for m, c in series.sorted_terms()
        if c != 0
    ]


def _series_lines(series) -> list[str]:
    return ["  " + line for line in series.format(DIGITS)]


def _require(value, flag: str):
    if value is None:
        raise InterchangeError(f"{flag} is required for this subcommand")
    return value


def _load_model(spec: str):
    if spec.startswith("builtin:"):
        name = spec.split(":", 1)[1]
        builders = {
            "circle": lambda: (corpus.circle(), None),
            "wedge": lambda: (corpus.wedge(2), None),
            "circle+cell": lambda: (corpus.circle_with_cell(), None),
            "heisenberg": lambda: (corpus.heisenberg(), None),
            "torus": lambda: (corpus.torus(), None),
            "circle-sigma2": corpus.circle_sigma2,
            "wedge-swap": corpus.wedge_swap,
        }
        if name not in builders:
            raise InterchangeError(f"{spec}: unknown builtin model; choose from {', '.join(builders)}")
        return builders[name]()
    return load_dga(read_json(spec), where=spec)


# -- subcommands --------------------------------------------------------------


def cmd_validate_dga(cfg: RunConfig) -> int:
    model, coal = _load_model(_require(cfg.dga, "--dga"))
    problems = model.validate()
    if coal is not None:
        problems += [f"coefficients: {p}" for p in coal.validate(model)]
    lines = [f"model {model.name or cfg.dga}: {len(model.basis)} basis elements"]
    lines += [f"  violation: {p}" for p in problems] or ["  valid"]
    _emit(cfg, {"model": model.name, "valid": not problems, "violations": problems}, lines)
    return INVALID if problems else OK


def cmd_bar_h0(cfg: RunConfig) -> int:
    model, coal = _load_model(_require(cfg.dga, "--dga"))
    problems = model.validate() + ([] if coal is None else coal.validate(model))
    if problems:
        _emit(cfg, {"valid": False, "violations": problems}, [f"invalid model: {p}" for p in problems])
        return INVALID
    result = h0(model, coal, cfg.cap)
    rep = result.report
    lines = [f"H0 of the bar construction, bar degrees 0..{cfg.cap}", "  s  new  cumulative"]
    lines += [f"  {s}  {rep.new_dims[s]}  {rep.cumulative[s]}" for s in range(cfg.cap + 1)]
    doc = {"cap": cfg.cap, "new_dims": list(rep.new_dims), "cumulative": list(rep.cumulative)}
    if result.trivial_report is not None:
        doc["trivial_coefficients"] = list(result.trivial_report.new_dims)
        doc["tensor_decomposition"] = result.tensor_decomposition_ok
        lines.append(f"  trivial-coefficient part: {result.trivial_report.new_dims}")
        lines.append(f"  O(S) tensor decomposition holds: {result.tensor_decomposition_ok}")
    _emit(cfg, doc, lines)
    return OK


def cmd_lie_quotient(cfg: RunConfig) -> int:
    spec = _require(cfg.lie, "--lie")
    pres = load_presentation(read_json(spec), where=spec, truncation=cfg.trunc)
    try:
        q = nilpotent_quotient(pres)
    except ValueError as exc:
        _emit(cfg, {"valid": False, "violations": [str(exc)]}, [f"invalid presentation: {exc}"])
        return INVALID
    problems = q.validate()
    brackets = []
    for (i, j), vec in sorted(q.structure.items()):
        terms = [[format_rational(c), q.labels[k]] for k, c in sorted(vec.items())]
        brackets.append({"left": q.labels[i], "right": q.labels[j], "terms": terms})
    doc = {
        "dims": list(q.dims()),
        "basis": [{"label": l, "degree": d} for l, d in zip(q.labels, q.degrees)],
        "brackets": brackets,
        "ideal_dims": list(q.ideal_dims()),
        "valid": not problems,
    }
    lines = [f"graded dims: {q.dims()}", f"relation ideal dims: {q.ideal_dims()}", "basis:"]
    lines += [f"  {l} (degree {d})" for l, d in zip(q.labels, q.degrees)]
    lines.append("brackets:")
    for b in brackets:
        rhs = " + ".join(f"{c}*{l}" for c, l in b["terms"])
        lines.append(f"  [{b['left']}, {b['right']}] = {rhs}")
    lines += [f"  violation: {p}" for p in problems]
    _emit(cfg, doc, lines)
    return INVALID if problems else OK


def cmd_transport(cfg: RunConfig) -> int:
    lie_spec = _require(cfg.lie, "--lie")
    path_spec = _require(cfg.path, "--path")
    form_spec = _require(cfg.form, "--form")
    q = nilpotent_quotient(load_presentation(read_json(lie_spec), where=lie_spec, truncation=cfg.trunc))
    path = load_path(read_json(path_spec), where=path_spec)
    omega = load_forms(read_json(form_spec), q, where=form_spec, dimension=path.dimension)
    if omega.dimension and omega.dimension != path.dimension:
        raise InterchangeError(f"{form_spec}: forms live in dimension {omega.dimension}, path in {path.dimension}")
    integrable = check_integrability(omega).integrable
    try:
        res = transport(path, omega, cfg.tol)
    except TransportError as exc:
        _emit(cfg, {"error": str(exc)}, [f"transport failed: {exc}"])
        return TOLERANCE
    grouplike = is_grouplike(res.series, GROUPLIKE_TOL)
    doc = {
        "integrable": integrable,
        "grouplike": grouplike,
        "steps": res.steps,
        "series": _series_doc(res.series),
    }
    lines = [f"integrable: {integrable}", f"grouplike: {grouplike}", f"steps: {res.steps}", "series:"]
    lines += _series_lines(res.series)
    _emit(cfg, doc, lines)
    return OK if grouplike else TOLERANCE


def cmd_braid(cfg: RunConfig) -> int:
    n = _require(cfg.n, "--n")
    try:
        word = BraidWord.parse(n, _require(cfg.word, "--word"))
    except ValueError as exc:
        raise InterchangeError(f"--word: {exc}") from None
    N = cfg.trunc or 3
    try:
        el = braid_holonomy(word, N, cfg.tol)
    except TransportError as exc:
        _emit(cfg, {"error": str(exc)}, [f"transport failed: {exc}"])
        return TOLERANCE
    grouplike = is_grouplike(el.u, GROUPLIKE_TOL)
    doc = {
        "n": n,
        "word": str(word),
        "truncation": N,
        "permutation": [p + 1 for p in el.s],
        "grouplike": grouplike,
        "series": _series_doc(el.u),
    }
    lines = [
        f"braid {word} in B{n}, truncation {N}",
        f"permutation: {' '.join(str(p + 1) for p in el.s)}",
        f"grouplike: {grouplike}",
        "series:",
    ]
    lines += _series_lines(el.u)
    _emit(cfg, doc, lines)
    return OK if grouplike else TOLERANCE


def cmd_verify(cfg: RunConfig) -> int:
    if cfg.suite != "all" and cfg.suite not in SUITES:
        raise InterchangeError(f"--suite: unknown suite {cfg.suite!r}; choose from {', '.join(SUITES)} or all")
    results = run_suite(cfg.suite, cfg.seed)
    doc = {
        "seed": cfg.seed,
        "cases": [
            {"suite": r.suite, "case": r.case, "passed": r.passed, "value": float(f"{r.value:.{DIGITS}g}") if isinstance(r.value, float) else r.value}
            for r in results
        ],
    }
    lines = [r.line() for r in results]
    failed = [r for r in results if not r.passed]
    lines.append(f"{len(results) - len(failed)}/{len(results)} cases passed")
    _emit(cfg, doc, lines)
    if not failed:
        return OK
    return INVALID if all(r.suite in _EXACT_SUITES for r in failed) else TOLERANCE


COMMANDS = {
    "validate-dga": cmd_validate_dga,
    "bar-h0": cmd_bar_h0,
    "lie-quotient": cmd_lie_quotient,
    "transport": cmd_transport,
    "braid": cmd_braid,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="malcev", description="Bar constructions, iterated integrals and braid holonomy.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p: argparse.ArgumentParser) -> argparse.ArgumentParser:
        p.add_argument("--json", action="store_true", help="print a JSON document instead of a table")
        return p

    p = common(sub.add_parser("validate-dga", help="check the axioms of a DGA model"))
    p.add_argument("--dga", required=True, help="model JSON file, or builtin:NAME")

    p = common(sub.add_parser("bar-h0", help="dimensions of H0 of the bar construction"))
    p.add_argument("--dga", required=True, help="model JSON file, or builtin:NAME")
    p.add_argument("--cap", type=int, default=6, help="largest bar degree")

    p = common(sub.add_parser("lie-quotient", help="truncated quotient of a free Lie algebra"))
    p.add_argument("--lie", required=True)
    p.add_argument("--trunc", type=int, help="override the presentation's truncation")

    p = common(sub.add_parser("transport", help="parallel transport of a Lie-valued 1-form"))
    p.add_argument("--path", required=True)
    p.add_argument("--form", required=True)
    p.add_argument("--lie", required=True)
    p.add_argument("--trunc", type=int)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)

    p = common(sub.add_parser("braid", help="KZ holonomy of a braid word"))
    p.add_argument("--n", type=int, required=True, help="number of strands")
    p.add_argument("--word", required=True, help='e.g. "s1 s2^-1 s1"')
    p.add_argument("--trunc", type=int, default=3)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)

    p = common(sub.add_parser("verify", help="run the seeded verification suites"))
    p.add_argument("--suite", default="all", help=f"one of {', '.join(SUITES)} or all")
    p.add_argument("--seed", type=int, default=0)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return OK if exc.code == 0 else MALFORMED
    cfg = RunConfig(**{k.replace("-", "_"): v for k, v in vars(args).items()})
    try:
        cfg.check()
        return COMMANDS[cfg.subcommand](cfg)
    except InterchangeError as exc:
        print(f"malcev: malformed input: {exc}", file=sys.stderr)
        return MALFORMED


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
