"""Command-line front end.

    ratdiff simulate --ic 0.2,9,5,7,2 --a -1 --b 1 --n-max 60 --out orbit.csv
    ratdiff compare  --ic 1/3,2,5,-1,7 --a periodic:2,3 --b 1/2
    ratdiff symcheck --seed 0 --samples 1000 --negative-control
    ratdiff period   --ic 0.2,9,5,7,2 --a -1 --b 1
    ratdiff converge --ic 1,1,1,1,1 --b 1

Coefficients are ``v`` (constant), ``periodic:v1,v2,...`` or
``explicit:v1,v2,...``.  ``--config`` reads the same keys from a JSON file
(``ic``, ``a``, ``b``, ``n_max``, ``backend``, ``form``, ...); flags given on
the command line take precedence.  Exit codes: 0 pass, 1 check failed,
2 usage or config error.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import analysis, closedform, symmetry
from .errors import ConfigError, ForbiddenOrbit, RatDiffError
from .numerics import BACKENDS, format_scalar, is_exact
from .recurrence import CoefficientSequence, InitialConditions, iterate

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

DEFAULT_N_MAX = {"simulate": 120, "compare": 120, "period": 120, "converge": 6000}
DEFAULT_BACKEND = {"converge": "float"}

FIELDS = (
    "ic", "a", "b", "n_max", "backend", "form", "seed", "out",
    "max_period", "tol", "samples", "negative_control", "j",
)


class Config:
    """Resolved settings: command-line flag, else config file, else default."""

    def __init__(self, command: str, args: argparse.Namespace, file_values: dict):
        self.command = command
        self._args = args
        self._file = file_values

    def raw(self, key, default=None):
        v = getattr(self._args, key, None)
        if v is not None:
            return v
        if key in self._file:
            return self._file[key]
        return default

    @property
    def backend(self) -> str:
        b = str(self.raw("backend", DEFAULT_BACKEND.get(self.command, "rational")))
        if b not in BACKENDS:
            raise ConfigError("backend", f"expected one of {', '.join(BACKENDS)}, got {b!r}")
        return b

    @property
    def form(self) -> str:
        f = str(self.raw("form", "x"))
        if f not in ("x", "u"):
            raise ConfigError("form", f"expected 'x' or 'u', got {f!r}")
        return f

    def integer(self, key, default, minimum=None) -> int:
        v = self.raw(key, default)
        try:
            v = int(v)
        except (TypeError, ValueError):
            raise ConfigError(key, f"expected an integer, got {v!r}") from None
        if minimum is not None and v < minimum:
            raise ConfigError(key, f"must be >= {minimum}, got {v}")
        return v

    def number(self, key, default) -> float:
        v = self.raw(key, default)
        try:
            return float(v)
        except (TypeError, ValueError):
            raise ConfigError(key, f"expected a number, got {v!r}") from None

    @property
    def ic(self) -> InitialConditions:
        v = self.raw("ic")
        if v is None:
            raise ConfigError("ic", "five initial values are required")
        text = ",".join(str(x) for x in v) if isinstance(v, (list, tuple)) else str(v)
        try:
            return InitialConditions.parse(text, self.backend)
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError("ic", str(exc)) from None

    def coefficients(self, key, default=None) -> CoefficientSequence:
        v = self.raw(key, default)
        if v is None:
            raise ConfigError(key, "coefficient specification is required")
        if isinstance(v, (list, tuple)):
            v = "periodic:" + ",".join(str(x) for x in v)
        try:
            return CoefficientSequence.parse(str(v), self.backend)
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(key, str(exc)) from None

    @property
    def n_max(self) -> int:
        return self.integer("n_max", DEFAULT_N_MAX.get(self.command, 120), minimum=0)


def _load_config_file(path) -> dict:
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError("config", f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ConfigError("config", "top level must be a JSON object")
    data = {k.replace("-", "_"): v for k, v in data.items()}
    unknown = sorted(set(data) - set(FIELDS))
    if unknown:
        raise ConfigError(unknown[0], "unknown config key")
    return data


def _count(cfg: Config) -> int:
    """Number of terms so that the last label is n_max in the chosen form."""
    return cfg.n_max + (5 if cfg.form == "x" else 1)


def _emit(text: str, out) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def trajectory_csv(traj, form: str = "x") -> str:
    col = "x_n" if form == "x" else "u_n"
    lines = [f"n,{col}"]
    for label, v in traj.items():
        lines.append(f"{label},{format_scalar(v)}")
    if not traj.complete:
        lines.append(f"# forbidden_at={traj.forbidden_label} cause={traj.cause.value}")
    return "\n".join(lines) + "\n"


def cmd_simulate(cfg: Config) -> int:
    count = max(_count(cfg), 5)
    traj = iterate(cfg.ic, cfg.coefficients("a"), cfg.coefficients("b"), count)
    if cfg.form == "x":
        traj = traj.relabel(-4)
    _emit(trajectory_csv(traj, cfg.form), cfg.raw("out"))
    return EXIT_OK


def _discrepancy(x, y, exact: bool):
    if exact:
        return abs(x - y)
    scale = max(abs(x), abs(y))
    return 0.0 if scale == 0 else abs(x - y) / scale


def cmd_compare(cfg: Config) -> int:
    ic, a, b = cfg.ic, cfg.coefficients("a"), cfg.coefficients("b")
    offset = -4 if cfg.form == "x" else 0
    count = max(_count(cfg), 5)
    oracle = iterate(ic, a, b, count).relabel(offset)
    status = EXIT_OK
    usable = len(oracle.values)
    if not oracle.complete:
        print(f"forbidden_at={oracle.forbidden_label} cause={oracle.cause.value}; "
              f"comparing the {usable} defined terms")
        status = EXIT_FAIL
    closed = closedform.solution_x_series(ic, a, b, usable - 5)
    exact = all(is_exact(v) for v in oracle.values) and cfg.backend == "rational"
    tol = cfg.number("tol", 1e-9)
    per_class = {j: [0, Fraction(0) if exact else 0.0] for j in range(6)}
    for pos, (x, y) in enumerate(zip(closed, oracle.values)):
        d = _discrepancy(x, y, exact)
        cls = per_class[pos % 6]
        cls[0] += 1
        if d > cls[1]:
            cls[1] = d
    worst = max(c[1] for c in per_class.values())
    if exact:
        print(f"max_discrepancy: {worst} (exact)")
        ok = worst == 0
    else:
        print(f"max_discrepancy: {float(worst):.3e} (relative, float)")
        ok = worst < tol
    for j, (n_terms, d) in per_class.items():
        shown = format_scalar(d) if exact else f"{d:.3e}"
        print(f"residue j={j}: terms={n_terms} max_discrepancy={shown}")
    print("PASS" if ok else "FAIL")
    return status if ok else EXIT_FAIL


def cmd_symcheck(cfg: Config) -> int:
    seed = cfg.integer("seed", 0)
    samples = cfg.integer("samples", 1000, minimum=0)
    tol = cfg.number("tol", 1e-10)
    if samples == 0:
        print("warning: samples=0, nothing to check (vacuous pass)", file=sys.stderr)
    points = symmetry.sample_points(seed, samples)
    ok = True
    for c in symmetry.Characteristic:
        res = symmetry.sweep(c, points)
        verdict = "PASS" if res.passes(tol) else "FAIL"
        ok &= verdict == "PASS"
        print(f"{c.name}: max_scaled_residual={res.max_residual:.3e} {verdict}")
    if cfg.raw("negative_control", False):
        for fn, label in (
            (symmetry.identity_characteristic, "Q=u"),
            (symmetry.quadratic_characteristic, "Q=w^n u^2"),
        ):
            res = symmetry.sweep(fn, points)
            verdict = "PASS" if res.passes(tol) else "FAIL"
            print(f"control {label}: max_scaled_residual={res.max_residual:.3e} "
                  f"above_1e-6={res.fraction_above(1e-6):.3f} {verdict} (planted non-symmetry)")
    return EXIT_OK if ok else EXIT_FAIL


def _constant_value(seq: CoefficientSequence):
    if len(set(seq.values)) == 1 and seq.kind != "explicit":
        return seq.values[0]
    return None


def cmd_period(cfg: Config) -> int:
    ic, a, b = cfg.ic, cfg.coefficients("a"), cfg.coefficients("b")
    traj = iterate(ic, a, b, max(_count(cfg), 5))
    if not traj.complete:
        label = traj.forbidden_at - (4 if cfg.form == "x" else 0)
        print(f"forbidden_at={label} cause={traj.cause.value}")
        return EXIT_FAIL
    max_period = cfg.integer("max_period", 12, minimum=1)
    report = analysis.detect_period(traj, max_period, cfg.number("tol", 1e-9))
    print(report.summary())
    ca, cb = _constant_value(a), _constant_value(b)
    if report.detected_period is not None and ca is not None and cb is not None:
        print(f"period_six_condition: {analysis.period_six_condition(ic, ca, cb)}")
        for note in analysis.period_notes(ic, ca, cb, report):
            print(f"note: {note}")
    return EXIT_OK if report.detected_period is not None else EXIT_FAIL


def cmd_converge(cfg: Config) -> int:
    a = cfg.coefficients("a", "1")
    if a.kind == "explicit" or set(a.values) != {1}:
        raise ConfigError("a", "the decay check requires a = 1")
    b = cfg.coefficients("b")
    cb = _constant_value(b)
    if cb is None:
        raise ConfigError("b", "the decay check requires a constant b")
    try:
        report = analysis.convergence_report(
            cfg.ic, cb, n_max=cfg.n_max, j=cfg.integer("j", 4), backend=cfg.backend
        )
    except ForbiddenOrbit as exc:
        print(f"ForbiddenOrbit: {exc}")
        return EXIT_FAIL
    print(report.summary())
    return EXIT_OK if report.monotone_after_first_sextet else EXIT_FAIL


COMMANDS = {
    "simulate": cmd_simulate,
    "compare": cmd_compare,
    "symcheck": cmd_symcheck,
    "period": cmd_period,
    "converge": cmd_converge,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ratdiff",
        description="Iterate and cross-check the order-5 rational recurrence "
        "x_{n+1} = x_n x_{n-2} x_{n-4} / (x_{n-1} x_{n-3} (a_n + b_n x_n x_{n-2} x_{n-4})).",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON file with default settings")
        if name != "symcheck":
            p.add_argument("--ic", help="five initial values x_-4..x_0 (comma separated)")
            p.add_argument("--a", help="coefficient a_n")
            p.add_argument("--b", help="coefficient b_n")
            p.add_argument("--n-max", dest="n_max", type=int, help="last index computed")
            p.add_argument("--backend", choices=BACKENDS)
            p.add_argument("--form", choices=("x", "u"), help="index labels (default x)")
        p.add_argument("--tol", type=float)
        if name == "simulate":
            p.add_argument("--out", help="CSV path (default stdout)")
        if name == "period":
            p.add_argument("--max-period", dest="max_period", type=int)
        if name == "converge":
            p.add_argument("--j", type=int, help="residue class used for the fit (default 4)")
        if name == "symcheck":
            p.add_argument("--seed", type=int)
            p.add_argument("--samples", type=int)
            p.add_argument("--negative-control", dest="negative_control",
                           action="store_true", default=None)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = Config(args.command, args, _load_config_file(args.config))
        return COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RatDiffError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BrokenPipeError:
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
