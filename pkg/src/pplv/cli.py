"""Command-line interface: config parsing, reports and CSV artifacts.

The system config is a line-oriented text format with one section per
coefficient::

    [system]
    T = 1
    [a]
    kind = const
    value = 2.0102
    [b]
    kind = trig
    c0 = 1
    harmonic = 1, 0, 0.5    # k, cos coefficient, sin coefficient

All numeric output is printed with 17 significant digits so that every
reported margin is auditable and round-trips exactly.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from . import constant_case, criteria, jfunc, simulate
from .coeffs import PeriodicCoefficient, SystemSpec
from .existence import classify_boundary
from .region import boundary_points, boundary_residual, compute_uv, region_spec, sup_xy

EXIT_STABLE = 0
EXIT_ERROR = 1
EXIT_INCONCLUSIVE = 2
EXIT_NO_COEXISTENCE = 3

COMMANDS = ("analyze", "region", "jfunc", "scan", "simulate", "example1")

_SECTION_KEYS = {
    "system": {"T"},
    "a": {"kind", "value", "c0", "harmonic"},
}
for _name in "bcdef":
    _SECTION_KEYS[_name] = _SECTION_KEYS["a"]


class ParseError(ValueError):
    """Malformed config text; carries 1-based line and column."""

    def __init__(self, message: str, line: int, col: int) -> None:
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


class ValidationError(ValueError):
    """Structurally valid config that violates a system invariant."""


def _fmt(x: float) -> str:
    if math.isinf(x):
        return "inf"
    return f"{x:.17g}"


def _parse_float(token: str, line: int, col: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise ParseError(f"expected a number, got {token!r}", line, col) from None
    if math.isnan(value):
        raise ParseError("NaN is not a valid value", line, col)
    return value


def parse_config(text: str) -> SystemSpec:
    """Parse config text into a validated system.

    Raises :class:`ParseError` with line/column for malformed text and
    :class:`ValidationError` when a named invariant is violated (period
    positivity, strict positivity of b, c, e, f, harmonic uniqueness).
    """
    sections: dict[str, dict] = {}
    current: Optional[str] = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        stripped = line.strip()
        if not stripped:
            continue
        indent = len(line) - len(line.lstrip()) + 1
        if stripped.startswith("["):
            if not stripped.endswith("]"):
                raise ParseError("unterminated section header", lineno, len(line))
            name = stripped[1:-1].strip()
            if name not in _SECTION_KEYS:
                raise ParseError(f"unknown section [{name}]", lineno, indent)
            if name in sections:
                raise ParseError(f"duplicate section [{name}]", lineno, indent)
            sections[name] = {"harmonics": []}
            current = name
            continue
        if "=" not in stripped:
            raise ParseError("expected 'key = value'", lineno, indent)
        if current is None:
            raise ParseError("key outside of any section", lineno, indent)
        key, _, value = stripped.partition("=")
        key = key.strip()
        value = value.strip()
        vcol = line.index("=") + 2
        if key not in _SECTION_KEYS[current]:
            raise ParseError(f"unknown key {key!r} in section [{current}]", lineno, indent)
        if key == "harmonic":
            parts = [s.strip() for s in value.split(",")]
            if len(parts) != 3:
                raise ParseError("harmonic needs 'k, cos, sin'", lineno, vcol)
            kf = _parse_float(parts[0], lineno, vcol)
            if kf != int(kf) or kf < 1:
                raise ParseError("harmonic index must be a positive integer", lineno, vcol)
            sections[current]["harmonics"].append(
                (int(kf), _parse_float(parts[1], lineno, vcol), _parse_float(parts[2], lineno, vcol)))
            continue
        if key in sections[current]:
            raise ParseError(f"duplicate key {key!r}", lineno, indent)
        if key == "kind":
            if value not in ("const", "trig"):
                raise ParseError(f"kind must be 'const' or 'trig', got {value!r}", lineno, vcol)
            sections[current][key] = value
        else:
            sections[current][key] = (_parse_float(value, lineno, vcol), lineno, vcol)

    missing = [s for s in ("system", "a", "b", "c", "d", "e", "f") if s not in sections]
    if missing:
        raise ValidationError(f"missing sections: {', '.join(missing)}")
    if "T" not in sections["system"]:
        raise ValidationError("missing key 'T' in [system]")
    T = sections["system"]["T"][0]

    coeffs = {}
    for name in "abcdef":
        sec = sections[name]
        kind = sec.get("kind")
        if kind is None:
            raise ValidationError(f"section [{name}] is missing 'kind'")
        if kind == "const":
            if "value" not in sec:
                raise ValidationError(f"section [{name}]: const coefficient needs 'value'")
            coeffs[name] = PeriodicCoefficient.constant(sec["value"][0])
        elif kind == "trig":
            if "c0" not in sec:
                raise ValidationError(f"section [{name}]: trig coefficient needs 'c0'")
            try:
                coeffs[name] = PeriodicCoefficient.trig(sec["c0"][0], sec["harmonics"])
            except ValueError as exc:
                raise ValidationError(f"section [{name}]: {exc}") from None
        else:
            raise ValidationError(f"section [{name}]: unknown kind {kind!r}")

    try:
        return SystemSpec(T=T, **coeffs)
    except ValueError as exc:
        raise ValidationError(str(exc)) from None


def format_config(spec: SystemSpec) -> str:
    """Inverse of :func:`parse_config`; numbers carry 17 significant digits."""
    lines = ["[system]", f"T = {_fmt(spec.T)}"]
    for name in "abcdef":
        coef: PeriodicCoefficient = getattr(spec, name)
        lines.append(f"[{name}]")
        if coef.kind == "constant":
            lines.append("kind = const")
            lines.append(f"value = {_fmt(coef.value)}")
        else:
            lines.append("kind = trig")
            lines.append(f"c0 = {_fmt(coef.c0)}")
            for k, ck, sk in coef.harmonics:
                lines.append(f"harmonic = {k}, {_fmt(ck)}, {_fmt(sk)}")
    return "\n".join(lines) + "\n"


DEFAULT_P_LIST = (1.0, 2.0, math.inf)


@dataclass(frozen=True)
class RunConfig:
    """One CLI invocation: which command, on which system, with which p.

    ``p_list`` is None when the user did not pass --p; each command then
    applies its own default grid.
    """

    command: str
    system_file: Optional[Path]
    p_list: Optional[tuple[float, ...]]
    output_dir: Path
    emit_csv: bool

    def exponents(self, default: Sequence[float] = DEFAULT_P_LIST) -> tuple[float, ...]:
        return tuple(default) if self.p_list is None else self.p_list


def parse_p_list(text: str) -> tuple[float, ...]:
    out = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        if token in ("inf", "infinity"):
            out.append(jfunc.INF)
            continue
        try:
            value = float(token)
        except ValueError:
            raise ValidationError(f"bad exponent {token!r} in p list") from None
        if value < 1.0:
            raise ValidationError(f"exponents must be >= 1, got {token}")
        out.append(value)
    if not out:
        raise ValidationError("p list is empty")
    return tuple(out)


def _p_token(p: float) -> str:
    if math.isinf(p):
        return "inf"
    if p == int(p):
        return str(int(p))
    return f"{p:g}"


def _load_spec(cfg: RunConfig) -> SystemSpec:
    if cfg.system_file is None:
        raise ValidationError(f"command {cfg.command!r} requires --config")
    return parse_config(cfg.system_file.read_text())


def _write_csv(path: Path, header: Sequence[str], rows: Sequence[Sequence[str]]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _conclusion_exit(conclusion: str) -> int:
    if conclusion == criteria.NO_COEXISTENCE:
        return EXIT_NO_COEXISTENCE
    if conclusion in (criteria.GLOBALLY_STABLE_VIA_18_19,
                      criteria.UNIQUE_ASYMPTOTICALLY_STABLE):
        return EXIT_STABLE
    return EXIT_INCONCLUSIVE


def _result_lines(res: criteria.TestResult) -> str:
    p = "-" if res.p is None else _p_token(res.p)
    flags = f"  [{'; '.join(res.diagnostics)}]" if res.diagnostics else ""
    status = "pass" if res.passed else "FAIL"
    return (f"  {res.name:<18} p={p:<5} lhs={_fmt(res.lhs):<24} "
            f"rhs={_fmt(res.rhs):<24} margin={_fmt(res.margin):<24} {status}{flags}")


def _print_report(report: criteria.StabilityReport, out) -> None:
    cls = report.classification
    print(f"mean(a) = {_fmt(cls.lam)}   mean(d) = {_fmt(cls.mu)}", file=out)
    print(f"trivial state stable: {cls.trivial_stable}", file=out)
    if cls.prey_only_stable is not None:
        print(f"prey-only state stable: {cls.prey_only_stable}", file=out)
    if cls.predator_only_stable is not None:
        print(f"predator-only state stable: {cls.predator_only_stable}", file=out)
    print(f"coexistence states exist: {cls.coexistence_exists} "
          f"(margins {_fmt(cls.margins[0])}, {_fmt(cls.margins[1])})", file=out)
    for note in cls.diagnostics:
        print(f"  note: {note}", file=out)
    print("criteria:", file=out)
    for res in report.results:
        print(_result_lines(res), file=out)
    if report.best_p is not None:
        print(f"best exponent: p = {_p_token(report.best_p)}", file=out)
    print(f"conclusion: {report.conclusion}", file=out)


def _results_csv_rows(report: criteria.StabilityReport) -> list[list[str]]:
    rows = []
    for res in report.results:
        rows.append([
            res.name,
            "-" if res.p is None else _p_token(res.p),
            _fmt(res.lhs), _fmt(res.rhs), _fmt(res.margin),
            "1" if res.passed else "0",
            ";".join(res.diagnostics),
        ])
    return rows


def cmd_analyze(cfg: RunConfig, out) -> int:
    spec = _load_spec(cfg)
    report = criteria.scan_p(spec, cfg.exponents())
    _print_report(report, out)
    if cfg.emit_csv:
        _write_csv(cfg.output_dir / "results.csv",
                   ["name", "p", "lhs", "rhs", "margin", "passed", "diagnostics"],
                   _results_csv_rows(report))
    return _conclusion_exit(report.conclusion)


def cmd_scan(cfg: RunConfig, out) -> int:
    spec = _load_spec(cfg)
    report = criteria.scan_p(spec, cfg.exponents())
    print("name,p,lhs,rhs,margin,passed", file=out)
    for res in report.results:
        p = "-" if res.p is None else _p_token(res.p)
        print(f"{res.name},{p},{_fmt(res.lhs)},{_fmt(res.rhs)},"
              f"{_fmt(res.margin)},{int(res.passed)}", file=out)
    print(f"conclusion: {report.conclusion}", file=out)
    if cfg.emit_csv:
        _write_csv(cfg.output_dir / "results.csv",
                   ["name", "p", "lhs", "rhs", "margin", "passed", "diagnostics"],
                   _results_csv_rows(report))
    return _conclusion_exit(report.conclusion)


def cmd_region(cfg: RunConfig, out, n_per_curve: int = 256) -> int:
    spec = _load_spec(cfg)
    bounds = compute_uv(spec)
    print(f"U = {_fmt(bounds.U)}   V = {_fmt(bounds.V)}", file=out)
    for p in cfg.exponents():
        reg = region_spec(spec, p)
        pts, empty = boundary_points(reg, n_per_curve)
        sup = sup_xy(reg)
        rows = []
        for label, x, y in pts:
            if boundary_residual(reg, label, x, y) <= 1e-9:
                rows.append([label, _fmt(x), _fmt(y)])
        path = cfg.output_dir / f"region_p{_p_token(p)}.csv"
        _write_csv(path, ["curve_label", "x", "y"], rows)
        status = "empty" if empty else f"sup xy = {_fmt(sup.value)}"
        print(f"p = {_p_token(p)}: {len(rows)} boundary points -> {path} ({status})", file=out)
    return EXIT_STABLE


DEFAULT_JFUNC_GRID = tuple([1.0 + 0.25 * i for i in range(37)]  # 1 .. 10
                           + [10.5 + 0.5 * i for i in range(20)]  # 10.5 .. 20
                           + [21.0 + i for i in range(30)]  # 21 .. 50
                           + [jfunc.INF])


def cmd_jfunc(cfg: RunConfig, out) -> int:
    ps = cfg.exponents(default=DEFAULT_JFUNC_GRID)
    rows = []
    for p in ps:
        rows.append([_p_token(p), _fmt(jfunc.threshold_p(p))])
    path = cfg.output_dir / "jfunc.csv"
    _write_csv(path, ["p", "scriptF"], rows)
    print(f"{len(rows)} threshold values -> {path}", file=out)
    print(f"threshold range: [{_fmt(float(min(float(r[1]) for r in rows)))}, "
          f"{_fmt(float(max(float(r[1]) for r in rows)))}]", file=out)
    return EXIT_STABLE


def cmd_simulate(cfg: RunConfig, out) -> int:
    spec = _load_spec(cfg)
    cls = classify_boundary(spec)
    if not cls.coexistence_exists:
        print("no coexistence state exists for this system", file=out)
        print(f"margins: {_fmt(cls.margins[0])}, {_fmt(cls.margins[1])}", file=out)
        return EXIT_NO_COEXISTENCE

    extra = []
    try:
        eq = constant_case.equilibrium(constant_case.ConstantSystem(
            T=spec.T, a=spec.a.mean, b=spec.b.mean, c=spec.c.mean,
            d=spec.d.mean, e=spec.e.mean, f=spec.f.mean))
        if eq[0] > 0 and eq[1] > 0:
            extra.append(eq)
    except ValueError:
        pass
    orbits = simulate.find_coexistence_multistart(spec, extra_guesses=extra)
    if not orbits:
        print("Newton could not locate a coexistence orbit from any start", file=out)
        return EXIT_INCONCLUSIVE

    print(f"{len(orbits)} distinct orbit(s) found", file=out)
    all_stable = True
    all_verified = True
    for i, orbit in enumerate(orbits):
        flo = simulate.floquet(spec, orbit)
        report = simulate.verify_predictions(spec, orbit)
        mods = [abs(m) for m in flo.multipliers]
        det = flo.monodromy[0, 0] * flo.monodromy[1, 1] - flo.monodromy[0, 1] * flo.monodromy[1, 0]
        liou = simulate.liouville_determinant(spec, orbit)
        print(f"orbit {i}: start = ({_fmt(orbit.us[0])}, {_fmt(orbit.vs[0])})", file=out)
        print(f"  newton residual = {_fmt(orbit.newton_residual)}   "
              f"periodicity residual = {_fmt(orbit.periodicity_residual)}", file=out)
        print(f"  multipliers: |m1| = {_fmt(mods[0])}, |m2| = {_fmt(mods[1])} "
              f"-> {flo.classification}", file=out)
        print(f"  det(monodromy) = {_fmt(det)}   trace-integral check = {_fmt(liou)}", file=out)
        print(f"  component bounds: max u = {_fmt(report.u_max)} <= U = {_fmt(report.bounds.U)}: "
              f"{report.bounds_ok}", file=out)
        print(f"                    max v = {_fmt(report.v_max)} <= V = {_fmt(report.bounds.V)}", file=out)
        for m in report.memberships:
            print(f"  region membership p = {_p_token(m.p):<4}: averages = "
                  f"({_fmt(m.u_avg)}, {_fmt(m.v_avg)}), slack = {_fmt(m.slack)}, ok = {m.ok}",
                  file=out)
        if flo.classification != simulate.ASYMPTOTICALLY_STABLE:
            all_stable = False
        if not report.all_ok:
            all_verified = False
        if cfg.emit_csv:
            rows = [[_fmt(t), _fmt(u), _fmt(v)]
                    for t, u, v in zip(orbit.ts, orbit.us, orbit.vs)]
            _write_csv(cfg.output_dir / f"orbit_{i}.csv", ["t", "u", "v"], rows)
    return EXIT_STABLE if (all_stable and all_verified) else EXIT_INCONCLUSIVE


def cmd_example1(cfg: RunConfig, out) -> int:
    if cfg.system_file is not None:
        spec = _load_spec(cfg)
        for name in "abcdef":
            if getattr(spec, name).kind != "constant":
                raise ValidationError("example1 requires constant coefficients")
        sys_ = constant_case.ConstantSystem(
            T=spec.T, a=spec.a.value, b=spec.b.value, c=spec.c.value,
            d=spec.d.value, e=spec.e.value, f=spec.f.value)
    else:
        sys_ = constant_case.demo_constants()

    p_star = next((p for p in cfg.exponents() if 1.0 < p < jfunc.INF), 2.0)
    x1, y1 = constant_case.equilibrium(sys_)
    k = constant_case.linear_term(sys_)
    print(f"constants: a={_fmt(sys_.a)} b={_fmt(sys_.b)} c={_fmt(sys_.c)} "
          f"d={_fmt(sys_.d)} e={_fmt(sys_.e)} f={_fmt(sys_.f)} T={_fmt(sys_.T)}", file=out)
    print(f"equilibrium / singleton 1-region point: ({_fmt(x1)}, {_fmt(y1)})", file=out)
    print(f"k = (b*x1 + f*y1)/2 = {_fmt(k)}", file=out)

    scan_ps = [1.0, p_star, constant_case.P_LARGE_DEFAULT]
    scan = constant_case.sign_scan(sys_, scan_ps)
    print("p        h(p)                      sign_ok   G(p)                      delta(p)", file=out)
    for p, h, ok, g, delta in scan.rows:
        print(f"{_p_token(p):<8} {_fmt(h):<25} {str(ok):<9} {_fmt(g):<25} {_fmt(delta)}", file=out)

    pattern = constant_case.check25(sys_, p_star)
    print(f"sign pattern (G(1) > 0, G({_p_token(p_star)}) < 0, G({_p_token(constant_case.P_LARGE_DEFAULT)}) > 0): "
          f"({pattern.g1_positive}, {pattern.gstar_negative}, {pattern.glarge_positive})", file=out)
    print(f"large-p dominance check (V > r^2/U): {pattern.limit_positive_by_ratio}", file=out)
    for note in pattern.diagnostics:
        print(f"  note: {note}", file=out)

    spec = sys_.to_system_spec()
    print("direct region-coupled tests:", file=out)
    direct_ps = [1.0, p_star, jfunc.INF]
    any_sign_issue = not (pattern.sign_ok_1 and pattern.sign_ok_star)
    for p in direct_ps:
        res = criteria.intertwined_test(spec, p)
        print(_result_lines(res), file=out)
    res_weak = criteria.weak_intertwined_test(spec, jfunc.INF)
    print(_result_lines(res_weak), file=out)
    if any_sign_issue:
        print(constant_case.DISCREPANCY_NOTE, file=out)

    report = criteria.scan_p(spec, direct_ps)
    print(f"conclusion: {report.conclusion}", file=out)
    if cfg.emit_csv:
        rows = [[_p_token(p), _fmt(h), str(int(ok)), _fmt(g), _fmt(delta)]
                for p, h, ok, g, delta in scan.rows]
        _write_csv(cfg.output_dir / "example1.csv",
                   ["p", "h", "sign_ok", "G", "delta"], rows)
    return _conclusion_exit(report.conclusion)


_DISPATCH = {
    "analyze": cmd_analyze,
    "scan": cmd_scan,
    "region": cmd_region,
    "jfunc": cmd_jfunc,
    "simulate": cmd_simulate,
    "example1": cmd_example1,
}


def run_command(cfg: RunConfig, out=None) -> int:
    """Dispatch one command; returns the process exit code."""
    if out is None:
        out = sys.stdout
    return _DISPATCH[cfg.command](cfg, out)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="pplv",
        description="Stability analysis of T-periodic planar predator-prey systems")
    parser.add_argument("--config", type=Path, default=None,
                        help="system config file")
    parser.add_argument("--command", required=True, choices=COMMANDS)
    parser.add_argument("--p", type=str, default=None,
                        help="comma list of exponents, 'inf' allowed")
    parser.add_argument("--out", type=Path, default=Path("out"),
                        help="output directory for CSV artifacts")
    parser.add_argument("--csv", action="store_true",
                        help="emit CSV artifacts for report-style commands")
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(
            command=args.command,
            system_file=args.config,
            p_list=None if args.p is None else parse_p_list(args.p),
            output_dir=args.out,
            emit_csv=args.csv,
        )
        return run_command(cfg)
    except (ParseError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (simulate.NoConvergence, simulate.NonPositive, simulate.StepFailure) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
