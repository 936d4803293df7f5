"""Command-line front end.

Every subcommand builds a :class:`Report`: a table of rows plus a list of
tolerance checks.  The report goes to ``--out`` (or stdout) as JSON or
CSV.  The exit status is 0 iff every check passed, 1 if a check failed
and 2 for invalid configurations.  Reports contain no timings or other
run-dependent data, so a fixed seed gives byte-identical files.

Examples
--------
::

    hypermonogenic algebra-check --n 3 --seed 1
    hypermonogenic eisenstein --n 3 --p 2 --k -2 --N 3 --B 400 --x 0,0,0,1
    hypermonogenic beta-compare --n 2 --k 0 --m 1,0 --xn 1
    hypermonogenic maass-verify --n 3 --N 3
    hypermonogenic suite --out reports/
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import diffops, fourier
from .clifford import (
    Multivector,
    Paravector,
    format_multivector,
    random_multivector,
)
from .eisenstein import EisensteinSpec, FAMILIES, eval_eisenstein
from .errors import HypermonogenicError
from .moebius import TruncationPolicy, VahlenMatrix, automorphy_factor, mobius_apply
from .specfun import gamma_fn, kv


@dataclass
class Check:
    name: str
    value: float
    tolerance: float
    passed: bool


@dataclass
class Report:
    command: str
    config: dict
    rows: list = field(default_factory=list)
    checks: list = field(default_factory=list)

    def check(self, name: str, value: float, tolerance: float, relation: str = "<") -> bool:
        value = float(value)
        ok = value < tolerance if relation == "<" else value <= tolerance
        self.checks.append(Check(name, value, float(tolerance), bool(ok and math.isfinite(value))))
        return ok

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> str:
        doc = {"command": self.command, "config": self.config, "rows": self.rows,
               "checks": [asdict(c) for c in self.checks], "passed": self.passed}
        return json.dumps(_finite(doc), indent=2, sort_keys=True, allow_nan=False) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        rows = self.rows or [asdict(c) for c in self.checks]
        if rows:
            keys = list(rows[0].keys())
            w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
            w.writeheader()
            for r in rows:
                w.writerow({k: _cell(r[k]) for k in keys})
        return buf.getvalue()

    def render(self, fmt: str) -> str:
        return self.to_json() if fmt == "json" else self.to_csv()

    def summary(self) -> str:
        lines = [f"{'PASS' if c.passed else 'FAIL'} {self.command}: {c.name} = {c.value:.3e} "
                 f"(tolerance {c.tolerance:.1e})" for c in self.checks]
        return "\n".join(lines)


def _finite(obj):
    """Replace non-finite floats by the strings ``"inf"``, ``"-inf"``, ``"nan"`` (strict JSON)."""
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    return obj


def _cell(v):
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple)):
        return ";".join(_cell(x) for x in v)
    return v


@dataclass(frozen=True)
class RunConfig:
    """Parameters shared by the subcommands, validated before dispatch."""

    command: str
    n: int = 3
    p: int = 2
    k: float = -2.0
    N: int = 3
    B: float = 400.0
    h: float = 1e-3
    out: str | None = None
    format: str = "json"
    seed: int = 0

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        B = getattr(args, "B", None)
        return cls(args.command, getattr(args, "n", 3), getattr(args, "p", 2), getattr(args, "k", -2.0),
                   getattr(args, "N", 3), 400.0 if B is None else B, getattr(args, "h", 1e-3),
                   args.out, args.format, args.seed)

    def eisenstein_spec(self, family: str = "khyper", s: float | None = None,
                        policy: TruncationPolicy | None = None) -> EisensteinSpec:
        """Build the series parameters; raises on a divergent configuration."""
        policy = policy or TruncationPolicy.norm(self.B)
        return EisensteinSpec(self.n, self.p, self.k, self.N, family, s, policy)


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _fmt(mv: Multivector) -> str:
    return format_multivector(mv)


# ---------------------------------------------------------------------------
# check suites
# ---------------------------------------------------------------------------

def algebra_report(n: int = 3, cases: int = 200, seed: int = 0) -> Report:
    """Generator relations, associativity, involution laws and paravector inverses."""
    rng = np.random.default_rng(seed)
    rep = Report("algebra-check", {"n": n, "cases": cases, "seed": seed})
    gens = [Multivector.basis(n, i) for i in range(1, n + 1)]
    one = Multivector.scalar(n)
    rel = 0.0
    for i, a in enumerate(gens):
        rel = max(rel, (a * a + one).norm())
        for b in gens[i + 1:]:
            rel = max(rel, (a * b + b * a).norm())
    errs = {"associativity": 0.0, "reversion_anti": 0.0, "main_auto": 0.0, "conjugation_anti": 0.0,
            "paravector_inverse": 0.0, "pq_split": 0.0}
    en = Multivector.basis(n, n)
    for _ in range(cases):
        a, b, c = (random_multivector(n, rng) for _ in range(3))
        scale = a.norm() * b.norm()
        errs["associativity"] = max(errs["associativity"], ((a * b) * c - a * (b * c)).norm() / (scale * c.norm()))
        errs["reversion_anti"] = max(errs["reversion_anti"], ((a * b).rev() - b.rev() * a.rev()).norm() / scale)
        errs["main_auto"] = max(errs["main_auto"], ((a * b).main() - a.main() * b.main()).norm() / scale)
        errs["conjugation_anti"] = max(errs["conjugation_anti"], ((a * b).conj() - b.conj() * a.conj()).norm() / scale)
        x = Multivector.from_paravector(n, rng.standard_normal(n + 1))
        errs["paravector_inverse"] = max(errs["paravector_inverse"], (x * x.inverse() - one).norm())
        P, Q = a.pq_split()
        errs["pq_split"] = max(errs["pq_split"], (P + Q * en - a).norm() / a.norm())
    rep.rows.append({"property": "generator_relations", "max_error": rel})
    rep.check("generator_relations", rel, 0.0, "<=")
    for name, v in errs.items():
        rep.rows.append({"property": name, "max_error": v})
        rep.check(name, v, 1e-12)
    return rep


def random_vahlen(n: int, rng: np.random.Generator, length: int = 4) -> VahlenMatrix:
    """Random word in ``J`` and real translations ``T_b`` with ``b`` in the span of ``1, e1 .. e_{n-1}``."""
    M = VahlenMatrix.identity(n)
    J = VahlenMatrix.inversion(n)
    for _ in range(length):
        b = np.zeros(n + 1)
        b[:n] = rng.uniform(-1.5, 1.5, size=n)
        M = M @ VahlenMatrix.translation(Multivector.from_paravector(n, b)) @ J
    return M


def _random_point(n: int, rng: np.random.Generator) -> Paravector:
    c = np.empty(n + 1)
    c[:n] = rng.uniform(-1, 1, size=n)
    c[n] = rng.uniform(0.5, 2.0)
    return Paravector(c)


def mobius_report(n: int = 3, cases: int = 200, k: float = -2.0, seed: int = 0) -> Report:
    """Group-action composition, height identity and the automorphy cocycle."""
    rng = np.random.default_rng(seed)
    rep = Report("mobius-check", {"n": n, "cases": cases, "k": k, "seed": seed})
    comp = height = cocycle = 0.0
    for _ in range(cases):
        M = random_vahlen(n, rng, int(rng.integers(1, 4)))
        L = random_vahlen(n, rng, int(rng.integers(1, 4)))
        x = _random_point(n, rng)
        y = mobius_apply(L, x)
        lhs = mobius_apply(M @ L, x).coords
        rhs = mobius_apply(M, y).coords
        comp = max(comp, float(np.linalg.norm(lhs - rhs) / max(1.0, np.linalg.norm(rhs))))
        den = (L.c * x.to_multivector() + L.d).norm()
        height = max(height, abs(y.xn - x.xn / den ** 2) / y.xn)
        j_ml = automorphy_factor(M @ L, x, k)
        j_chain = automorphy_factor(L, x, k) * automorphy_factor(M, y, k)
        cocycle = max(cocycle, (j_ml - j_chain).norm() / j_ml.norm())
    for name, v in (("composition", comp), ("height_identity", height), ("cocycle", cocycle)):
        rep.rows.append({"property": name, "max_error": v})
        rep.check(name, v, 1e-10)
    return rep


def bessel_report(cases: int = 50, seed: int = 0) -> Report:
    """Closed forms of ``K_{1/2}``, ``K_{3/2}``, the three-term recurrence and ``Gamma(x+1) = x Gamma(x)``."""
    rng = np.random.default_rng(seed)
    rep = Report("bessel-check", {"cases": cases, "seed": seed})
    closed = rec = gam = 0.0
    for _ in range(cases):
        x = float(rng.uniform(0.05, 30.0))
        nu = float(rng.uniform(-3.0, 3.0))
        k12 = math.sqrt(math.pi / (2 * x)) * math.exp(-x)
        closed = max(closed, abs(kv(0.5, x) - k12) / k12, abs(kv(1.5, x) - k12 * (1 + 1 / x)) / (k12 * (1 + 1 / x)))
        lhs = kv(nu + 1, x) - kv(nu - 1, x)
        rhs = 2 * nu / x * kv(nu, x)
        rec = max(rec, abs(lhs - rhs) / max(abs(kv(nu + 1, x)), abs(kv(nu - 1, x))))
        g = float(rng.uniform(0.1, 20.0))
        gam = max(gam, abs(gamma_fn(g + 1) - g * gamma_fn(g)) / gamma_fn(g + 1))
    for name, v, tol in (("closed_forms", closed, 1e-9), ("recurrence", rec, 1e-8), ("gamma_functional", gam, 1e-11)):
        rep.rows.append({"property": name, "max_error": v})
        rep.check(name, v, tol)
    return rep


def pde_report(n: int = 3, k: float = 0.0, points: int = 20, h: float = 1e-3, seed: int = 0) -> Report:
    """Residual sweep for ``f = conj(x)/|x|^{n+1-k}`` and its derived scalar functions."""
    rep = Report("pde-residual", {"n": n, "k": k, "points": points, "h": h, "seed": seed})
    s = diffops.StencilSpec(h, 4)
    pts = diffops.sample_points(n, points, seed)
    f = diffops.kernel_oracle(n, k)
    u = diffops.component_oracle(f, 0, "P", real_part=True)
    q = diffops.component_oracle(f, 0, "Q", real_part=True)
    cases = [("khyper", f), ("khypharm", u), ("qpart", q), ("maass", diffops.maass_transform(u, k)),
             ("laplace_beltrami", diffops.maass_transform(u, k))]
    tol = {"khyper": 1e-5, "khypharm": 1e-5, "qpart": 1e-5, "maass": 1e-4, "laplace_beltrami": 1e-4}
    rows = diffops.residual_sweep(cases, pts, k, s)
    rep.rows.extend(rows)
    for op, _ in cases:
        rep.check(f"max {op} residual", max(r["residual_norm"] for r in rows if r["operator"] == op), tol[op])
    return rep


def eisenstein_report(spec: EisensteinSpec, points: Sequence[Sequence[float]],
                      limit_tol: float | None = None) -> Report:
    """Series values with tail estimates at the given points.

    With ``limit_tol`` the points are read as a path ``t e_n`` going up the
    cusp: ``|eps(x) - 1|`` must decrease along the path and end below
    ``limit_tol``.
    """
    rep = Report("eisenstein", {"spec": spec.to_dict()})
    finite = 0.0
    dist = []
    for x in points:
        sv = eval_eisenstein(spec, x)
        dist.append((sv.value - 1).norm())
        rep.rows.append({"x": [float(v) for v in x], "value": _fmt(sv.value), "distance_to_one": dist[-1],
                         **sv.to_dict()})
        finite = max(finite, 0.0 if np.all(np.isfinite(sv.value.coeffs)) else math.inf)
    rep.check("non-finite values", finite, 0.0, "<=")
    if limit_tol is not None:
        increase = max([b - a for a, b in zip(dist, dist[1:])] + [-math.inf])
        rep.check("largest increase of |eps - 1| along the path", increase, 0.0)
        rep.check("|eps - 1| at the last point", dist[-1], limit_tol)
    return rep


def beta_grid(n: int) -> list[tuple]:
    """Default ``(m, x_n, k)`` grid: three frequencies, three heights, ``k`` in ``{0, -1.5}``."""
    ms = [(1.0,) + (0.0,) * (n - 1), (1.0, 1.0) + (0.0,) * (n - 2), (0.0, 2.0) + (0.0,) * (n - 2)]
    return [(m, xn, k) for m in ms for xn in (0.5, 1.0, 1.5) for k in (0.0, -1.5)]


def beta_report(n: int, cases: Sequence[tuple]) -> Report:
    """Closed-form ``beta`` against the quadrature oracle."""
    rep = Report("beta-compare", {"n": n, "cases": [[list(m), xn, k] for m, xn, k in cases]})
    worst = 0.0
    for m, xn, k in cases:
        closed = fourier.beta_closed_form(m, xn, n, k)
        oracle, err = fourier.beta_numeric_oracle(m, xn, n, k, full_output=True)
        rel = (closed - oracle).norm() / oracle.norm()
        worst = max(worst, rel)
        rep.rows.append({"n": n, "k": float(k), "m": [float(v) for v in m], "xn": float(xn),
                         "closed_form": _fmt(closed), "oracle": _fmt(oracle),
                         "oracle_error_estimate": float(err), "relative_error": float(rel)})
    rep.check("max relative error", worst, 1e-5)
    return rep


KEYSTONE_FREQUENCIES = [(1, 0, 0), (0, 1, 0), (1, 1, 0), (1, 1, 1), (2, 0, 0)]


def fourier_report(spec: EisensteinSpec, ms: Sequence, xns: Sequence[float], grid: int = 8) -> Report:
    """``alpha(m)`` recovered at several heights, with spreads and ``e_n`` masses."""
    rep = Report("fourier-extract", {"spec": spec.to_dict(), "xn": list(map(float, xns)), "grid": grid})
    quad = fourier.QuadratureSpec(grid)
    ests = fourier.alpha_table(spec, list(ms) + [(0,) * (spec.p + 1)], xns, quad)
    const = ests.pop()
    spread = mass = 0.0
    for e in ests:
        rep.rows.append({"m": list(e.m.m), "alpha": _fmt(e.alpha), "alpha_norm": e.alpha.norm(),
                         "spread": e.spread, "en_mass": e.en_mass, "dropped": len(e.dropped)})
        spread = max(spread, e.spread)
        mass = max(mass, e.en_mass)
    rep.check("max spread across heights", spread, 1e-3)
    rep.check("max e_n blade mass", mass, 1e-6)
    rep.check("constant term |a(0) - 1|", (const.alpha - 1).norm(), 1e-6)
    exp = fourier.FourierExpansion(spec.n, spec.k, spec.N, a0=const.alpha, alpha0=const.alpha0,
                                   coeffs={e.m: e.alpha for e in ests})
    rep.config["expansion"] = json.loads(exp.to_json())
    return rep


def maass_report(n: int = 3, N: int = 3, p: int = 0, B: float = 400.0, points: int = 8,
                 h: float = 1e-3, seed: int = 0) -> Report:
    """Hyperbolic Laplacian eigenvalue of ``x_n^{(n-1)/2} Sc(eps)`` for the monogenic (k = 0) series.

    The eigenvalue is estimated by the Rayleigh quotient
    ``sum g LB(g) / sum g^2`` over seeded sample points.  The target is
    ``-(n^2 - 1)/4``.
    """
    spec = EisensteinSpec(n, p, 0.0, N, "khyper", None, TruncationPolicy.norm(B))
    from .eisenstein import eisenstein_oracle

    rep = Report("maass-verify", {"spec": spec.to_dict(), "points": points, "h": h, "seed": seed})
    g = diffops.maass_transform(diffops.component_oracle(eisenstein_oracle(spec), 0, real_part=True), 0.0)
    s = diffops.StencilSpec(h, 4)
    pts = diffops.sample_points(n, points, seed)
    num = den = 0.0
    for x in pts:
        g0 = g.evaluate(x[None, :])[0, 0].real
        lb = diffops.laplace_beltrami(g, x, s).real
        num += g0 * lb
        den += g0 * g0
        rep.rows.append({"x": [float(v) for v in x], "g": float(g0), "laplace_beltrami": float(lb),
                         "ratio": float(lb / g0)})
    lam = num / den
    target = -(n * n - 1) / 4.0
    rep.config["eigenvalue"] = float(lam)
    rep.config["target"] = target
    rep.check("|eigenvalue - target|", abs(lam - target), 1e-3)
    return rep


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="output file (suite: directory); default stdout")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--seed", type=int, default=0)


def _series_args(p: argparse.ArgumentParser, n=3, pp=2, k=-2.0, N=3) -> None:
    p.add_argument("--n", type=int, default=n)
    p.add_argument("--p", type=int, default=pp)
    p.add_argument("--k", type=float, default=k)
    p.add_argument("--N", type=int, default=N)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hypermonogenic",
                                 description="Numerics for k-hypermonogenic Eisenstein series on upper half-space.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("algebra-check", help="Clifford algebra property suite")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--cases", type=int, default=200)
    _common(p)

    p = sub.add_parser("mobius-check", help="Moebius action and cocycle suite")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--k", type=float, default=-2.0)
    p.add_argument("--cases", type=int, default=200)
    _common(p)

    p = sub.add_parser("bessel-check", help="Bessel/Gamma property suite")
    p.add_argument("--cases", type=int, default=50)
    _common(p)

    p = sub.add_parser("pde-residual", help="finite-difference residual sweep")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--k", type=float, default=0.0)
    p.add_argument("--points", type=int, default=20)
    p.add_argument("--h", type=float, default=1e-3)
    _common(p)

    p = sub.add_parser("eisenstein", help="evaluate a truncated series")
    _series_args(p)
    p.add_argument("--family", choices=FAMILIES, default="khyper")
    p.add_argument("--s", type=float, default=None, help="hecke regularisation exponent")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--B", type=float, default=None, help="norm bound |c|^2+|d|^2 <= B (default 400)")
    g.add_argument("--words", type=int, default=None, help="word-length bound")
    g.add_argument("--classes", type=float, default=None, help="class bound |c|^2 <= C (khyper only)")
    p.add_argument("--x", action="append", default=None, help="point x0,...,xn (repeatable)")
    p.add_argument("--grid", default=None, help="START:STOP:COUNT along x_n, at the first --x (or x = 0)")
    p.add_argument("--gnuplot", default=None, help="also write a gnuplot script plotting the CSV output")
    _common(p)

    p = sub.add_parser("fourier-extract", help="alpha(m) table from the periodic k = -2 series")
    _series_args(p)
    p.add_argument("--classes", type=float, default=36.0)
    p.add_argument("--window", type=float, nargs=2, default=(4.0, 1.0), metavar=("RADIUS", "WIDTH"))
    p.add_argument("--grid", type=int, default=8, help="quadrature points per axis")
    p.add_argument("--m", action="append", default=None, help="frequency m0,...,mp (repeatable)")
    p.add_argument("--xn", action="append", type=float, default=None, help="sample height (repeatable)")
    _common(p)

    p = sub.add_parser("beta-compare", help="closed-form beta against the quadrature oracle")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--k", action="append", type=float, default=None)
    p.add_argument("--m", action="append", default=None)
    p.add_argument("--xn", action="append", type=float, default=None)
    _common(p)

    p = sub.add_parser("maass-verify", help="Laplace-Beltrami eigenvalue of the transformed monogenic series")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--N", type=int, default=3)
    p.add_argument("--p", type=int, default=0)
    p.add_argument("--B", type=float, default=400.0)
    p.add_argument("--points", type=int, default=8)
    p.add_argument("--h", type=float, default=1e-3)
    _common(p)

    p = sub.add_parser("suite", help="run every check and write one report per check into --out")
    _common(p)
    return ap


def _eisenstein_points(args) -> list[list[float]]:
    base = [_floats(x) for x in args.x] if args.x else []
    if args.grid:
        start, stop, count = args.grid.split(":")
        x0 = base[0] if base else [0.0] * (args.n + 1)
        return [x0[:-1] + [float(t)] for t in np.linspace(float(start), float(stop), int(count))]
    return base or [[0.0] * args.n + [1.0]]


def _gnuplot_script(data_path: str, title: str) -> str:
    return (f"set datafile separator ','\nset key autotitle columnhead\nset xlabel 'x_n'\n"
            f"set title '{title}'\n"
            f"plot '{data_path}' using (column('x_n')):(column('scalar_real')) with linespoints\n")


def run(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    fmt = args.format
    try:
        if args.command == "suite":
            return run_suite(Path(args.out or "reports"), args.seed)
        rep = _dispatch(args)
    except HypermonogenicError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return 2
    text = rep.render(fmt)
    if args.command == "eisenstein" and fmt == "csv":
        text = _eisenstein_csv(rep)
    if args.out:
        Path(args.out).write_text(text)
        print(rep.summary())
        if getattr(args, "gnuplot", None):
            Path(args.gnuplot).write_text(_gnuplot_script(args.out, "Sc eps(x)"))
    else:
        sys.stdout.write(text)
        print(rep.summary(), file=sys.stderr)
    return 0 if rep.passed else 1


def _eisenstein_csv(rep: Report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "x_n", "scalar_real", "scalar_imag", "value", "tail_estimate", "terms_used"])
    for r in rep.rows:
        sc = r["value_blades"][0]
        w.writerow([_cell(r["x"]), repr(r["x"][-1]), repr(sc[0]), repr(sc[1]), r["value"],
                    repr(r["tail_estimate"]), r["terms_used"]])
    return buf.getvalue()


def _dispatch(args) -> Report:
    cmd = args.command
    if cmd == "algebra-check":
        return algebra_report(args.n, args.cases, args.seed)
    if cmd == "mobius-check":
        return mobius_report(args.n, args.cases, args.k, args.seed)
    if cmd == "bessel-check":
        return bessel_report(args.cases, args.seed)
    if cmd == "pde-residual":
        return pde_report(args.n, args.k, args.points, args.h, args.seed)
    if cmd == "eisenstein":
        if args.words is not None:
            policy = TruncationPolicy.words(args.words)
        elif args.classes is not None:
            policy = TruncationPolicy.lattice(args.classes)
        else:
            policy = None
        spec = RunConfig.from_args(args).eisenstein_spec(args.family, args.s, policy)
        return eisenstein_report(spec, _eisenstein_points(args))
    if cmd == "fourier-extract":
        spec = RunConfig.from_args(args).eisenstein_spec(
            policy=TruncationPolicy.lattice(args.classes, *args.window))
        ms = [tuple(_floats(m)) for m in args.m] if args.m else KEYSTONE_FREQUENCIES
        return fourier_report(spec, ms, args.xn or [0.8, 1.0, 1.25], args.grid)
    if cmd == "beta-compare":
        if args.m or args.xn or args.k:
            n = args.n
            ms = [tuple(_floats(m)) for m in args.m] if args.m else [(1.0,) + (0.0,) * (n - 1)]
            cases = [(m, xn, k) for m in ms for xn in (args.xn or [1.0]) for k in (args.k or [0.0])]
        else:
            cases = beta_grid(args.n)
        return beta_report(args.n, cases)
    if cmd == "maass-verify":
        return maass_report(args.n, args.N, args.p, args.B, args.points, args.h, args.seed)
    raise ValueError(f"unknown command {cmd}")


SUITE: list[tuple[str, Callable[[int], Report]]] = [
    ("algebra-check", lambda seed: algebra_report(3, 200, seed)),
    ("mobius-check", lambda seed: mobius_report(3, 200, -2.0, seed)),
    ("bessel-check", lambda seed: bessel_report(50, seed)),
    ("pde-residual-n3-k0", lambda seed: pde_report(3, 0.0, 20, 1e-3, seed)),
    ("pde-residual-n3-k-2", lambda seed: pde_report(3, -2.0, 20, 1e-3, seed)),
    ("pde-residual-n2-k-1.5", lambda seed: pde_report(2, -1.5, 20, 1e-3, seed)),
    ("eisenstein", lambda seed: eisenstein_report(
        EisensteinSpec(3, 2, -2.0, 3), [[0, 0, 0, t] for t in (2.0, 4.0, 8.0, 16.0)], 0.05)),
    ("beta-compare-n2", lambda seed: beta_report(2, beta_grid(2))),
    ("beta-compare-n3", lambda seed: beta_report(3, beta_grid(3))),
    ("fourier-extract", lambda seed: fourier_report(
        EisensteinSpec(3, 2, -2.0, 3, policy=TruncationPolicy.lattice(36.0)), KEYSTONE_FREQUENCIES,
        [0.8, 1.0, 1.25])),
    ("maass-verify", lambda seed: maass_report(3, 3, 0, 400.0, 8, 1e-3, seed)),
]


def run_suite(out: Path, seed: int = 0) -> int:
    """Write ``<name>.json`` for every suite entry plus ``summary.json``."""
    out.mkdir(parents=True, exist_ok=True)
    summary = {}
    for name, make in SUITE:
        rep = make(seed)
        (out / f"{name}.json").write_text(rep.to_json())
        summary[name] = rep.passed
        print(rep.summary())
    (out / "summary.json").write_text(json.dumps({"seed": seed, "passed": summary}, indent=2, sort_keys=True) + "\n")
    return 0 if all(summary.values()) else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
