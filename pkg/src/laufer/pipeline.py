"""End-to-end analysis: potential document -> sections -> splitting verdicts."""

from __future__ import annotations

import json
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

from .bundle import BundleAnalysis, NotCriticalError, ferrari_check
from .critical import (
    DEFAULT_STARTS,
    DEFAULT_TOL,
    CriticalLocus,
    CriticalPoint,
    Kind,
    default_starts,
    solve_newton,
    solve_quadratic,
    solve_univariate,
)
from .laurent import Mode, ModeError, to_scalar
from .potential import CoordinateChange, GeometricPotential, normalize
from .sections import ObstructionError, reconstruct, verify_gluing
from .superpotential import Superpotential, build_combinatorial, build_residue


class InputError(ValueError):
    """Malformed potential, points or sweep document."""


# -- scalars in documents ----------------------------------------------------


def scalar_to_json(c):
    if isinstance(c, Fraction):
        return str(c)
    c = complex(c)
    if c.imag == 0:
        return c.real
    return [c.real, c.imag]


def scalar_from_json(value, mode: Mode):
    if mode is Mode.EXACT:
        if isinstance(value, bool) or not isinstance(value, (int, str)):
            raise InputError(f"exact mode needs an integer or 'p/q' string, got {value!r}")
        try:
            return to_scalar(value, Mode.EXACT)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    if isinstance(value, list) and len(value) == 2 and all(_is_real(v) for v in value):
        return complex(value[0], value[1])
    if not _is_real(value):
        raise InputError(f"float mode needs a number or [re, im], got {value!r}")
    return complex(value)


def _is_real(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


# -- parsing -----------------------------------------------------------------


def parse_potential(document: str | dict) -> GeometricPotential:
    """Read {"n": int, "mode": "exact"|"float", "terms": [{"d", "k", "t"}, ...]}.

    Duplicate (d, k) entries are summed. Terms with d = 0 are dropped with a
    warning; out-of-window k is accepted here and absorbed by ``normalize``.
    """
    if isinstance(document, str):
        try:
            doc = json.loads(document)
        except json.JSONDecodeError as exc:
            raise InputError(f"malformed JSON: {exc}") from exc
    else:
        doc = document
    if not isinstance(doc, dict):
        raise InputError("potential document must be a JSON object")
    n = doc.get("n")
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise InputError(f"'n' must be a nonnegative integer, got {n!r}")
    try:
        mode = Mode(doc.get("mode", "exact"))
    except ValueError as exc:
        raise InputError(f"unknown mode {doc.get('mode')!r}") from exc
    terms_in = doc.get("terms", [])
    if not isinstance(terms_in, list):
        raise InputError("'terms' must be a list")
    terms: dict = {}
    for entry in terms_in:
        if not isinstance(entry, dict) or not {"d", "k", "t"} <= set(entry):
            raise InputError(f"term needs d, k and t: {entry!r}")
        d, k = entry["d"], entry["k"]
        if any(isinstance(v, bool) or not isinstance(v, int) for v in (d, k)):
            raise InputError(f"d and k must be integers: {entry!r}")
        if d < 0:
            raise InputError(f"term degree d={d} must be >= 1")
        if d == 0:
            warnings.warn(f"dropping w-independent term (d=0, k={k})", stacklevel=2)
            continue
        t = scalar_from_json(entry["t"], mode)
        terms[(d, k)] = terms.get((d, k), 0) + t
    return GeometricPotential(n, terms, mode)


def potential_to_json(p: GeometricPotential) -> dict:
    return {
        "n": p.n,
        "mode": p.mode.value,
        "terms": [{"d": d, "k": k, "t": scalar_to_json(t)} for (d, k), t in p.terms.items()],
    }


def parse_points(document: str | list | dict, n: int, mode: Mode) -> list[CriticalPoint]:
    """A list of points (or {"points": [...]}), each a list of n+1 scalars."""
    if isinstance(document, str):
        try:
            doc = json.loads(document)
        except json.JSONDecodeError as exc:
            raise InputError(f"malformed JSON: {exc}") from exc
    else:
        doc = document
    if isinstance(doc, dict):
        doc = doc.get("points")
    if not isinstance(doc, list):
        raise InputError("points document must be a list of points")
    out = []
    for pt in doc:
        if not isinstance(pt, list) or len(pt) != n + 1:
            raise InputError(f"each point needs {n + 1} coordinates: {pt!r}")
        out.append(CriticalPoint(tuple(scalar_from_json(v, mode) for v in pt)))
    return out


# -- analysis ----------------------------------------------------------------


@dataclass
class PointResult:
    point: CriticalPoint
    mode: Mode
    analysis: BundleAnalysis | None = None
    gluing_ok: bool = False
    error: str | None = None

    @property
    def agrees(self) -> bool:
        return self.analysis is not None and self.analysis.agrees


@dataclass
class AnalysisReport:
    potential: GeometricPotential
    normalized: GeometricPotential
    absorbed: list[CoordinateChange]
    superpotential: Superpotential
    routes_agree: bool
    method: str
    locus: CriticalLocus | None = None
    results: list[PointResult] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)

    @property
    def verdict(self) -> bool:
        return all(r.agrees for r in self.results)

    @property
    def exit_status(self) -> int:
        return 0 if self.verdict and not self.failures else 1

    def to_json(self) -> dict:
        loc = None
        if self.locus is not None:
            loc = {
                "dimension": self.locus.dimension,
                "kernel": [[scalar_to_json(c) for c in v] for v in self.locus.kernel],
            }
        return {
            "input": potential_to_json(self.potential),
            "normalized": potential_to_json(self.normalized),
            "absorbed": [
                {
                    "chart": c.chart.value,
                    "d": c.d,
                    "k": c.original_k(self.potential.n),
                    "exponent": c.exponent,
                    "t": scalar_to_json(c.coefficient),
                }
                for c in self.absorbed
            ],
            "superpotential": {
                "monomials": [
                    {"alpha": list(a), "c": scalar_to_json(c)} for a, c in self.superpotential.monomials.items()
                ],
                "routes_agree": self.routes_agree,
            },
            "method": self.method,
            "locus": loc,
            "points": [_point_json(r) for r in self.results],
            "failures": list(self.failures),
            "verdict": self.verdict,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def _point_json(r: PointResult) -> dict:
    out = {
        "x": [scalar_to_json(v) for v in r.point.x],
        "mode": r.mode.value,
        "kind": r.point.kind.value,
        "residual": r.point.residual,
        "gluing": r.gluing_ok,
    }
    a = r.analysis
    if a is not None:
        out.update(
            corank=a.hessian_corank,
            predicted=list(a.predicted.as_tuple()),
            h0=a.oracle_h0,
            verified=list(a.verified.as_tuple()),
            agrees=a.agrees,
            near_threshold=a.near_threshold,
        )
    else:
        out["agrees"] = False
    if r.error:
        out["error"] = r.error
    return out


def _point_key(pt: CriticalPoint):
    return tuple((complex(v).real, complex(v).imag) if not isinstance(v, Fraction) else (v, 0) for v in pt.x)


def _analyze_point(p: GeometricPotential, pt: CriticalPoint) -> PointResult:
    res = PointResult(pt, p.mode)
    try:
        curve = reconstruct(p, pt.x)
        res.gluing_ok = verify_gluing(p, curve).ok
        res.analysis = ferrari_check(p, pt)
        if pt.kind is Kind.ISOLATED and res.analysis.hessian_corank > 0:
            res.point = replace(pt, kind=Kind.FAMILY_MEMBER)
            res.analysis = replace(res.analysis, point=res.point)
    except (ObstructionError, NotCriticalError) as exc:
        res.error = f"not a critical point: {exc}"
    return res


def analyze(
    p: GeometricPotential,
    points: Sequence | None = None,
    starts: int = DEFAULT_STARTS,
    tol: float = DEFAULT_TOL,
    seed: int = 0,
) -> AnalysisReport:
    """normalize -> build W -> find critical points -> rebuild sections -> compare splittings.

    Without explicit ``points``: a quadratic W is solved exactly (the origin
    and a kernel basis are sampled), n = 0 uses the companion matrix, and
    anything else falls back to Newton from random starts in FLOAT mode.
    """
    normal, log = normalize(p)
    W = build_combinatorial(normal)
    report = AnalysisReport(p, normal, log, W, W == build_residue(normal), method="")
    if not report.routes_agree:
        report.failures.append("combinatorial and residue constructions of W differ")

    target = normal
    if points is not None:
        report.method = "points"
        pts = [pt if isinstance(pt, CriticalPoint) else CriticalPoint(tuple(pt)) for pt in points]
    elif normal.mode is Mode.EXACT and W.is_quadratic_form():
        report.method = "quadratic"
        report.locus = solve_quadratic(W)
        pts = report.locus.samples()
    else:
        target = normal.to_float() if normal.mode is Mode.EXACT else normal
        Wf = W.to_float() if W.mode is Mode.EXACT else W
        if normal.n == 0 and not Wf.is_zero():
            report.method = "univariate"
            pts = solve_univariate(Wf)
        elif Wf.is_zero():
            report.method = "newton"
            pts = [CriticalPoint(tuple(0j for _ in range(normal.n + 1)), 0.0, Kind.FAMILY_MEMBER)]
        else:
            report.method = "newton"
            newton = solve_newton(Wf, default_starts(normal.n, starts, seed=seed), tol=tol)
            pts = newton.points
            report.failures.extend(f"newton did not converge from {s}" for s in newton.failures)

    for pt in sorted(pts, key=_point_key):
        r = _analyze_point(target, pt)
        if r.error:
            report.failures.append(r.error)
        elif not r.gluing_ok:
            report.failures.append(f"gluing check failed at {pt.x}")
        report.results.append(r)
    return report


def format_report(report: AnalysisReport) -> str:
    """Fixed-width table, one line per sampled critical point."""
    p = report.normalized
    lines = [
        f"n = {p.n}   mode = {p.mode.value}   terms = {len(p.terms)}   absorbed = {len(report.absorbed)}",
        f"W = {report.superpotential}",
        f"routes agree: {report.routes_agree}   method: {report.method}",
    ]
    if report.locus is not None:
        lines.append(f"critical locus: linear subspace of dimension {report.locus.dimension}")
    header = f"{'point':<36} {'kind':<14} {'r':>3} {'predicted':>12} {'h0':>3} {'verified':>12} {'glue':>5} {'ok':>5}"
    lines += [header, "-" * len(header)]
    for r in report.results:
        xs = "(" + ", ".join(_fmt_scalar(v) for v in r.point.x) + ")"
        if r.analysis is None:
            lines.append(f"{xs:<36} {r.point.kind.value:<14} {'-':>3} {'-':>12} {'-':>3} {'-':>12} {'-':>5} {'no':>5}")
            continue
        a = r.analysis
        flag = "*" if a.near_threshold else ""
        lines.append(
            f"{xs:<36} {r.point.kind.value:<14} {a.hessian_corank:>3} {str(a.predicted.as_tuple()):>12} "
            f"{a.oracle_h0:>3} {str(a.verified.as_tuple()):>12} {str(r.gluing_ok):>5} "
            f"{('yes' if a.agrees else 'no') + flag:>5}"
        )
    for f in report.failures:
        lines.append(f"failure: {f}")
    lines.append(f"verdict: {'PASS' if report.verdict else 'FAIL'}")
    return "\n".join(lines)


def _fmt_scalar(v) -> str:
    if isinstance(v, Fraction):
        return str(v)
    v = complex(v)
    if abs(v.imag) < 1e-12:
        return f"{v.real:.6g}"
    return f"{v.real:.4g}{v.imag:+.4g}j"


# -- sweeps ------------------------------------------------------------------


@dataclass(frozen=True)
class SweepSpec:
    base: GeometricPotential
    slots: tuple[tuple[int, int], ...] = ()
    grids: tuple[tuple, ...] = ()
    starts: int = DEFAULT_STARTS
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if len(self.slots) != len(self.grids):
            raise InputError("one grid per varied slot")
        if len(self.slots) > 2:
            raise InputError("at most two slots can be varied")
        for (d, k), grid in zip(self.slots, self.grids):
            if len(grid) < 1:
                raise InputError("grid sizes must be >= 1")
            if d < 1:
                raise InputError(f"varied slot needs d >= 1, got {(d, k)}")
            if (d, k) not in self.base.terms and not self.base.in_window(d, k):
                raise InputError(f"slot {(d, k)} is neither in the potential nor in the window 0 <= k <= dn")

    def cells(self) -> list[tuple]:
        if not self.slots:
            return [()]
        if len(self.slots) == 1:
            return [(v,) for v in self.grids[0]]
        return [(u, v) for u in self.grids[0] for v in self.grids[1]]

    @property
    def mode(self) -> Mode:
        return self.base.mode


def parse_range(text: str, mode: Mode) -> tuple:
    """'a:b:steps' -> evenly spaced values from a to b inclusive."""
    try:
        a_txt, b_txt, steps_txt = text.split(":")
        steps = int(steps_txt)
        if mode is Mode.EXACT:
            a, b = Fraction(a_txt), Fraction(b_txt)
        else:
            a, b = complex(float(a_txt)), complex(float(b_txt))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"range must look like a:b:steps, got {text!r}") from exc
    if steps < 1:
        raise InputError("grid sizes must be >= 1")
    if steps == 1:
        return (a,)
    return tuple(a + (b - a) * i / (steps - 1) for i in range(steps))


def parse_slot(text: str) -> tuple[int, int]:
    try:
        d, k = (int(v) for v in text.split(","))
    except ValueError as exc:
        raise InputError(f"slot must look like d,k, got {text!r}") from exc
    return d, k


@dataclass
class SweepRow:
    values: tuple
    n_points: int = 0
    pairs: list[tuple[int, tuple[int, int]]] = field(default_factory=list)
    agrees: bool = False
    error: str | None = None


def _sweep_cell(spec: SweepSpec, values: tuple) -> SweepRow:
    row = SweepRow(values)
    try:
        p = spec.base
        for (d, k), v in zip(spec.slots, values):
            p = p.with_term(d, k, v)
        rep = analyze(p, starts=spec.starts, tol=spec.tol)
        row.n_points = sum(1 for r in rep.results if r.analysis is not None)
        row.pairs = [
            (r.analysis.hessian_corank, r.analysis.verified.as_tuple()) for r in rep.results if r.analysis is not None
        ]
        row.agrees = rep.exit_status == 0
        if rep.failures:
            row.error = f"{len(rep.failures)} failure(s): {rep.failures[0]}"
    except Exception as exc:  # recorded per cell; the sweep continues
        row.error = f"{type(exc).__name__}: {exc}"
    return row


def sweep(spec: SweepSpec, jobs: int = 1) -> list[SweepRow]:
    cells = spec.cells()
    if jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_sweep_cell, [spec] * len(cells), cells))
    return [_sweep_cell(spec, c) for c in cells]


def format_tsv(spec: SweepSpec, rows: Sequence[SweepRow]) -> str:
    head = [f"t[{d},{k}]" for d, k in spec.slots] + ["n_points", "corank_splittings", "agrees", "error"]
    lines = ["\t".join(head)]
    for row in rows:
        pairs = ";".join(f"{r}:({a},{b})" for r, (a, b) in row.pairs)
        cols = [_fmt_scalar(v) for v in row.values] + [
            str(row.n_points),
            pairs,
            "true" if row.agrees else "false",
            (row.error or "").replace("\t", " ").replace("\n", " "),
        ]
        lines.append("\t".join(cols))
    return "\n".join(lines) + "\n"


__all__ = [
    "AnalysisReport",
    "InputError",
    "ModeError",
    "PointResult",
    "SweepRow",
    "SweepSpec",
    "analyze",
    "format_report",
    "format_tsv",
    "parse_points",
    "parse_potential",
    "parse_range",
    "parse_slot",
    "potential_to_json",
    "sweep",
]
