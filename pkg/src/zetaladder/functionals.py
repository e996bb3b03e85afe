"""Finite-height evaluation of the ladder limit functionals.

Every functional here has a stated limit as T (or tau) grows, with error
O(ln ln T / ln T).  Values are reported on a grid together with a two-term
extrapolation a + b / ln(grid) and a trend flag; nothing is asserted as an
equality at finite height.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DomainError, LadderRangeError, PoleError, ZetaLadderError
from .fourier import FourierMode, TransformSpec, cosine_diff_functional, ip_pullback, mode_norm
from .ladder import Ladder
from .quadrature import Interval, integrate
from .zeta import zeta_abs2_array, zeta_em

DEFAULT_T_GRID = (1.0e3, 1.0e4, 1.0e5, 1.0e6)
SIGMA_MIN_OFFSET = 0.05
VERDICT_COUNTEREXAMPLE = "counterexample signature"
VERDICT_CONSISTENT = "limit ≠ 1 consistent with Fermat-Wiles"
VERDICT_INCONCLUSIVE = "inconclusive at this height"


# ---------------------------------------------------------------------------
# Fermat rationals


@dataclass(frozen=True)
class FermatRational:
    """z^n / (x^n + y^n) held as exact integers."""

    x: int
    y: int
    z: int
    n: int

    def __post_init__(self):
        for name in ("x", "y", "z", "n"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int):
                raise TypeError(f"{name} must be an int")
        if min(self.x, self.y, self.z) < 1:
            raise ValueError("x, y, z must be >= 1")
        if self.n < 2:
            raise ValueError("n must be >= 2")

    @property
    def num(self) -> int:
        return self.z**self.n

    @property
    def den(self) -> int:
        return self.x**self.n + self.y**self.n

    @property
    def value(self) -> Fraction:
        return Fraction(self.num, self.den)

    @property
    def real_value(self) -> float:
        return float(self.value)

    @property
    def is_one(self) -> bool:
        return self.num == self.den

    def __str__(self):
        return f"{self.z}^{self.n}/({self.x}^{self.n}+{self.y}^{self.n})"


def fermat_rational(x: int, y: int, z: int, n: int) -> FermatRational:
    return FermatRational(x, y, z, n)


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class Extrapolation:
    limit_estimate: float
    slope: float
    residual: float


def extrapolate(grid, values) -> Extrapolation:
    """Least-squares fit of values ~ a + b / ln(grid); the limit estimate is a."""
    g = np.asarray(grid, dtype=float)
    v = np.asarray(values, dtype=float)
    if g.ndim != 1 or g.shape != v.shape:
        raise ValueError("grid and values must be 1-d of equal length")
    if g.shape[0] < 3:
        raise DomainError("extrapolation needs at least 3 grid points")
    if np.any(g <= 1) or not np.all(np.isfinite(v)):
        raise DomainError("grid must exceed 1 and values must be finite")
    A = np.column_stack([np.ones_like(g), 1.0 / np.log(g)])
    sol, _, rank, _ = np.linalg.lstsq(A, v, rcond=None)
    if rank < 2:
        raise DomainError("degenerate grid: need at least two distinct points")
    res = float(np.sqrt(np.sum((A @ sol - v) ** 2)))
    return Extrapolation(float(sol[0]), float(sol[1]), res)


@dataclass
class ConvergenceReport:
    name: str
    grid: list
    raw: list
    normalized: list
    target: float
    extrapolated_limit: float | None = None
    margin: float | None = None
    trend_ok: bool = False
    residual: float | None = None
    params: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)
    skipped: list = field(default_factory=list)

    def __post_init__(self):
        if not (len(self.grid) == len(self.raw) == len(self.normalized)):
            raise ValueError("grid, raw and normalized must have equal lengths")
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise ValueError("grid must be strictly increasing")

    @property
    def deviations(self):
        return [abs(v - self.target) for v in self.normalized]

    def to_dict(self):
        return asdict(self)

    def to_json(self, **extra):
        return json.dumps({**extra, "report": self.to_dict()}, indent=2, sort_keys=True, default=_json_default)

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["grid", "raw", "normalized", "target"])
        for g, r, n in zip(self.grid, self.raw, self.normalized):
            w.writerow([fmt17(g), fmt17(r), fmt17(n), fmt17(self.target)])
        return buf.getvalue()


def fmt17(v) -> str:
    """Round-trip-exact decimal text for a double."""
    if v is None:
        return ""
    return format(float(v), ".17g")


def _json_default(o):
    if isinstance(o, Fraction):
        return f"{o.numerator}/{o.denominator}"
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not serializable: {type(o).__name__}")


def _finish(name, grid, raw, norm, target, params, skipped, extra=None):
    rep = ConvergenceReport(name, list(grid), list(raw), list(norm), float(target), params=params, skipped=skipped)
    dev = rep.deviations
    rep.trend_ok = len(dev) >= 2 and all(b <= a for a, b in zip(dev, dev[1:]))
    if len(grid) >= 3:
        ex = extrapolate(grid, norm)
        rep.extrapolated_limit = ex.limit_estimate
        rep.residual = ex.residual
        rep.margin = abs(ex.limit_estimate - rep.target)
    rep.extra.update(extra or {})
    return rep


def _evaluate(points, fn):
    """Apply fn over grid points in order, collecting ladder range/domain failures as skips."""
    grid, raw, norm, skipped = [], [], [], []
    for p in points:
        try:
            r, n = fn(p)
        except (LadderRangeError, DomainError) as exc:
            skipped.append({"grid": float(p), "error": str(exc)})
            continue
        grid.append(float(p))
        raw.append(float(r))
        norm.append(float(n))
    return grid, raw, norm, skipped


# ---------------------------------------------------------------------------
# W substitution and the iterated product functional


def W_subst(x: float, tau: float, k: int, A: float, domain_hi: float | None = None) -> float:
    """W(x, tau) = tau^(x / A^(1/k))."""
    if not (x > 0 and A > 0):
        raise DomainError("x and A must be positive")
    if not tau > 1:
        raise DomainError("tau must exceed 1")
    if k < 1:
        raise DomainError("k must be >= 1")
    lnW = x / A ** (1.0 / k) * math.log(tau)
    limit = math.log(domain_hi) if domain_hi is not None else math.log(np.finfo(float).max)
    if lnW > limit:
        raise LadderRangeError(f"W = exp({lnW:.6g}) beyond the available domain", required=math.exp(min(lnW, 700.0)))
    return math.exp(lnW)


def default_tau_grid(x: float, k: int, A: float, heights=DEFAULT_T_GRID):
    """tau values whose substituted heights W(x, tau) are the given heights."""
    return [float(h ** (A ** (1.0 / k) / x)) for h in heights]


def theorem1(ladder: Ladder, x: float, l: float, k: int, mode: FourierMode, tau_grid=None, tol=1e-10):
    """(1/ln^k tau) * I(mode, mode) at T = W(x, tau); limit x^k."""
    if k < 1:
        raise DomainError("k must be >= 1")
    if mode.l != l:
        raise ValueError("mode.l must equal l")
    A = mode_norm(mode)
    taus = list(tau_grid) if tau_grid is not None else default_tau_grid(x, k, A)

    def one(tau):
        W = W_subst(x, tau, k, A, ladder.config.domain_hi)
        raw = ip_pullback(ladder, mode, mode, TransformSpec(W, k, l, tol))
        return raw, raw / math.log(tau) ** k

    grid, raw, norm, skipped = _evaluate(taus, one)
    algebra = [A * math.log(W_subst(x, t, k, A)) ** k / math.log(t) ** k - x**k for t in grid]
    params = {"x": x, "l": l, "k": k, "mode": mode.label, "m": mode.m, "A": A, "tol": tol}
    extra = {"heights": [W_subst(x, t, k, A) for t in grid], "target_algebra_residual": algebra}
    return _finish("theorem1", grid, raw, norm, x**k, params, skipped, extra)


@dataclass
class FermatConditionReport:
    report: ConvergenceReport
    fermat: FermatRational
    target_exact: Fraction
    verdict: str
    separation_from_one: float | None
    uncertainty: float | None

    def to_dict(self):
        return {
            "report": self.report.to_dict(),
            "fermat": {**asdict(self.fermat), "num": self.fermat.num, "den": self.fermat.den},
            "target_exact": self.target_exact,
            "verdict": self.verdict,
            "separation_from_one": self.separation_from_one,
            "uncertainty": self.uncertainty,
        }


def fermat_zeta_condition(ladder: Ladder, fr: FermatRational, l: float, k: int, mode: FourierMode, tau_grid=None, tol=1e-10):
    """Iterated product functional at x = fr, with a verdict on the limit's distance from 1.

    The target fr^k equals 1 exactly iff z^n = x^n + y^n (integer test).
    Otherwise the verdict is "consistent" when the extrapolated limit sits
    further from 1 than its own uncertainty, taken as the larger of the fit
    residual and the gap between the extrapolation and the last grid value.
    """
    rep = theorem1(ladder, fr.real_value, l, k, mode, tau_grid, tol)
    rep.name = "fermat_zeta_condition"
    rep.params["fermat"] = [fr.x, fr.y, fr.z, fr.n]
    exact = fr.value**k
    sep = unc = None
    if rep.extrapolated_limit is not None:
        sep = abs(rep.extrapolated_limit - 1.0)
        unc = max(rep.residual, abs(rep.extrapolated_limit - rep.normalized[-1]))
    if fr.is_one:
        verdict = VERDICT_COUNTEREXAMPLE
    elif sep is not None and sep > unc:
        verdict = VERDICT_CONSISTENT
    else:
        verdict = VERDICT_INCONCLUSIVE
    return FermatConditionReport(rep, fr, exact, verdict, sep, unc)


# ---------------------------------------------------------------------------
# F1, F2 and the cosine-difference functional


def _as_length(l):
    if isinstance(l, FermatRational):
        return l.real_value, l
    if not l > 0:
        raise DomainError("l must be positive")
    return float(l), None


def functional_F1(ladder: Ladder, l, k: int, T_grid=DEFAULT_T_GRID, tol=1e-10):
    """(1/ln^k T) * I(unit, unit); limit 2l.  A FermatRational l reports the != 2 condition."""
    lf, fr = _as_length(l)
    unit = FourierMode("unit", 1, lf)

    def one(T):
        raw = ip_pullback(ladder, unit, unit, TransformSpec(T, k, lf, tol))
        return raw, raw / math.log(T) ** k

    grid, raw, norm, skipped = _evaluate(T_grid, one)
    extra = {}
    if fr is not None:
        extra["condition"] = {"reference": 2, "target_exact": 2 * fr.value, "holds": 2 * fr.value != 2}
    return _finish("F1", grid, raw, norm, 2 * lf, {"l": lf, "k": k, "tol": tol}, skipped, extra)


def functional_F2(ladder: Ladder, l, k: int, m: int, T_grid=DEFAULT_T_GRID, kind="cos2", convention="standard", tol=1e-10):
    """(1/ln^k T) * I(f, f) with f = cos or sin of frequency pi m / l; limit l.

    ``convention="printed"`` uses frequency pi m l instead; the target is then
    the exact integral of f^2 over [0, 2l], which differs from l in general.
    """
    if kind not in ("cos2", "sin2"):
        raise ValueError("kind must be 'cos2' or 'sin2'")
    lf, fr = _as_length(l)
    mode = FourierMode("cosine" if kind == "cos2" else "sine", m, lf, convention)
    target = mode_norm(mode)

    def one(T):
        raw = ip_pullback(ladder, mode, mode, TransformSpec(T, k, lf, tol))
        return raw, raw / math.log(T) ** k

    grid, raw, norm, skipped = _evaluate(T_grid, one)
    extra = {}
    if fr is not None:
        holds = (not fr.is_one) if convention == "standard" else target != 1.0
        extra["condition"] = {"reference": 1, "target": target, "holds": holds, "convention": convention}
    params = {"l": lf, "k": k, "m": m, "kind": kind, "convention": convention, "tol": tol}
    return _finish("F2", grid, raw, norm, target, params, skipped, extra)


def cosine_diff_report(ladder: Ladder, l: float, k: int, m: int, T_grid=DEFAULT_T_GRID, tol=1e-10):
    """The cos^2 minus sin^2 functional over a grid; limit 0."""

    def one(T):
        v = cosine_diff_functional(ladder, m, l, TransformSpec(T, k, l, tol))
        return v * math.log(T) ** k, v

    grid, raw, norm, skipped = _evaluate(T_grid, one)
    return _finish("cosine_diff", grid, raw, norm, 0.0, {"l": l, "k": k, "m": m, "tol": tol}, skipped)


# ---------------------------------------------------------------------------
# ln-power estimator and the sigma quotient


@dataclass(frozen=True)
class LnPowerEstimate:
    T: float
    k: int
    integral: float
    ratio_k: float
    ratio_root: float


def ln_power_estimator(ladder: Ladder, T: float, k: int, tol=1e-10) -> LnPowerEstimate:
    """ratio_k = I(unit, unit) / ln^k T and its k-th root, both with limit 1 (l = 1/2)."""
    if k < 1:
        raise DomainError("k must be >= 1")
    unit = FourierMode("unit", 1, 0.5)
    integral = ip_pullback(ladder, unit, unit, TransformSpec(T, k, 0.5, tol))
    rk = integral / math.log(T) ** k
    return LnPowerEstimate(T, k, integral, rk, rk ** (1.0 / k))


def ln_power_report(ladder: Ladder, k: int, T_grid=DEFAULT_T_GRID, tol=1e-10):
    def one(T):
        e = ln_power_estimator(ladder, T, k, tol)
        return e.integral, e.ratio_root

    grid, raw, norm, skipped = _evaluate(T_grid, one)
    return _finish("lnpow", grid, raw, norm, 1.0, {"k": k, "l": 0.5, "tol": tol}, skipped)


def sigma_quotient(ladder: Ladder, sigma: float, T: float, tol=1e-9) -> float:
    """[J(T, 1T) / int_T^{1T} |zeta(sigma+it)|^2 dt] * zeta(2 sigma) / ln T; limit 1."""
    if sigma == 0.5:
        raise PoleError("sigma = 1/2 is excluded: zeta(2 sigma) has its pole at 1")
    if sigma < 0.5 + SIGMA_MIN_OFFSET:
        raise DomainError(f"sigma must be >= {0.5 + SIGMA_MIN_OFFSET}")
    T1 = ladder.phi1_inverse(T)
    num = ladder.hl_J(T, T1)
    pol = ladder.policy
    den = integrate(lambda t: zeta_abs2_array(sigma, t, pol), Interval(T, T1), tol=tol, oscillatory_height_hint=T).value
    z2 = zeta_em(2.0 * sigma, 0.0, pol).real
    return num / den * z2 / math.log(T)


def quotient_report(ladder: Ladder, sigma: float, T_grid=(1.0e3, 1.0e4, 1.0e5), tol=1e-9):
    def one(T):
        v = sigma_quotient(ladder, sigma, T, tol)
        return v, v

    grid, raw, norm, skipped = _evaluate(T_grid, one)
    return _finish("quotient", grid, raw, norm, 1.0, {"sigma": sigma, "tol": tol}, skipped)


__all__ = [
    "ConvergenceReport",
    "DEFAULT_T_GRID",
    "Extrapolation",
    "FermatConditionReport",
    "FermatRational",
    "LnPowerEstimate",
    "W_subst",
    "ZetaLadderError",
    "cosine_diff_report",
    "default_tau_grid",
    "extrapolate",
    "fermat_rational",
    "fermat_zeta_condition",
    "fmt17",
    "functional_F1",
    "functional_F2",
    "ln_power_estimator",
    "ln_power_report",
    "quotient_report",
    "sigma_quotient",
    "theorem1",
]
