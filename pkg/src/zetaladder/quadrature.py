"""Adaptive panel quadrature and cumulative-integral tables.

Panels use the 15-point Kronrod rule with its embedded 7-point Gauss rule;
``|K15 - G7|`` is the panel error estimate (an upper estimate for smooth
integrands).  Refinement is plain bisection in a fixed order, and accepted
panels are reduced by pairwise summation after sorting by position, so a
given input always produces the same bits.

Integrands are vectorized callables ``f(x: ndarray) -> ndarray``.  An
integrand may also provide ``panel_values(lefts, h, xs)`` returning its
values at ``lefts[:, None] + h * xs[None, :]``; this is used for runs of
equal-width panels.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import DomainError, QuadratureError, ResourceError

# Kronrod 15 abscissae on [-1, 1] (descending from the endpoint) and weights;
# odd indices are the 7-point Gauss nodes.
_XK = np.array(
    [
        0.991455371120812639206854697526329,
        0.949107912342758524526189684047851,
        0.864864423359769072789712788640926,
        0.741531185599394439863864773280788,
        0.586087235467691130294144845693013,
        0.405845151377397166906606412076961,
        0.207784955007898467600689403773245,
        0.000000000000000000000000000000000,
    ]
)
_WK = np.array(
    [
        0.022935322010529224963732008058970,
        0.063092092629978553290700663189204,
        0.104790010322250183839876322541518,
        0.140653259715525918745189590510238,
        0.169004726639267902826583426598550,
        0.190350578064785409913256402421014,
        0.204432940075298892414161999234649,
        0.209482141084727828012999174891714,
    ]
)
_WG = np.array(
    [
        0.129484966168869693270611432679082,
        0.279705391489276667901467771423780,
        0.381830050505118944950369775488975,
        0.417959183673469387755102040816327,
    ]
)

# 15 nodes on [0, 1] in ascending order, with Kronrod and Gauss weights (summing to 1).
KRONROD_NODES = np.concatenate([-_XK[:-1], _XK[::-1]]) * 0.5 + 0.5
KRONROD_WEIGHTS = np.concatenate([_WK[:-1], _WK[::-1]]) * 0.5
_G = np.zeros(15)
_G[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:-1], _WG[::-1]]) * 0.5
GAUSS7_WEIGHTS = _G
KRONROD_NODES.flags.writeable = False
KRONROD_WEIGHTS.flags.writeable = False
GAUSS7_WEIGHTS.flags.writeable = False

# Gauss-Legendre, 15 points on [0, 1]: used for sub-panel queries.
_gl_x, _gl_w = np.polynomial.legendre.leggauss(15)
GL15_NODES = 0.5 * (_gl_x + 1.0)
GL15_WEIGHTS = 0.5 * _gl_w

DEFAULT_MAX_PANELS = 1 << 20
DEFAULT_TABLE_BUDGET = 1 << 30  # bytes


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise DomainError("interval ends must be finite")
        if not self.a < self.b:
            raise DomainError(f"interval needs a < b, got [{self.a}, {self.b}]")

    @property
    def length(self) -> float:
        return self.b - self.a


@dataclass(frozen=True)
class QuadResult:
    value: float
    err_est: float
    n_evals: int


def zero_spacing(t: float) -> float:
    """Mean gap between consecutive zeta zeros near height t, 2 pi / ln(t / 2 pi).

    Heights below 2 pi e (where the formula stops making sense) get 2 pi.
    """
    if t <= 2.0 * math.pi * math.e:
        return 2.0 * math.pi
    return 2.0 * math.pi / math.log(t / (2.0 * math.pi))


def pairwise_sum(x) -> float:
    """Pairwise (tree) sum in array order."""
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    if n <= 8:
        s = 0.0
        for v in x:
            s += v
        return s
    m = n // 2
    return pairwise_sum(x[:m]) + pairwise_sum(x[m:])


def panel_values(f, lefts, h, xs=KRONROD_NODES):
    """Values of f on equal-width panels: ``out[i, j] = f(lefts[i] + h * xs[j])``."""
    lefts = np.asarray(lefts, dtype=float)
    if hasattr(f, "panel_values"):
        return np.asarray(f.panel_values(lefts, h, xs))
    pts = lefts[:, None] + h * np.asarray(xs)[None, :]
    return np.asarray(f(pts.ravel()), dtype=float).reshape(pts.shape)


def _panels_mixed(f, lefts, widths):
    """Kronrod/Gauss panel sums for panels of arbitrary widths (grouped by width)."""
    kv = np.empty(lefts.shape[0])
    gv = np.empty(lefts.shape[0])
    for h in np.unique(widths):
        idx = np.nonzero(widths == h)[0]
        vals = panel_values(f, lefts[idx], h)
        if not np.all(np.isfinite(vals)):
            raise DomainError("integrand returned non-finite values")
        kv[idx] = h * (vals @ KRONROD_WEIGHTS)
        gv[idx] = h * (vals @ GAUSS7_WEIGHTS)
    return kv, gv


def _initial_panels(iv, hint):
    if hint is None:
        return np.array([iv.a]), np.array([iv.length])
    hmax = 0.5 * zero_spacing(float(hint))
    n = max(1, math.ceil(iv.length / hmax))
    h = iv.length / n
    lefts = iv.a + h * np.arange(n)
    widths = np.full(n, h)
    widths[-1] = iv.b - lefts[-1]
    return lefts, widths


def _refine(f, iv, lefts, widths, kv, gv, abs_tol, n_evals, max_panels):
    # bisect until every panel meets its share abs_tol * width / length
    keep_l, keep_w, keep_k, keep_g = [], [], [], []
    while True:
        err = np.abs(kv - gv)
        bad = err > abs_tol * widths / iv.length
        good = ~bad
        keep_l.append(lefts[good])
        keep_w.append(widths[good])
        keep_k.append(kv[good])
        keep_g.append(gv[good])
        if not bad.any():
            break
        n_panels = sum(a.shape[0] for a in keep_l) + 2 * int(bad.sum())
        if n_panels > max_panels:
            pend_k = kv[bad]
            best = float(np.sum(np.concatenate(keep_k))) + float(np.sum(pend_k))
            err_est = float(np.sum(np.abs(np.concatenate(keep_k) - np.concatenate(keep_g)))) + float(np.sum(err[bad]))
            raise QuadratureError(
                f"panel budget ({max_panels}) exhausted integrating over [{iv.a}, {iv.b}]; "
                f"best estimate {best!r} with err_est {err_est:.3g}",
                best=best,
                err_est=err_est,
            )
        hl = widths[bad] * 0.5
        lefts = np.concatenate([lefts[bad], lefts[bad] + hl])
        widths = np.concatenate([hl, widths[bad] - hl])
        kv, gv = _panels_mixed(f, lefts, widths)
        n_evals += 15 * lefts.shape[0]
    return (
        np.concatenate(keep_l),
        np.concatenate(keep_w),
        np.concatenate(keep_k),
        np.concatenate(keep_g),
        n_evals,
    )


def integrate(f, iv, tol=1e-10, oscillatory_height_hint=None, max_panels=DEFAULT_MAX_PANELS):
    """Adaptive integral of a vectorized f over ``iv``.

    Stops when the summed panel error estimate is at most
    ``tol * max(1, |value|)``.  With ``oscillatory_height_hint = t0`` the
    starting panels are no wider than half the mean zeta-zero spacing at t0.
    Raises QuadratureError (carrying the best estimate) when more than
    ``max_panels`` panels would be needed.
    """
    if not isinstance(iv, Interval):
        iv = Interval(*iv)
    if not tol > 0:
        raise ValueError("tol must be positive")
    lefts, widths = _initial_panels(iv, oscillatory_height_hint)
    kv, gv = _panels_mixed(f, lefts, widths)
    n_evals = 15 * lefts.shape[0]
    scale = max(1.0, abs(float(np.sum(kv))))
    for _ in range(60):
        lefts, widths, kv, gv, n_evals = _refine(f, iv, lefts, widths, kv, gv, tol * scale, n_evals, max_panels)
        order = np.argsort(lefts, kind="stable")
        lefts, widths, kv, gv = lefts[order], widths[order], kv[order], gv[order]
        value = pairwise_sum(kv)
        err_est = pairwise_sum(np.abs(kv - gv))
        target = tol * max(1.0, abs(value))
        if err_est <= target:
            return QuadResult(float(value), float(err_est), n_evals)
        # the initial magnitude estimate was too large; tighten and continue
        scale = max(1.0, abs(value)) * 0.5
    raise QuadratureError(
        f"error estimate stalled at {err_est:.3g} above target {target:.3g}", best=float(value), err_est=float(err_est)
    )


# ---------------------------------------------------------------------------
# cumulative tables


@njit(cache=True)
def _kahan_cumsum(x):
    out = np.empty(x.shape[0] + 1)
    out[0] = 0.0
    s = 0.0
    c = 0.0
    for i in range(x.shape[0]):
        y = x[i] - c
        t = s + y
        c = (t - s) - y
        s = t
        out[i + 1] = s
    return out


@dataclass(frozen=True, eq=False)
class CumulativeTable:
    """Running integral of ``integrand`` from ``nodes[0]``, tabulated at ``nodes``.

    Between nodes the value is ``cumvals[i] + Q(nodes[i], x)`` where Q is the
    ``order``-point Gauss-Legendre rule on [nodes[i], x]: this equals the
    exact integral of the degree ``2*order - 1`` polynomial interpolating the
    integrand at the rule's nodes, and its error is bounded by
    ``(x - nodes[i])**(2n+1) (n!)**4 / ((2n+1) ((2n)!)**3) * max|f^(2n)|``.
    """

    nodes: np.ndarray
    cumvals: np.ndarray
    order: int
    integrand: object = None
    err_est: float = 0.0

    def __post_init__(self):
        if self.nodes.ndim != 1 or self.nodes.shape != self.cumvals.shape:
            raise ValueError("nodes and cumvals must be 1-d arrays of equal length")
        if self.nodes.shape[0] < 2 or not np.all(np.diff(self.nodes) > 0):
            raise ValueError("nodes must be strictly ascending with at least two entries")
        if self.cumvals[0] != 0.0:
            raise ValueError("cumvals[0] must be 0")
        self.nodes.flags.writeable = False
        self.cumvals.flags.writeable = False

    @property
    def a(self) -> float:
        return float(self.nodes[0])

    @property
    def b(self) -> float:
        return float(self.nodes[-1])

    @property
    def total(self) -> float:
        return float(self.cumvals[-1])


def _grid(a, b, resolution):
    """Panel boundaries: dyadic widths <= zero_spacing / resolution on aligned blocks.

    Widths are powers of two and interior boundaries are multiples of the
    width, so every boundary is an exactly representable double.
    Returns a list of (lefts, h) runs plus the full boundary array.
    """
    runs = []
    x = a
    while x < b:
        # width allowed at the far end of a block starting at x
        h = 2.0 ** math.floor(math.log2(min(1.0, zero_spacing(max(x, 1.0) * 2.0 + 64.0) / resolution)))
        start = math.ceil(x / h) * h
        if start > x:
            # ragged head panel up to the first aligned boundary
            end = min(start, b)
            runs.append((np.array([x]), end - x))
            x = end
            continue
        # aligned run up to where the allowed width may halve
        stop = min(b, max(x * 2.0, x + 64.0))
        n = int(math.floor((stop - x) / h))
        if n == 0:
            runs.append((np.array([x]), b - x))
            x = b
            continue
        lefts = x + h * np.arange(n)
        runs.append((lefts, h))
        x = x + h * n
    bounds = np.concatenate([r[0] for r in runs] + [np.array([b])])
    return runs, bounds


def build_cumulative(f, a, b, resolution=2.0, tol=1e-8, memory_budget=DEFAULT_TABLE_BUDGET, max_depth=12):
    """Tabulate the running integral of f over [a, b].

    Panels are no wider than the local mean zeta-zero spacing divided by
    ``resolution`` (and never wider than 1); a panel whose |K15 - G7|
    exceeds ``tol`` times its share of the estimated total is bisected
    (up to ``max_depth`` times) and its refined value stored.
    """
    a = float(a)
    b = float(b)
    Interval(a, b)
    if resolution < 1:
        raise ValueError("resolution must be >= 1")
    # cheap node-count estimate: integral of resolution / spacing
    xs = np.linspace(a, b, 257)
    est_nodes = float(np.sum(resolution / np.array([min(1.0, zero_spacing(max(v, 1.0))) for v in xs]))) * (b - a) / 257
    est_bytes = est_nodes * 8 * 2 * 2
    if est_bytes > memory_budget:
        raise ResourceError(
            f"table over [{a}, {b}] needs about {est_bytes / 2**20:.0f} MiB, over the {memory_budget / 2**20:.0f} MiB budget"
        )
    runs, bounds = _grid(a, b, resolution)
    kv = np.empty(bounds.shape[0] - 1)
    gv = np.empty_like(kv)
    pos = 0
    for lefts, h in runs:
        vals = panel_values(f, lefts, h)
        n = lefts.shape[0]
        kv[pos : pos + n] = h * (vals @ KRONROD_WEIGHTS)
        gv[pos : pos + n] = h * (vals @ GAUSS7_WEIGHTS)
        pos += n
    if not np.all(np.isfinite(kv)):
        raise DomainError("integrand returned non-finite values")
    widths = np.diff(bounds)
    total = abs(float(np.sum(kv)))
    share = tol * max(total, 1.0) * widths / (b - a)
    err = np.abs(kv - gv)
    bad = np.nonzero(err > share)[0]
    for idx in bad:
        iv = Interval(float(bounds[idx]), float(bounds[idx + 1]))
        try:
            r = integrate(f, iv, tol=float(share[idx]) / max(1.0, abs(kv[idx])), max_panels=1 << max_depth)
        except QuadratureError as exc:
            kv[idx] = exc.best
            err[idx] = exc.err_est
        else:
            kv[idx] = r.value
            err[idx] = r.err_est
    cum = _kahan_cumsum(kv)
    return CumulativeTable(bounds, cum, 15, f, float(np.sum(err)))


def query_cumulative(table: CumulativeTable, x, integrand=None):
    """Running integral at x (scalar or array) from the table's left end."""
    f = integrand if integrand is not None else table.integrand
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    if xa.size and (xa.min() < table.a or xa.max() > table.b or not np.isfinite(xa).all()):
        bad = xa[(xa < table.a) | (xa > table.b) | ~np.isfinite(xa)][0]
        raise DomainError(f"x = {bad!r} outside the table range [{table.a}, {table.b}]")
    i = np.searchsorted(table.nodes, xa, side="right") - 1
    i = np.minimum(i, table.nodes.shape[0] - 1)
    x0 = table.nodes[i]
    out = table.cumvals[i].copy()
    part = xa > x0
    if part.any():
        if f is None:
            raise ValueError("table carries no integrand; pass one to query between nodes")
        d = xa[part] - x0[part]
        pts = x0[part][:, None] + d[:, None] * GL15_NODES[None, :]
        vals = np.asarray(f(pts.ravel()), dtype=float).reshape(pts.shape)
        out[part] += d * (vals @ GL15_WEIGHTS)
    if np.ndim(x) == 0:
        return float(out[0])
    return out.reshape(np.shape(x))
