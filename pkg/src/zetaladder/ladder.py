"""Operational Jacob's ladder built on the Hardy-Littlewood integral.

phi1(T) is the root y of

    y ln y + (gamma - ln 2 pi) y + c0 = J(T),   J(T) = int_0^T |zeta(1/2+it)|^2 dt,

so that T - phi1(T) ~ (1 - gamma) T / ln T.  Differentiating gives the exact
weight identity phi1'(t) * omega_hat(t) = |zeta(1/2+it)|^2 with
omega_hat(t) = ln phi1(t) + 1 + gamma - ln 2 pi.

J is read from a CumulativeTable over [0, domain_hi]; the table can be saved
to and restored from an ``.npz`` cache file.
"""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConvergenceError, DomainError, LadderRangeError
from .quadrature import CumulativeTable, GL15_NODES, GL15_WEIGHTS, build_cumulative, query_cumulative
from .zeta import DEFAULT_POLICY, CriticalLineAbs2, PrecisionPolicy

EULER_GAMMA = 0.57721566490153286061
LN_2PI = math.log(2.0 * math.pi)
VALIDITY_FLOOR = 100.0
CACHE_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class LadderConfig:
    gamma: float = EULER_GAMMA
    c0: float = 0.0
    newton_tol: float = 1e-12
    max_newton_iters: int = 60
    domain_hi: float = 2.0e4

    def __post_init__(self):
        if not self.newton_tol > 0:
            raise ValueError("newton_tol must be positive")
        if not self.domain_hi > 100:
            raise ValueError("domain_hi must exceed 100")
        if self.max_newton_iters < 1:
            raise ValueError("max_newton_iters must be >= 1")


@dataclass(frozen=True)
class ReverseTower:
    """Levels [T, phi1^-1(T), ..., phi1^-k(T)]."""

    k: int
    levels: tuple

    def __post_init__(self):
        if len(self.levels) != self.k + 1:
            raise ValueError("a tower of depth k has k + 1 levels")
        if any(b <= a for a, b in zip(self.levels, self.levels[1:])):
            raise ValueError("tower levels must be strictly increasing")

    @property
    def T(self) -> float:
        return self.levels[0]


@dataclass(frozen=True)
class GapRecord:
    r: int
    lower: float
    upper: float
    gap: float
    prediction: float
    gap_ratio_to_prediction: float
    adjacent_gap_ratio: float | None


@dataclass(frozen=True)
class IncrementRecord:
    r: int
    lower: float
    upper: float
    segment_integral: float
    prediction: float
    ratio_to_prediction: float
    adjacent_integral_ratio: float | None


@dataclass(frozen=True)
class IncrementReport:
    records: tuple
    total: float = field(default=0.0)
    telescoping_residual: float = field(default=0.0)


def _table_key(domain_hi, pol, resolution, tol):
    blob = json.dumps(
        {"domain_hi": domain_hi, "policy": asdict(pol), "resolution": resolution, "tol": tol, "v": CACHE_SCHEMA_VERSION},
        sort_keys=True,
    )
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


class Ladder:
    """phi1 and its iterates, backed by a tabulated Hardy-Littlewood integral."""

    def __init__(self, config: LadderConfig, jtable: CumulativeTable, policy: PrecisionPolicy = DEFAULT_POLICY):
        if jtable.a != 0.0 or jtable.b < config.domain_hi:
            raise ValueError("jtable must cover [0, domain_hi]")
        self.config = config
        self.jtable = jtable
        self.policy = policy
        self._f = jtable.integrand if jtable.integrand is not None else CriticalLineAbs2(policy)
        self._c = 1.0 + config.gamma - LN_2PI

    # -- construction and caching -------------------------------------------

    @classmethod
    def build(cls, config=LadderConfig(), policy=DEFAULT_POLICY, resolution=2.0, tol=1e-8, workers=None):
        f = CriticalLineAbs2(policy, workers)
        table = build_cumulative(f, 0.0, config.domain_hi, resolution=resolution, tol=tol)
        lad = cls(config, table, policy)
        lad._build_meta = {"resolution": resolution, "tol": tol}
        return lad

    def save(self, path):
        meta = {
            "schema_version": CACHE_SCHEMA_VERSION,
            "config": asdict(self.config),
            "policy": asdict(self.policy),
            "table": {
                "order": self.jtable.order,
                "err_est": self.jtable.err_est,
                "n_nodes": int(self.jtable.nodes.shape[0]),
                **getattr(self, "_build_meta", {}),
            },
        }
        path = Path(path)
        tmp = path.with_name(path.name + ".tmp.npz")
        np.savez(tmp, nodes=self.jtable.nodes, cumvals=self.jtable.cumvals, meta=np.array(json.dumps(meta, sort_keys=True)))
        tmp.replace(path)

    @classmethod
    def load(cls, path, config: LadderConfig | None = None, workers=None):
        with np.load(path, allow_pickle=False) as z:
            meta = json.loads(str(z["meta"]))
            if meta.get("schema_version") != CACHE_SCHEMA_VERSION:
                raise ValueError(f"{path}: unsupported cache schema {meta.get('schema_version')!r}")
            nodes = np.array(z["nodes"])
            cum = np.array(z["cumvals"])
        pol = PrecisionPolicy(**meta["policy"])
        cfg = config or LadderConfig(**meta["config"])
        table = CumulativeTable(nodes, cum, meta["table"]["order"], CriticalLineAbs2(pol, workers), meta["table"]["err_est"])
        lad = cls(cfg, table, pol)
        lad._build_meta = {k: meta["table"][k] for k in ("resolution", "tol") if k in meta["table"]}
        return lad

    @classmethod
    def cached(cls, cache_dir, config=LadderConfig(), policy=DEFAULT_POLICY, resolution=2.0, tol=1e-8, workers=None):
        """Load the table for (domain_hi, policy, resolution, tol) from cache_dir, building it if absent."""
        cache_dir = Path(cache_dir)
        cache_dir.mkdir(parents=True, exist_ok=True)
        path = cache_dir / f"jtable-{_table_key(config.domain_hi, policy, resolution, tol)}.npz"
        if path.exists():
            return cls.load(path, config, workers)
        lad = cls.build(config, policy, resolution, tol, workers)
        lad.save(path)
        return lad

    # -- Hardy-Littlewood integral ------------------------------------------

    def J(self, x):
        """J(x) = int_0^x |zeta(1/2+it)|^2 dt (scalar or array)."""
        xa = np.asarray(x, dtype=float)
        if xa.size and (xa.min() < 0 or xa.max() > self.config.domain_hi):
            need = float(xa.max()) * 1.01
            raise LadderRangeError(
                f"J queried outside [0, {self.config.domain_hi:.6g}]; a domain_hi of about {need:.6g} is required",
                required=need,
            )
        return query_cumulative(self.jtable, x, self._f)

    def hl_J(self, a, b):
        """int_a^b |zeta(1/2+it)|^2 dt for 0 <= a < b <= domain_hi."""
        if not 0 <= a < b:
            raise DomainError(f"need 0 <= a < b, got a={a}, b={b}")
        if b > self.config.domain_hi:
            raise LadderRangeError(
                f"b = {b:.6g} beyond domain_hi = {self.config.domain_hi:.6g}; a domain_hi of about {b * 1.01:.6g} is required",
                required=b * 1.01,
            )
        return float(self.J(b) - self.J(a))

    # -- the defining equation ----------------------------------------------

    def G(self, y):
        """Left side of the defining equation, y ln y + (gamma - ln 2 pi) y + c0."""
        y = np.asarray(y, dtype=float)
        return y * np.log(y) + (self.config.gamma - LN_2PI) * y + self.config.c0

    def _check_floor(self, x, what):
        xa = np.asarray(x, dtype=float)
        if xa.size and (not np.isfinite(xa).all() or xa.min() < VALIDITY_FLOOR):
            raise DomainError(f"{what} = {float(np.min(xa))!r} is below the ladder validity floor {VALIDITY_FLOOR}")

    def _solve_G(self, target, T):
        # Newton on G(y) = target from y0 = T (1 - (1 - gamma) / ln T); bisection fallback
        g = self.config.gamma
        y = T * (1.0 - (1.0 - g) / np.log(T))
        done = np.zeros(y.shape, dtype=bool)
        for _ in range(self.config.max_newton_iters):
            step = (self.G(y) - target) / (np.log(y) + self._c)
            y = np.where(done, y, y - step)
            done |= np.abs(step) <= 4e-16 * np.abs(y)
            if done.all():
                break
        resid = np.abs(self.G(y) - target)
        fail = ~(resid <= self.config.newton_tol * np.abs(target)) | ~np.isfinite(y)
        if fail.any():
            lo = np.full(int(fail.sum()), math.exp(LN_2PI - g))
            hi = np.asarray(T, dtype=float)[fail] * 1.0
            tgt = target[fail]
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                up = self.G(mid) > tgt
                hi = np.where(up, mid, hi)
                lo = np.where(up, lo, mid)
            y[fail] = 0.5 * (lo + hi)
            resid = np.abs(self.G(y) - target)
            if not np.all(resid <= self.config.newton_tol * np.abs(target)):
                raise ConvergenceError("phi1: Newton and bisection both failed", best=y)
        return y

    def phi1(self, T):
        """Jacob's ladder phi1(T) for T in [100, domain_hi] (scalar or array)."""
        Ta = np.atleast_1d(np.asarray(T, dtype=float))
        self._check_floor(Ta, "T")
        y = self._solve_G(np.atleast_1d(self.J(Ta)), Ta)
        return float(y[0]) if np.ndim(T) == 0 else y.reshape(np.shape(T))

    def omega_hat(self, t):
        """Exact derivative weight ln phi1(t) + 1 + gamma - ln 2 pi."""
        p = self.phi1(t)
        return np.log(p) + self._c if np.ndim(t) else math.log(p) + self._c

    def _omega_from_phi(self, phi_vals):
        return np.log(phi_vals) + self._c

    def phi1_inverse(self, U):
        """x with phi1(x) = U, by safeguarded Newton inside one table panel."""
        Ua = np.atleast_1d(np.asarray(U, dtype=float))
        self._check_floor(Ua, "U")
        target = self.G(Ua)
        limit = float(self.J(self.config.domain_hi))
        if target.max() > limit:
            u = float(Ua[np.argmax(target)])
            need = u * (1.0 + 1.5 * (1.0 - self.config.gamma) / math.log(u))
            raise LadderRangeError(
                f"phi1^-1({u:.6g}) lies beyond domain_hi = {self.config.domain_hi:.6g}; "
                f"a domain_hi of about {need:.6g} is required",
                required=need,
            )
        x = self._invert_J(target)
        return float(x[0]) if np.ndim(U) == 0 else x.reshape(np.shape(U))

    def _invert_J(self, target):
        nodes, cum = self.jtable.nodes, self.jtable.cumvals
        i = np.clip(np.searchsorted(cum, target, side="right") - 1, 0, nodes.shape[0] - 2)
        lo = nodes[i].copy()
        hi = nodes[i + 1].copy()
        base = cum[i]
        # start from linear interpolation across the panel
        span = cum[i + 1] - base
        frac = np.where(span > 0, (target - base) / np.where(span > 0, span, 1.0), 0.5)
        x = lo + np.clip(frac, 0.0, 1.0) * (hi - lo)
        active = np.ones(x.shape, dtype=bool)
        nodes_gl = np.concatenate([GL15_NODES, [1.0]])
        for _ in range(self.config.max_newton_iters):
            if not active.any():
                break
            xa, x0 = x[active], nodes[i[active]]
            d = xa - x0
            pts = x0[:, None] + d[:, None] * nodes_gl[None, :]
            vals = np.asarray(self._f(pts.ravel())).reshape(pts.shape)
            F = base[active] + d * (vals[:, :15] @ GL15_WEIGHTS) - target[active]
            fx = vals[:, 15]
            lo_a, hi_a = lo[active], hi[active]
            lo_a = np.where(F < 0, xa, lo_a)
            hi_a = np.where(F > 0, xa, hi_a)
            with np.errstate(divide="ignore", invalid="ignore"):
                xn = xa - F / fx
            outside = ~np.isfinite(xn) | (xn <= lo_a) | (xn >= hi_a)
            xn = np.where(outside, 0.5 * (lo_a + hi_a), xn)
            conv = (np.abs(xn - xa) <= 4e-16 * np.abs(xa)) | (F == 0) | (hi_a - lo_a <= 4e-16 * np.abs(xa))
            lo[active], hi[active] = lo_a, hi_a
            x[active] = np.where(F == 0, xa, xn)
            idx = np.nonzero(active)[0]
            active[idx[conv]] = False
        if active.any():
            raise ConvergenceError("phi1_inverse: Newton iteration did not converge", best=x)
        resid = np.abs(np.atleast_1d(self.J(x)) - target)
        if not np.all(resid <= self.config.newton_tol * np.abs(target)):
            raise ConvergenceError(
                f"phi1_inverse: residual {float(resid.max()):.3g} above newton_tol", best=x, err_est=float(resid.max())
            )
        return x

    # -- iterates ------------------------------------------------------------

    def forward_iter(self, t, r: int):
        """phi1 applied r times; r = 0 is the identity."""
        if r < 0:
            raise ValueError("r must be >= 0")
        x = t
        for _ in range(r):
            x = self.phi1(x)
            self._check_floor(x, "iterate")
        return x

    def forward_iterates(self, t, k: int):
        """[phi1^0(t), ..., phi1^k(t)] as an array of shape (k + 1,) + shape(t)."""
        out = [np.asarray(t, dtype=float)]
        for _ in range(k):
            out.append(np.asarray(self.phi1(out[-1]), dtype=float))
            self._check_floor(out[-1], "iterate")
        return np.stack(out)

    def reverse_iterates(self, v, k: int):
        """[v, phi1^-1(v), ..., phi1^-k(v)] as an array of shape (k + 1,) + shape(v)."""
        out = [np.asarray(v, dtype=float)]
        for _ in range(k):
            out.append(np.asarray(self.phi1_inverse(out[-1]), dtype=float))
        return np.stack(out)

    def reverse_tower(self, T: float, k: int) -> ReverseTower:
        if k < 0:
            raise ValueError("k must be >= 0")
        levels = [float(T)]
        self._check_floor(T, "T")
        for _ in range(k):
            levels.append(float(self.phi1_inverse(levels[-1])))
        return ReverseTower(k, tuple(levels))

    # -- geometry of towers --------------------------------------------------

    def gap_law_ratio(self, T: float) -> float:
        """(T - phi1(T)) ln T / ((1 - gamma) T); tends to 1."""
        return (T - self.phi1(T)) * math.log(T) / ((1.0 - self.config.gamma) * T)

    def gap_report(self, tower: ReverseTower):
        if tower.k < 2:
            raise DomainError("gap_report needs a tower with k >= 2")
        lv = tower.levels
        gaps = [lv[r] - lv[r - 1] for r in range(1, tower.k + 1)]
        recs = []
        for r in range(1, tower.k + 1):
            pred = (1.0 - self.config.gamma) * lv[r] / math.log(lv[r])
            adj = gaps[r] / gaps[r - 1] if r < tower.k else None
            recs.append(GapRecord(r, lv[r - 1], lv[r], gaps[r - 1], pred, gaps[r - 1] / pred, adj))
        return tuple(recs)

    def increment_report(self, tower: ReverseTower) -> IncrementReport:
        lv = tower.levels
        Jv = [float(v) for v in np.atleast_1d(self.J(np.array(lv)))]
        segs = [Jv[r] - Jv[r - 1] for r in range(1, tower.k + 1)]
        recs = []
        for r in range(1, tower.k + 1):
            pred = (1.0 - self.config.gamma) * lv[r - 1]
            adj = segs[r] / segs[r - 1] if r < tower.k else None
            recs.append(IncrementRecord(r, lv[r - 1], lv[r], segs[r - 1], pred, segs[r - 1] / pred, adj))
        total = Jv[-1] - Jv[0] if tower.k else 0.0
        return IncrementReport(tuple(recs), total, abs(sum(segs) - total))

    def omega_product(self, alpha, k: int, T: float):
        """prod_{r<k} omega_hat(phi1^r(alpha)) / ln^k T."""
        its = self.forward_iterates(alpha, k)
        om = self._omega_from_phi(its[1:])
        return np.prod(om, axis=0) / math.log(T) ** k
