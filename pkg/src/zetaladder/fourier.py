"""Fourier modes on [0, 2l] and their ladder-transformed inner products.

Two evaluation routes are provided for

    I(a, b) = int_{kT}^{k(T+2l)} f_a(u) f_b(u) prod_{r<k} |zeta(1/2 + i phi1^r(t))|^2 dt,
    u = phi1^k(t) - T:

``ip_direct`` integrates the oscillatory integrand in t as written, and
``ip_pullback`` substitutes v = phi1^k(t), which turns the zeta product into
the smooth weight prod_{s<k} omega_hat(phi1^-(s+1)(v)) = prod_{s<k} (ln phi1^-s(v) + C)
with C = 1 + gamma - ln 2 pi.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .ladder import LN_2PI, Ladder
from .quadrature import Interval, integrate

KINDS = ("unit", "cosine", "sine")
CONVENTIONS = ("standard", "printed")
WEIGHTS = ("raw", "omega")
MAX_GRAM_MODES = 12
DIRECT_MAX_PANELS = 1 << 14


@dataclass(frozen=True)
class FourierMode:
    """1, cos(w t) or sin(w t) on [0, 2l].

    The frequency w is pi m / l for the ``standard`` convention and
    pi m l for ``printed`` (only meaningful for Fermat-rational l).
    """

    kind: str
    m: int = 1
    l: float = 0.5
    convention: str = "standard"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}")
        if not self.l > 0:
            raise ValueError("l must be positive")
        if self.kind != "unit" and self.m < 1:
            raise ValueError("m must be >= 1")
        if self.convention not in CONVENTIONS:
            raise ValueError(f"convention must be one of {CONVENTIONS}")

    @property
    def omega(self) -> float:
        if self.kind == "unit":
            return 0.0
        if self.convention == "printed":
            return math.pi * self.m * self.l
        return math.pi * self.m / self.l

    @property
    def label(self) -> str:
        if self.kind == "unit":
            return "unit"
        return ("cos" if self.kind == "cosine" else "sin") + str(self.m)

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        if self.kind == "unit":
            return np.ones_like(u)
        if self.kind == "cosine":
            return np.cos(self.omega * u)
        return np.sin(self.omega * u)


def fourier_modes(M: int, l: float = 0.5):
    """[unit, cos1, sin1, ..., cosM, sinM]."""
    out = [FourierMode("unit", 1, l)]
    for m in range(1, M + 1):
        out += [FourierMode("cosine", m, l), FourierMode("sine", m, l)]
    return out


def mode_eval(mode: FourierMode, t):
    ta = np.asarray(t, dtype=float)
    if ta.size and (ta.min() < 0 or ta.max() > 2 * mode.l):
        raise DomainError(f"mode argument outside [0, {2 * mode.l}]")
    v = mode(ta)
    return float(v) if np.ndim(t) == 0 else v


def _int_cos(w, L):
    return L if w == 0 else math.sin(w * L) / w


def _int_sin(w, L):
    return 0.0 if w == 0 else (1.0 - math.cos(w * L)) / w


def product_integral(a: FourierMode, b: FourierMode) -> float:
    """int_0^{2l} f_a f_b du in closed form."""
    if a.l != b.l:
        raise ValueError("modes must share l")
    L = 2 * a.l
    if a.convention == b.convention == "standard":
        if a.kind == "unit" and b.kind == "unit":
            return L
        if a.kind == b.kind and a.m == b.m:
            return a.l
        return 0.0
    if a.kind == "unit" and b.kind == "unit":
        return L
    if a.kind == "unit" or b.kind == "unit":
        c = b if a.kind == "unit" else a
        return _int_cos(c.omega, L) if c.kind == "cosine" else _int_sin(c.omega, L)
    p, q = a.omega, b.omega
    if a.kind == b.kind == "cosine":
        return 0.5 * (_int_cos(p - q, L) + _int_cos(p + q, L))
    if a.kind == b.kind == "sine":
        return 0.5 * (_int_cos(p - q, L) - _int_cos(p + q, L))
    s, c = (a, b) if a.kind == "sine" else (b, a)
    return 0.5 * (_int_sin(s.omega + c.omega, L) + _int_sin(s.omega - c.omega, L))


def mode_norm(mode: FourierMode) -> float:
    """A = int_0^{2l} f^2: 2l for unit, l for standard cosine and sine."""
    return product_integral(mode, mode)


@dataclass(frozen=True)
class TransformSpec:
    """Segment [kT, k(T+2l)] and the weight variant.

    ``weight = "raw"`` uses the bare zeta product (normalized by ln^k T);
    ``"omega"`` divides each factor by omega_hat, which makes the pullback
    weight identically 1.
    """

    T: float
    k: int
    l: float = 0.5
    tol: float = 1e-10
    weight: str = "raw"

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("k must be >= 0")
        if not self.l > 0:
            raise ValueError("l must be positive")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.weight not in WEIGHTS:
            raise ValueError(f"weight must be one of {WEIGHTS}")

    def normalizer(self) -> float:
        return 1.0 if self.weight == "omega" else math.log(self.T) ** self.k


def _check_modes(spec, *modes):
    for md in modes:
        if md.l != spec.l:
            raise ValueError(f"mode {md.label} has l = {md.l}, spec has l = {spec.l}")


def transformed_weight(ladder: Ladder, t, k: int):
    """prod_{r<k} |zeta(1/2 + i phi1^r(t))|^2; 1 for k = 0."""
    if k < 0:
        raise ValueError("k must be >= 0")
    ta = np.asarray(t, dtype=float)
    its = ladder.forward_iterates(ta, k)
    w = np.ones_like(ta)
    for r in range(k):
        w = w * ladder._f(its[r])
    return float(np.ravel(w)[0]) if np.ndim(t) == 0 else w


class _Memo:
    """Per-node cache: values are computed for unseen abscissae only."""

    def __init__(self, compute):
        self._compute = compute
        self._store = {}

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        flat = x.ravel()
        miss = np.array([v not in self._store for v in flat.tolist()], dtype=bool)
        if miss.any():
            new = np.unique(flat[miss])
            vals = self._compute(new)
            for i, v in enumerate(new.tolist()):
                self._store[v] = tuple(col[i] for col in vals)
        cols = list(zip(*(self._store[v] for v in flat.tolist())))
        return [np.array(c, dtype=float).reshape(x.shape) for c in cols]

    def __len__(self):
        return len(self._store)


class DirectNodes:
    """Forward iterates and zeta product at quadrature nodes t, for one spec."""

    def __init__(self, ladder: Ladder, spec: TransformSpec):
        self.ladder, self.spec = ladder, spec
        self.memo = _Memo(self._compute)

    def _compute(self, t):
        lad, k = self.ladder, self.spec.k
        its = lad.forward_iterates(t, k)
        w = np.ones_like(t)
        for r in range(k):
            w = w * lad._f(its[r])
            if self.spec.weight == "omega":
                w = w / lad._omega_from_phi(its[r + 1])
        u = np.clip(its[k] - self.spec.T, 0.0, 2 * self.spec.l)
        return u, w

    def __call__(self, t):
        return self.memo(t)


class PullbackNodes:
    """Reverse iterates phi1^-s(T + u), s < k, and the weight excess w(T + u) - w(T)."""

    def __init__(self, ladder: Ladder, spec: TransformSpec):
        self.ladder, self.spec = ladder, spec
        self.c = 1.0 + ladder.config.gamma - LN_2PI
        base = ladder.reverse_iterates(spec.T, max(spec.k - 1, 0))
        self.base_levels = base
        self.w0 = float(np.prod(np.log(base) + self.c)) if spec.k else 1.0
        self.memo = _Memo(self._compute)

    def _compute(self, u):
        # prod a_s - prod b_s = sum_s (a_s - b_s) prod_{j<s} a_j prod_{j>s} b_j, with
        # a_s - b_s = log1p((phi1^-s(v) - phi1^-s(T)) / phi1^-s(T)) kept exact for small u
        k = self.spec.k
        lv = self.ladder.reverse_iterates(self.spec.T + u, k - 1)
        b = np.log(self.base_levels) + self.c
        a = np.log(lv) + self.c
        d = np.log1p((lv - self.base_levels[:, None]) / self.base_levels[:, None])
        excess = np.zeros_like(u)
        for s in range(k):
            term = d[s]
            for j in range(s):
                term = term * a[j]
            for j in range(s + 1, k):
                term = term * b[j]
            excess = excess + term
        return (excess,)

    def __call__(self, u):
        return self.memo(u)[0]


def ip_direct(ladder: Ladder, mode_a: FourierMode, mode_b: FourierMode, spec: TransformSpec, nodes=None):
    """Quadrature of the transformed inner product in the original variable t."""
    _check_modes(spec, mode_a, mode_b)
    if spec.k == 0:
        g = lambda t: mode_a(t - spec.T) * mode_b(t - spec.T)
        return integrate(g, Interval(spec.T, spec.T + 2 * spec.l), tol=spec.tol).value
    lo = ladder.reverse_tower(spec.T, spec.k).levels[-1]
    hi = ladder.reverse_tower(spec.T + 2 * spec.l, spec.k).levels[-1]
    nodes = nodes or DirectNodes(ladder, spec)

    def g(t):
        u, w = nodes(t)
        return mode_a(u) * mode_b(u) * w

    # tolerance relative to the integrand's size so near-zero entries stay above the phi1 round-off floor
    scale = max(1.0, math.sqrt(mode_norm(mode_a) * mode_norm(mode_b)) * spec.normalizer())
    return integrate(
        g, Interval(lo, hi), tol=spec.tol * scale, oscillatory_height_hint=lo, max_panels=DIRECT_MAX_PANELS
    ).value


def ip_pullback(ladder: Ladder, mode_a: FourierMode, mode_b: FourierMode, spec: TransformSpec, nodes=None):
    """The same inner product after the substitution v = phi1^k(t)."""
    _check_modes(spec, mode_a, mode_b)
    exact = product_integral(mode_a, mode_b)
    if spec.k == 0 or spec.weight == "omega":
        return exact
    nodes = nodes or PullbackNodes(ladder, spec)
    g = lambda u: mode_a(u) * mode_b(u) * nodes(u)
    scale = max(1.0, nodes.w0 * 2 * spec.l)
    excess = integrate(g, Interval(0.0, 2 * spec.l), tol=spec.tol * scale).value
    return nodes.w0 * exact + excess


def gram_matrix(ladder: Ladder, modes, spec: TransformSpec, path: str = "pullback"):
    """G[a, b] = I(a, b) / (sqrt(A_a A_b) ln^k T), assembled from the upper triangle."""
    if len(modes) > MAX_GRAM_MODES:
        raise ValueError(f"at most {MAX_GRAM_MODES} modes")
    if path not in ("pullback", "direct"):
        raise ValueError("path must be 'pullback' or 'direct'")
    _check_modes(spec, *modes)
    if path == "pullback":
        nodes = PullbackNodes(ladder, spec) if spec.k else None
        ip = ip_pullback
    else:
        nodes = DirectNodes(ladder, spec) if spec.k else None
        ip = ip_direct
    norms = [mode_norm(md) for md in modes]
    n = len(modes)
    G = np.zeros((n, n))
    for i in range(n):
        for j in range(i, n):
            v = ip(ladder, modes[i], modes[j], spec, nodes) / (math.sqrt(norms[i] * norms[j]) * spec.normalizer())
            G[i, j] = G[j, i] = v
    return G


def cosine_diff_functional(ladder: Ladder, m: int, l: float, spec: TransformSpec) -> float:
    """(1/ln^k T) I(unit, cos(2 pi m u / l)); the cos^2 minus sin^2 functional, limit 0."""
    if spec.l != l:
        raise ValueError("spec.l must equal l")
    return ip_pullback(ladder, FourierMode("unit", 1, l), FourierMode("cosine", 2 * m, l), spec) / spec.normalizer()
