"""Riemann zeta on and near the critical line.

Two independent routes are provided:

* the Riemann-Siegel formula for Hardy's Z(t), with up to four asymptotic
  correction terms (C0 is always included, ``rs_correction_terms`` = K adds
  C1..CK);
* Euler-Maclaurin summation for zeta(sigma + it), valid anywhere except s = 1.

``hardy_Z`` picks Riemann-Siegel only where its published error bound meets
the policy's accuracy target, and falls back to Euler-Maclaurin rotated by
exp(i theta) otherwise.  All arithmetic is IEEE double precision.
"""
from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numba import njit
from scipy.special import loggamma, zeta as _hurwitz_zeta

from ._rs_coeffs import RS_COEFFS
from .errors import AccuracyWarning, DomainError, PoleError

TWO_PI = 2.0 * math.pi

# Gabcke's bounds |R_K(t)| <= d_K * t**(-(2K+3)/4), valid for t >= 200.
_GABCKE_D = (0.127, 0.053, 0.011, 0.031, 0.017)
_GABCKE_FLOOR = 200.0

# Euler-Maclaurin cost is linear in t; beyond this height a single
# evaluation takes tens of milliseconds and batch use is impractical.
EM_PRACTICAL_CEILING = 1.0e7

_EM_MAX_TERMS = 60
# B_{2k} / (2k)!  =  (-1)^(k+1) * 2 * zeta(2k) / (2 pi)^(2k)
_BK = np.array(
    [(-1) ** (k + 1) * 2.0 * _hurwitz_zeta(2 * k, 1) / TWO_PI ** (2 * k) for k in range(1, _EM_MAX_TERMS + 1)]
)

_RS_LEN = np.array([len(c) for c in RS_COEFFS], dtype=np.int64)
_RS_TAB = np.zeros((len(RS_COEFFS), int(_RS_LEN.max())))
for _k, _c in enumerate(RS_COEFFS):
    _RS_TAB[_k, : len(_c)] = _c


@dataclass(frozen=True)
class PrecisionPolicy:
    """Accuracy knobs for the zeta evaluators."""

    rs_correction_terms: int = 2
    em_crossover: float = 30.0
    em_terms: int = 24
    target_rel_err: float = 1e-9

    def __post_init__(self):
        if not 0 <= self.rs_correction_terms <= 4:
            raise ValueError("rs_correction_terms must lie in 0..4")
        if self.em_crossover < 10:
            raise ValueError("em_crossover must be >= 10")
        if not 2 <= self.em_terms <= _EM_MAX_TERMS:
            raise ValueError(f"em_terms must lie in 2..{_EM_MAX_TERMS}")
        if not self.target_rel_err > 0:
            raise ValueError("target_rel_err must be positive")

    @property
    def rs_floor(self) -> float:
        """Smallest height at which Riemann-Siegel is trusted under this policy."""
        K = self.rs_correction_terms
        t_bound = (_GABCKE_D[K] / self.target_rel_err) ** (4.0 / (2 * K + 3))
        return max(self.em_crossover, _GABCKE_FLOOR, t_bound)

    @property
    def em_abs_target(self) -> float:
        # absolute, so relative accuracy survives down to |zeta| ~ 1e-3
        return 1e-3 * self.target_rel_err


DEFAULT_POLICY = PrecisionPolicy()


def rs_error_bound(t: float, terms: int) -> float:
    """Gabcke's bound on the Riemann-Siegel remainder after C0..C_terms (t >= 200)."""
    return _GABCKE_D[terms] * t ** (-(2 * terms + 3) / 4.0)


# ---------------------------------------------------------------------------
# numba kernels


@njit(cache=True, nogil=True)
def _theta_series(t):
    it = 1.0 / t
    it2 = it * it
    tail = it * (1.0 / 48.0 + it2 * (7.0 / 5760.0 + it2 * (31.0 / 80640.0 + it2 * (127.0 / 430080.0 + it2 * (511.0 / 1216512.0)))))
    return 0.5 * t * math.log(t / (2.0 * math.pi)) - 0.5 * t - math.pi / 8.0 + tail


# Dirichlet sums sum_{n<=N} n^(-sigma - it) are built multiplicatively:
# n^(-it) costs a cos/sin pair only at primes, one complex product otherwise.
_SIEVE = {"spf": np.ones(2, dtype=np.int64), "cof": np.ones(2, dtype=np.int64), "lnn": np.zeros(2)}


def _sieve(nmax):
    """Smallest prime factor, cofactor n // spf(n) and log n for 0..nmax."""
    cur = _SIEVE["spf"]
    if cur.shape[0] <= nmax:
        size = max(int(nmax) + 1, 2 * cur.shape[0], 1024)
        spf = np.arange(size, dtype=np.int64)
        for p in range(2, int(math.isqrt(size - 1)) + 1):
            if spf[p] == p:
                block = spf[p * p :: p]
                block[block == np.arange(p * p, size, p)] = p
        idx = np.arange(size, dtype=np.int64)
        cof = idx // np.maximum(spf, 1)
        lnn = np.log(np.maximum(idx, 1).astype(float))
        _SIEVE.update(spf=spf, cof=cof, lnn=lnn)
    return _SIEVE["spf"], _SIEVE["cof"], _SIEVE["lnn"]


@njit(cache=True, nogil=True)
def _dirichlet(t, N, spf, cof, lnn, wgt, ure, uim):
    """Return (re, im) of sum_{n=1}^{N} wgt[n] * n^(-it); wgt must be multiplicative."""
    ure[1] = 1.0
    uim[1] = 0.0
    sre = wgt[1]
    sim = 0.0
    for n in range(2, N + 1):
        p = spf[n]
        if p == n:
            ang = t * lnn[n]
            ure[n] = math.cos(ang)
            uim[n] = -math.sin(ang)
        else:
            q = cof[n]
            ar = ure[p]
            ai = uim[p]
            br = ure[q]
            bi = uim[q]
            ure[n] = ar * br - ai * bi
            uim[n] = ar * bi + ai * br
        sre += wgt[n] * ure[n]
        sim += wgt[n] * uim[n]
    return sre, sim


@njit(cache=True, nogil=True)
def _weights(sigma, N, spf, cof, lnn):
    w = np.empty(N + 1)
    w[0] = 0.0
    w[1] = 1.0
    for n in range(2, N + 1):
        p = spf[n]
        if p == n:
            w[n] = math.exp(-sigma * lnn[n])
        else:
            w[n] = w[p] * w[cof[n]]
    return w


@njit(cache=True, nogil=True)
def _z_rs_finish(t, sre, sim, K, tab, tlen):
    # Z = 2 Re(exp(i theta) * sum n^(-1/2 - it)) + remainder from C0..CK
    a = math.sqrt(t / (2.0 * math.pi))
    N = int(a)
    p = a - N
    th = _theta_series(t)
    s = 2.0 * (math.cos(th) * sre - math.sin(th) * sim)
    z = 2.0 * p - 1.0
    corr = 0.0
    w = 1.0
    for k in range(K + 1):
        ck = 0.0
        for j in range(tlen[k] - 1, -1, -1):
            ck = ck * z + tab[k, j]
        corr += ck * w
        w /= a
    rem = corr / math.sqrt(a)
    if (N - 1) % 2 == 1:
        rem = -rem
    return s + rem


@njit(cache=True, nogil=True)
def _z_rs_core(t, K, tab, tlen, spf, cof, lnn, wgt, ure, uim):
    N = int(math.sqrt(t / (2.0 * math.pi)))
    sre, sim = _dirichlet(t, N, spf, cof, lnn, wgt, ure, uim)
    return _z_rs_finish(t, sre, sim, K, tab, tlen)


@njit(cache=True, nogil=True)
def _z_rs(t, K, tab, tlen, spf, cof, lnn):
    N = int(math.sqrt(t / (2.0 * math.pi)))
    wgt = _weights(0.5, N, spf, cof, lnn)
    ure = np.empty(N + 1)
    uim = np.empty(N + 1)
    return _z_rs_core(t, K, tab, tlen, spf, cof, lnn, wgt, ure, uim)


@njit(cache=True, nogil=True)
def _em_length(sigma, t, M, bk, abs_target):
    # smallest N (on a geometric ladder) whose first omitted correction term is below target
    s_abs_prod_log = 0.0
    for j in range(2 * M + 1):
        s_abs_prod_log += 0.5 * math.log((sigma + j) ** 2 + t * t)
    lb = math.log(abs(bk[M])) + s_abs_prod_log
    N = max(2, int(0.1 * abs(t)) + 2, M)
    lt = math.log(abs_target)
    while lb - (sigma + 2 * M + 1) * math.log(N) > lt:
        N = int(N * 1.1) + 1
    return N


@njit(cache=True, nogil=True)
def _zeta_em_finish(sigma, t, N, M, bk, re, im):
    # sum_{n<N} n^-s + N^(1-s)/(s-1) + N^-s/2 + sum_k B_2k/(2k)! (s)_(2k-1) N^(-s-2k+1)
    s = complex(sigma, t)
    lnN = math.log(N)
    mag = math.exp(-sigma * lnN)
    Ns = complex(mag * math.cos(t * lnN), -mag * math.sin(t * lnN))
    acc = complex(re, im) + N * Ns / (s - 1.0) + 0.5 * Ns
    term = s * Ns / N
    acc += bk[0] * term
    NN = float(N) * float(N)
    for k in range(2, M + 1):
        term = term * (s + (2 * k - 3)) * (s + (2 * k - 2)) / NN
        acc += bk[k - 1] * term
    return acc


@njit(cache=True, nogil=True)
def _zeta_em_core(sigma, t, N, M, bk, spf, cof, lnn, wgt, ure, uim):
    re, im = _dirichlet(t, N - 1, spf, cof, lnn, wgt, ure, uim)
    return _zeta_em_finish(sigma, t, N, M, bk, re, im)


@njit(cache=True, nogil=True)
def _zeta_em(sigma, t, M, bk, abs_target, spf, cof, lnn):
    N = _em_length(sigma, t, M, bk, abs_target)
    wgt = _weights(sigma, N, spf, cof, lnn)
    ure = np.empty(N + 1)
    uim = np.empty(N + 1)
    return _zeta_em_core(sigma, t, N, M, bk, spf, cof, lnn, wgt, ure, uim)


@njit(cache=True, nogil=True)
def _abs2_kernel(ts, out, rs_floor, K, tab, tlen, M, bk, abs_target, spf, cof, lnn):
    n_rs = 1
    n_em = 1
    for i in range(ts.shape[0]):
        t = ts[i]
        if t >= rs_floor:
            n_rs = max(n_rs, int(math.sqrt(t / (2.0 * math.pi))))
        else:
            n_em = max(n_em, _em_length(0.5, t, M, bk, abs_target))
    nmax = max(n_rs, n_em)
    wgt = _weights(0.5, nmax, spf, cof, lnn)
    ure = np.empty(nmax + 1)
    uim = np.empty(nmax + 1)
    for i in range(ts.shape[0]):
        t = ts[i]
        if t >= rs_floor:
            z = _z_rs_core(t, K, tab, tlen, spf, cof, lnn, wgt, ure, uim)
            out[i] = z * z
        else:
            N = _em_length(0.5, t, M, bk, abs_target)
            v = _zeta_em_core(0.5, t, N, M, bk, spf, cof, lnn, wgt, ure, uim)
            out[i] = v.real * v.real + v.imag * v.imag


@njit(cache=True, nogil=True)
def _zeta_em_kernel(sigma, ts, out, M, bk, abs_target, spf, cof, lnn):
    nmax = 2
    for i in range(ts.shape[0]):
        nmax = max(nmax, _em_length(sigma, ts[i], M, bk, abs_target))
    wgt = _weights(sigma, nmax, spf, cof, lnn)
    ure = np.empty(nmax + 1)
    uim = np.empty(nmax + 1)
    for i in range(ts.shape[0]):
        N = _em_length(sigma, ts[i], M, bk, abs_target)
        out[i] = _zeta_em_core(sigma, ts[i], N, M, bk, spf, cof, lnn, wgt, ure, uim)


@njit(cache=True, nogil=True)
def _abs2_panels_kernel(lefts, out, h, xs, rs_floor, K, tab, tlen, M, bk, abs_target, spf, cof, lnn):
    """|zeta(1/2+it)|^2 at t = lefts[i] + h * xs[j] for equal-width panels.

    Prime phases p^(-it) are split as p^(-i left) * p^(-i h x_j): the second
    factor is tabulated once, so trig calls happen per panel, not per node.
    """
    npan = lefts.shape[0]
    nx = xs.shape[0]
    if npan == 0:
        return
    nmax = 2
    for i in range(npan):
        for j in range(nx):
            t = lefts[i] + h * xs[j]
            if t >= rs_floor:
                nmax = max(nmax, int(math.sqrt(t / (2.0 * math.pi))))
            else:
                nmax = max(nmax, _em_length(0.5, t, M, bk, abs_target))
    wgt = _weights(0.5, nmax, spf, cof, lnn)
    rre = np.empty((nx, nmax + 1))
    rim = np.empty((nx, nmax + 1))
    for j in range(nx):
        for n in range(2, nmax + 1):
            if spf[n] == n:
                ang = h * xs[j] * lnn[n]
                rre[j, n] = math.cos(ang)
                rim[j, n] = -math.sin(ang)
    cre = np.empty(nmax + 1)
    cim = np.empty(nmax + 1)
    ure = np.empty(nmax + 1)
    uim = np.empty(nmax + 1)
    for i in range(npan):
        a = lefts[i]
        nneed = 2
        for j in range(nx):
            t = a + h * xs[j]
            if t >= rs_floor:
                nneed = max(nneed, int(math.sqrt(t / (2.0 * math.pi))))
            else:
                nneed = max(nneed, _em_length(0.5, t, M, bk, abs_target))
        for n in range(2, nneed + 1):
            if spf[n] == n:
                ang = a * lnn[n]
                cre[n] = math.cos(ang)
                cim[n] = -math.sin(ang)
        for j in range(nx):
            t = a + h * xs[j]
            if t >= rs_floor:
                N = int(math.sqrt(t / (2.0 * math.pi)))
            else:
                N = _em_length(0.5, t, M, bk, abs_target)
                N -= 1
            ure[1] = 1.0
            uim[1] = 0.0
            sre = 1.0
            sim = 0.0
            for n in range(2, N + 1):
                p = spf[n]
                if p == n:
                    ure[n] = cre[n] * rre[j, n] - cim[n] * rim[j, n]
                    uim[n] = cre[n] * rim[j, n] + cim[n] * rre[j, n]
                else:
                    q = cof[n]
                    ar = ure[p]
                    ai = uim[p]
                    br = ure[q]
                    bi = uim[q]
                    ure[n] = ar * br - ai * bi
                    uim[n] = ar * bi + ai * br
                sre += wgt[n] * ure[n]
                sim += wgt[n] * uim[n]
            if t >= rs_floor:
                z = _z_rs_finish(t, sre, sim, K, tab, tlen)
                out[i, j] = z * z
            else:
                v = _zeta_em_finish(0.5, t, N + 1, M, bk, sre, sim)
                out[i, j] = v.real * v.real + v.imag * v.imag


def _em_nmax(sigma, tmax, pol):
    return int(_em_length(float(sigma), float(tmax), pol.em_terms, _BK, pol.em_abs_target))


# ---------------------------------------------------------------------------
# threading helpers

_CHUNK = 4096


def _map_chunks(kernel, ts, out, workers, *args, chunk=_CHUNK):
    """Run ``kernel(ts_chunk, out_chunk, *args)`` over fixed chunks.

    Chunk boundaries depend only on the input length, and every output
    element is computed by the same sequential code, so results are
    bit-identical for any ``workers``.
    """
    n = ts.shape[0]
    bounds = [(i, min(i + chunk, n)) for i in range(0, n, chunk)]
    if workers <= 1 or len(bounds) == 1:
        for lo, hi in bounds:
            kernel(ts[lo:hi], out[lo:hi], *args)
        return out
    with ThreadPoolExecutor(max_workers=workers) as ex:
        list(ex.map(lambda b: kernel(ts[b[0] : b[1]], out[b[0] : b[1]], *args), bounds))
    return out


def _workers(workers):
    if workers is not None:
        return max(1, int(workers))
    from .config import env_workers

    return env_workers()


# ---------------------------------------------------------------------------
# public API


def _check_height(t, lo=1.0, what="t"):
    if not (t >= lo) or not math.isfinite(t):
        raise DomainError(f"{what} = {t!r} is outside the supported range [{lo}, inf)")


def theta(t: float, pol: PrecisionPolicy = DEFAULT_POLICY) -> float:
    """Riemann-Siegel theta from its asymptotic series (terms through t**-9)."""
    _check_height(t)
    return float(_theta_series(float(t)))


def theta_exact(t):
    """theta(t) = Im log Gamma(1/4 + i t/2) - (t/2) log pi, via scipy's loggamma.

    Used for the Euler-Maclaurin rotation at small t where the series is poor.
    """
    t = np.asarray(t, dtype=float)
    return np.imag(loggamma(0.25 + 0.5j * t)) - 0.5 * t * math.log(math.pi)


def z_riemann_siegel(t: float, terms: int = 2) -> float:
    """Z(t) from the Riemann-Siegel formula with corrections C0..C_terms, no fallback."""
    _check_height(t, 2 * math.pi)
    if not 0 <= terms <= 4:
        raise ValueError("terms must lie in 0..4")
    spf, cof, lnn = _sieve(int(math.sqrt(t / TWO_PI)) + 1)
    return float(_z_rs(float(t), terms, _RS_TAB, _RS_LEN, spf, cof, lnn))


def _em_rotated(t, pol):
    spf, cof, lnn = _sieve(_em_nmax(0.5, t, pol))
    v = _zeta_em(0.5, float(t), pol.em_terms, _BK, pol.em_abs_target, spf, cof, lnn)
    th = float(theta_exact(t)) if t < 10 else float(_theta_series(float(t)))
    return complex(math.cos(th), math.sin(th)) * v


def _uses_rs(t, pol):
    if t >= pol.rs_floor:
        return True
    if t > EM_PRACTICAL_CEILING:
        warnings.warn(
            f"t = {t:g}: Riemann-Siegel with {pol.rs_correction_terms} correction terms cannot meet "
            f"target_rel_err = {pol.target_rel_err:g} and Euler-Maclaurin is impractical here",
            AccuracyWarning,
            stacklevel=3,
        )
        return True
    return False


def hardy_Z(t: float, pol: PrecisionPolicy = DEFAULT_POLICY) -> float:
    """Hardy's Z(t), real with |Z(t)| = |zeta(1/2 + it)|."""
    _check_height(t)
    t = float(t)
    if _uses_rs(t, pol):
        spf, cof, lnn = _sieve(int(math.sqrt(t / TWO_PI)) + 1)
        return float(_z_rs(t, pol.rs_correction_terms, _RS_TAB, _RS_LEN, spf, cof, lnn))
    return _em_rotated(t, pol).real


def z_imag_residual(t: float, pol: PrecisionPolicy = DEFAULT_POLICY) -> float:
    """|Im(exp(i theta) zeta(1/2+it))| / |zeta(1/2+it)| on the Euler-Maclaurin route."""
    _check_height(t)
    w = _em_rotated(float(t), pol)
    return abs(w.imag) / max(abs(w), 1e-300)


def abs2_critical(t: float, pol: PrecisionPolicy = DEFAULT_POLICY) -> float:
    """|zeta(1/2 + it)|^2 = Z(t)^2."""
    z = hardy_Z(t, pol)
    return z * z


def abs2_critical_array(ts, pol: PrecisionPolicy = DEFAULT_POLICY, workers=None, allow_small=False):
    """Vectorized |zeta(1/2 + it)|^2.

    With ``allow_small`` the range extends down to t = 0 (Euler-Maclaurin
    there), which is what the Hardy-Littlewood integral needs.
    """
    ts = np.ascontiguousarray(ts, dtype=float)
    if ts.size == 0:
        return np.zeros(ts.shape)
    lo = 0.0 if allow_small else 1.0
    tmin = float(ts.min())
    if not tmin >= lo or not np.isfinite(ts).all():
        raise DomainError(f"t = {tmin!r} is outside the supported range [{lo}, inf)")
    tmax = float(ts.max())
    if tmax > EM_PRACTICAL_CEILING:
        _uses_rs(tmax, pol)
    flat = ts.ravel()
    out = np.empty_like(flat)
    spf, cof, lnn = _sieve(max(int(math.sqrt(tmax / TWO_PI)) + 1, _em_nmax(0.5, min(tmax, pol.rs_floor), pol)))
    _map_chunks(
        _abs2_kernel,
        flat,
        out,
        _workers(workers),
        pol.rs_floor,
        pol.rs_correction_terms,
        _RS_TAB,
        _RS_LEN,
        pol.em_terms,
        _BK,
        pol.em_abs_target,
        spf,
        cof,
        lnn,
    )
    return out.reshape(ts.shape)


def zeta_em(sigma: float, t: float, pol: PrecisionPolicy = DEFAULT_POLICY) -> complex:
    """zeta(sigma + it) by Euler-Maclaurin summation.

    The truncation point grows like |t|, so cost is linear in t; above
    ``EM_PRACTICAL_CEILING`` an AccuracyWarning is issued.
    """
    sigma = float(sigma)
    t = float(t)
    if not (math.isfinite(sigma) and math.isfinite(t)):
        raise DomainError("sigma and t must be finite")
    if sigma < 0.5:
        raise DomainError(f"sigma = {sigma} < 1/2 is not supported")
    if t < 0:
        raise DomainError(f"t = {t} < 0 is not supported")
    if sigma == 1.0 and t == 0.0:
        raise PoleError("zeta has a pole at s = 1")
    if t > EM_PRACTICAL_CEILING:
        warnings.warn(f"zeta_em at t = {t:g}: cost grows linearly in t", AccuracyWarning, stacklevel=2)
    spf, cof, lnn = _sieve(_em_nmax(sigma, t, pol))
    return complex(_zeta_em(sigma, t, pol.em_terms, _BK, pol.em_abs_target, spf, cof, lnn))


def zeta_em_array(sigma: float, ts, pol: PrecisionPolicy = DEFAULT_POLICY, workers=None):
    """Vectorized ``zeta_em`` for a fixed sigma."""
    ts = np.ascontiguousarray(ts, dtype=float)
    if sigma < 0.5:
        raise DomainError(f"sigma = {sigma} < 1/2 is not supported")
    if ts.size and (ts.min() < 0 or (sigma == 1.0 and (ts == 0).any())):
        raise DomainError("t must be >= 0 and s != 1")
    flat = ts.ravel()
    out = np.empty(flat.shape, dtype=complex)
    spf, cof, lnn = _sieve(_em_nmax(sigma, float(flat.max()) if flat.size else 0.0, pol))
    _map_chunks(
        lambda a, o, *rest: _zeta_em_kernel(float(sigma), a, o, *rest),
        flat,
        out,
        _workers(workers),
        pol.em_terms,
        _BK,
        pol.em_abs_target,
        spf,
        cof,
        lnn,
    )
    return out.reshape(ts.shape)


def zeta_abs2_array(sigma: float, ts, pol: PrecisionPolicy = DEFAULT_POLICY, workers=None):
    """|zeta(sigma + it)|^2 on an array of heights (Euler-Maclaurin route)."""
    v = zeta_em_array(sigma, ts, pol, workers)
    return v.real * v.real + v.imag * v.imag


def abs2_critical_panels(lefts, h, xs, pol: PrecisionPolicy = DEFAULT_POLICY, workers=None):
    """|zeta(1/2+it)|^2 on the grid t = lefts[i] + h * xs[j] (equal-width panels, t >= 0)."""
    lefts = np.ascontiguousarray(lefts, dtype=float)
    xs = np.ascontiguousarray(xs, dtype=float)
    out = np.empty((lefts.shape[0], xs.shape[0]))
    if lefts.size == 0:
        return out
    if lefts.min() < 0:
        raise DomainError("panels must lie in t >= 0")
    tmax = float(lefts.max()) + h * float(xs.max())
    if tmax > EM_PRACTICAL_CEILING:
        _uses_rs(tmax, pol)
    spf, cof, lnn = _sieve(max(int(math.sqrt(tmax / TWO_PI)) + 1, _em_nmax(0.5, min(tmax, pol.rs_floor), pol)))
    _map_chunks(
        _abs2_panels_kernel,
        lefts,
        out,
        _workers(workers),
        float(h),
        xs,
        pol.rs_floor,
        pol.rs_correction_terms,
        _RS_TAB,
        _RS_LEN,
        pol.em_terms,
        _BK,
        pol.em_abs_target,
        spf,
        cof,
        lnn,
        chunk=256,
    )
    return out


class CriticalLineAbs2:
    """The integrand |zeta(1/2+it)|^2 for t >= 0, as a vectorized callable.

    Exposes ``panel_values`` so the quadrature module can use the fast
    equal-width panel kernel.
    """

    def __init__(self, pol: PrecisionPolicy = DEFAULT_POLICY, workers=None):
        self.pol = pol
        self.workers = workers

    def __call__(self, t):
        return abs2_critical_array(t, self.pol, self.workers, allow_small=True)

    def panel_values(self, lefts, h, xs):
        return abs2_critical_panels(lefts, h, xs, self.pol, self.workers)
