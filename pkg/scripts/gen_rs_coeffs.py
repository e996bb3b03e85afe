"""Generate Taylor tables for the Riemann-Siegel correction terms C0..C4.

Each C_k(p), p in [0, 1), is expanded in z = 2p - 1 around p = 1/2 and the
coefficients are written to src/zetaladder/_rs_coeffs.py. Run with
``python scripts/gen_rs_coeffs.py``; needs mpmath.
"""
from pathlib import Path

import mpmath as mp

mp.mp.dps = 80
DEG = 120


def psi(z):
    p = (z + 1) / 2
    return mp.cos(2 * mp.pi * (p * p - p - mp.mpf(1) / 16)) / mp.cos(2 * mp.pi * p)


def main():
    # Taylor coefficients of psi in z; psi is entire and even in z.
    a = mp.taylor(psi, mp.mpf("1e-40"), DEG, method="quad", radius=mp.mpf(2))

    def deriv_p(coeffs, n):
        # d^n/dp^n = 2^n d^n/dz^n
        out = list(coeffs)
        for _ in range(n):
            out = [(j + 1) * out[j + 1] * 2 for j in range(len(out) - 1)]
        return out

    pi = mp.pi

    def comb(*terms):
        n = min(len(deriv_p(a, d)) for _, d in terms)
        res = [mp.mpf(0)] * n
        for c, d in terms:
            dd = deriv_p(a, d)
            for j in range(n):
                res[j] += c * dd[j]
        return res

    C = [
        comb((1, 0)),
        comb((-1 / (96 * pi**2), 3)),
        comb((1 / (64 * pi**2), 2), (1 / (18432 * pi**4), 6)),
        comb((-1 / (64 * pi**2), 1), (-1 / (3840 * pi**4), 5), (-1 / (5308416 * pi**6), 9)),
        comb(
            (1 / (128 * pi**2), 0),
            (mp.mpf(19) / (24576 * pi**4), 4),
            (mp.mpf(11) / (5898240 * pi**6), 8),
            (1 / (2038431744 * pi**8), 12),
        ),
    ]
    lines = [
        '"""Taylor coefficients of the Riemann-Siegel terms C0..C4 in z = 2p - 1.',
        "",
        "Generated by scripts/gen_rs_coeffs.py; do not edit by hand.",
        '"""',
        "",
        "RS_COEFFS = (",
    ]
    for k, c in enumerate(C):
        # keep terms that can matter on |z| <= 1 at double precision
        last = max(j for j, v in enumerate(c) if abs(mp.re(v)) > mp.mpf("1e-22"))
        parity = k % 2
        vals = [mp.re(c[j]) if (j % 2 == parity) else mp.mpf(0) for j in range(last + 1)]
        lines.append("    (")
        for v in vals:
            lines.append(f"        {mp.nstr(v, 20, min_fixed=0, max_fixed=0)},")
        lines.append("    ),")
    lines.append(")")
    out = Path(__file__).resolve().parents[1] / "src" / "zetaladder" / "_rs_coeffs.py"
    out.write_text("\n".join(lines) + "\n")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
