"""Write tests/data/golden_zeta.json from extended-precision mpmath evaluations.

Run once offline; the runtime package never imports mpmath.

    python3 scripts/make_goldens.py
"""
import json
from pathlib import Path

import mpmath as mp

mp.mp.dps = 40
OUT = Path(__file__).resolve().parents[1] / "tests" / "data" / "golden_zeta.json"

THETA_T = [1.0, 2.0, 6.283185307179586, 10.0, 17.8456, 50.0, 100.0, 1000.0, 1.0e4, 1.0e5, 1.0e6]
Z_T = [14.0, 14.2, 20.0, 35.0, 50.0, 100.0, 500.0, 1000.0, 2500.0, 5000.0, 1.0e4, 5.0e4, 1.0e5, 1.0e6]
ZETA_S = [(2.0, 0.0), (4.0, 0.0), (0.5, 14.1347), (0.5, 100.0), (0.75, 50.0), (1.0, 10.0), (1.0, 1000.0), (1.5, 300.0), (2.0, 5000.0)]


def f(x):
    return float(x)


def main():
    g0 = mp.findroot(mp.siegeltheta, 17.8)
    # sign-scan oracle: Z changes sign exactly once on [14.0, 14.2]
    scan = [mp.siegelz(mp.mpf(14) + mp.mpf(i) / 1000) for i in range(201)]
    changes = sum(1 for a, b in zip(scan, scan[1:]) if a * b < 0)
    doc = {
        "generator": "scripts/make_goldens.py",
        "mpmath_version": mp.__version__,
        "dps": mp.mp.dps,
        "first_zero": f(mp.im(mp.zetazero(1))),
        "first_zero_sign_changes_14_0_14_2": changes,
        "theta_root": f(g0),
        "theta": [[t, f(mp.siegeltheta(t))] for t in THETA_T],
        "hardy_Z": [[t, f(mp.siegelz(t))] for t in Z_T],
        "zeta": [[s, t, f(mp.re(v)), f(mp.im(v))] for s, t in ZETA_S for v in [mp.zeta(mp.mpc(s, t))]],
        "zeta2": f(mp.zeta(2)),
        "zeta4": f(mp.zeta(4)),
    }
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(doc, indent=2) + "\n")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
