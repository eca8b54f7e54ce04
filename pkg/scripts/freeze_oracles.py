"""Recompute the frozen reference values in tests/data/oracles.json.

Everything here is evaluated with mpmath at 50 digits, independently of the
package code, so the tests compare the float64 implementation against an
outside reference rather than against itself.
"""

import json
from pathlib import Path

import mpmath as mp

mp.mp.dps = 50
OUT = Path(__file__).resolve().parents[1] / "tests" / "data" / "oracles.json"


def h(points, a, z):
    z = mp.mpc(z)
    return mp.fsum(mp.atan((z - b) / a) / (2**j * a) for j, b in enumerate(points))


def dzh(points, a, z):
    z = mp.mpc(z)
    return mp.fsum(mp.mpf(2) ** (-j) / ((z - b) ** 2 + a**2) for j, b in enumerate(points))


def F(points, a, x, y):
    """Closed-form tangent one-forms integrated along (0,0) -> (x,0) -> (x,y)."""
    def fy(t):
        hv = h(points, a, mp.mpc(x, t))
        u, v = hv.real, hv.imag
        return mp.matrix([mp.cosh(v) * mp.sin(u), -mp.cosh(v) * mp.cos(u)])
    f1 = mp.quad(lambda t: fy(t)[0], [0, y])
    f2 = mp.quad(lambda t: fy(t)[1], [0, y])
    return [f1, f2, mp.mpf(x)]


def as_c(z):
    return [float(mp.re(z)), float(mp.im(z))]


def main():
    mp_points = [mp.mpf(-0.2), mp.mpf(0.2)]
    a = mp.mpf("0.1")
    out = {}
    out["h_n2_z0"] = as_c(h(mp_points, a, 0))
    out["h_n1_a05_z05"] = as_c(h([0], mp.mpf("0.5"), mp.mpf("0.5")))
    out["dzh_n2_zm02"] = as_c(dzh(mp_points, a, mp.mpf("-0.2")))
    out["K_n2_zm02"] = float(-abs(dzh(mp_points, a, mp.mpf("-0.2"))) ** 2)
    # analytic continuation along the L-shaped path 0 -> 0.1 -> 0.1 + 0.01 i
    zend = mp.mpc("0.1", "0.01")
    leg1 = mp.quad(lambda t: dzh(mp_points, a, t), [0, mp.mpf("0.1")])
    leg2 = mp.quad(lambda s: dzh(mp_points, a, mp.mpc("0.1", s)) * 1j, [0, mp.mpf("0.01")])
    out["continuation_n2_L"] = {"z": as_c(zend), "integral": as_c(leg1 + leg2),
                                "closed_form": as_c(h(mp_points, a, zend))}
    # immersion at the top of the pinch column for n=1, a=0.25
    a4 = mp.mpf("0.25")
    w0 = (a4**2) ** mp.mpf(0.75) / 2
    out["F_n1_a025_top"] = {"z": [0.0, float(w0)], "F": [float(c) for c in F([0], a4, 0, w0)]}
    # a few generic interior points for n = 3
    pts3 = [mp.mpf("-0.3"), mp.mpf(0), mp.mpf("0.3")]
    samples = []
    for x, frac in [(-0.41, 0.9), (-0.12, -0.7), (0.05, 0.5), (0.33, -1.0), (0.47, 0.25)]:
        b = min(pts3, key=lambda bb: abs(x - bb))
        w = ((x - b) ** 2 + mp.mpf("0.05") ** 2) ** mp.mpf(0.75) / 2
        z = mp.mpc(x, frac * w)
        samples.append({"z": as_c(z), "h": as_c(h(pts3, mp.mpf("0.05"), z)),
                        "dzh": as_c(dzh(pts3, mp.mpf("0.05"), z))})
    out["h_n3_a005_samples"] = samples
    out["F_n3_a005_samples"] = [
        {"z": s["z"], "F": [float(c) for c in F(pts3, mp.mpf("0.05"), s["z"][0],
                                                 mp.mpf(s["z"][1]))]}
        for s in samples[:3]]
    # spiraling difference for n = 1, a = 1e-4, t = 0.05
    a_s = mp.mpf("1e-4")
    t = mp.mpf("0.05")
    out["u_diff_n1_a1e-4_t005"] = float(abs(h([0], a_s, t).real - h([0], a_s, 2 * t).real))
    OUT.write_text(json.dumps(out, indent=2, sort_keys=True) + "\n")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
