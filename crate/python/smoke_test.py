"""Smoke test for the laxspec_py extension module.

Build and stage the module first:

    cargo build --release -p laxspec-py --features extension-module
    cp target/release/liblaxspec_py.so python/laxspec_py.so

then run `python3 python/smoke_test.py`.
"""

import cmath
import math
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import laxspec_py as lx

def check(label, condition, detail=""):
    status = "ok" if condition else "FAIL"
    print(f"  {status:4} {label}{f' ({detail})' if detail else ''}")
    return condition


def main():
    ok = True
    c = 15.0 / (4.0 * math.pi)

    print("traveling wave through the exact scheme:")
    wave0 = lx.traveling_wave(c, 0.0, 64)
    ok &= check("data looks right", wave0.kind == "real-valued" and len(wave0) == 64,
                repr(wave0))
    ok &= check("mean coefficient is 1", wave0.amps()[0] == 1.0)
    evolved = lx.evolve_exact("bo", wave0, 64, 1.0)
    target = lx.traveling_wave(c, 1.0, 64)
    err = lx.sobolev_error(evolved, target, 0.0)
    ok &= check("matches the translated wave", err < 1e-10, f"L2 error {err:.3e}")

    print("RK4 baseline against the scheme:")
    stepped = lx.rk4_evolve("bo", wave0, 64, 1.0)
    gap = lx.sobolev_error(stepped, evolved, 0.0)
    ok &= check("the two solvers agree", gap < 1e-5, f"gap {gap:.3e}")

    print("one-mode cubic Szego closed form:")
    a = 0.55 - 0.35j
    out = lx.evolve_exact("szego", lx.SpectralCoeffs.hardy([a]), 1, 2.5)
    expected = a * cmath.exp(-2.5j * abs(a) ** 2)
    drift = abs(out.amps()[0] - expected)
    ok &= check("phase rotates at the intensity", drift < 1e-12, f"drift {drift:.3e}")
    closed = lx.szego_constant(a, 2.5)
    ok &= check("closed-form helper agrees",
                abs(closed.amps()[0] - out.amps()[0]) < 1e-12)

    print("random data and the focusing mass gate:")
    draw = lx.hardy_random_data(seed=7, s=2.0, k_ref=32)
    ok &= check("draws are unit mass", abs(draw.l2_norm() - 1.0) < 1e-12,
                f"norm {draw.l2_norm():.12f}")
    half = lx.SpectralCoeffs.hardy([0.5 * z for z in draw.amps()])
    lx.evolve_exact("cs-focusing", half, 32, 0.3)  # below the gate: fine
    try:
        lx.evolve_exact("cs-focusing", draw, 32, 0.3)
        ok &= check("unit-mass data is rejected", False)
    except ValueError as e:
        ok &= check("unit-mass data is rejected", "mass" in str(e).lower(), str(e))

    print("grid synthesis round trip:")
    grid = draw.to_grid(64)
    back = lx.from_grid("hardy", grid, 32)
    round_trip = lx.sobolev_error(back, draw, 0.0)
    ok &= check("analysis inverts synthesis", round_trip < 1e-13,
                f"drift {round_trip:.3e}")

    if not ok:
        print("smoke test FAILED")
        return 1
    print("smoke test passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
