"""Modified Bessel and Green-kernel reference values at 30 digits (mpmath)."""

import mpmath as mp

mp.mp.dps = 30

K0_POINTS = [1e-6, 1e-3, 0.1, 0.5, 1.0, 2.0, 2.5, 5.0, 10.0, 24.0, 26.0, 50.0, 200.0, 700.0]
KHALF_POINTS = [1e-3, 0.3, 1.0, 4.0, 20.0]


def run():
    return {
        "K0": [[x, float(mp.besselk(0, x))] for x in K0_POINTS],
        "K_half": [[x, float(mp.besselk(mp.mpf(1) / 2, x))] for x in KHALF_POINTS],
        # G_m(r) in d = 3 at m = 1, r = 1 and in d = 2 at m = 1.5, r = 0.4
        "yukawa_m1_r1": float(mp.exp(-1) / (4 * mp.pi)),
        "green2d_m1p5_r0p4": float(mp.besselk(0, mp.mpf("0.6")) / (2 * mp.pi)),
    }


if __name__ == "__main__":
    import json

    print(json.dumps(run(), indent=1))
