"""Run every reference computation and write the literal results to tests/frozen_values.py.

Usage: python tools/oracles/freeze.py   (needs mpmath and scipy; takes a few minutes)
"""

import pprint
import sys
from pathlib import Path

HERE = Path(__file__).resolve().parent
sys.path.insert(0, str(HERE))

import bessel  # noqa: E402
import dense_modular  # noqa: E402
import fixtures  # noqa: E402
import radial_quadrature  # noqa: E402
import wave_transport  # noqa: E402

TARGET = HERE.parent.parent / "tests" / "frozen_values.py"


def main():
    sections = {
        "FIXTURES": {
            "bump3d": fixtures.BUMP3D,
            "straddle": fixtures.STRADDLE,
            "massless": fixtures.MASSLESS,
            "pair_a": fixtures.PAIR_A,
            "pair_b": fixtures.PAIR_B,
            "transport": wave_transport.SPEC,
        },
        "BESSEL": bessel.run(),
        "DENSE_MODULAR": dense_modular.run(),
        "QUADRATURE": radial_quadrature.run(),
        "TRANSPORT": wave_transport.run()["values"],
    }
    lines = ['"""Reference values produced by tools/oracles/freeze.py. Do not edit by hand."""', ""]
    for name, value in sections.items():
        lines.append(f"{name} = {pprint.pformat(value, width=110, sort_dicts=False)}")
        lines.append("")
    TARGET.write_text("\n".join(lines))
    print(f"wrote {TARGET}")


if __name__ == "__main__":
    main()
