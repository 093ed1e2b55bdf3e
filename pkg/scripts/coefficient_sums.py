#!/usr/bin/env python3
"""Coefficient-sum experiment: table of S(M) against the full prediction.

Writes a CSV with one row per M plus a JSON sidecar of the constants.

    python scripts/coefficient_sums.py --t0 1.0 --mmax 1e6 --out sums.csv
"""

import argparse
import json
import math

from eislab.lfunc import LSpec, asymptotic_constants, coeff_sum


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--t0", type=float, default=1.0)
    ap.add_argument("--mmax", type=float, default=1e6)
    ap.add_argument("--per-decade", type=int, default=4)
    ap.add_argument("--out", default="coefficient_sums.csv")
    args = ap.parse_args()

    spec = LSpec(t0=args.t0)
    consts = asymptotic_constants(spec)
    points = []
    m = 1000.0
    while m <= args.mmax + 0.5:
        points.append(int(round(m)))
        m *= 10.0 ** (1.0 / args.per_decade)

    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write("M,S,prediction,residual,ratio_to_leading\n")
        for m_val in points:
            s_val = coeff_sum(spec, m_val)
            pred = consts.prediction(m_val, spec.t0)
            lead = consts.main_loglinear * m_val * math.log(m_val)
            fh.write(f"{m_val},{s_val:.15g},{pred:.15g},{s_val - pred:.15g},"
                     f"{s_val / lead:.15g}\n")

    sidecar = args.out.rsplit(".", 1)[0] + "_constants.json"
    with open(sidecar, "w", encoding="utf-8") as fh:
        json.dump({"t0": args.t0,
                   "main_loglinear": consts.main_loglinear,
                   "main_linear": consts.main_linear,
                   "c_one": [consts.c_one.real, consts.c_one.imag],
                   "c_osc": [consts.c_osc.real, consts.c_osc.imag]}, fh, indent=2)
    print(f"wrote {args.out} and {sidecar}")


if __name__ == "__main__":
    main()
