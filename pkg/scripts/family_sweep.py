"""Sweep the three-part chain over alpha, m and a small family of G, writing CSV."""
import argparse
import csv
import sys
from dataclasses import dataclass

from hmconvex.errors import HMConvexError
from hmconvex.fractal_algebra import Alpha
from hmconvex.functions import ConvexityParams, HFunction, MonomialSeries
from hmconvex.inequalities import InequalityCase, verify_hh_hm

FAMILY = {
    "x^2": [0.0, 0.0, 1.0],
    "x^2+x": [0.0, 1.0, 1.0],
    "x^3": [0.0, 0.0, 0.0, 1.0],
    "x^4+x^2": [0.0, 0.0, 1.0, 0.0, 1.0],
}


@dataclass(frozen=True)
class SweepConfig:
    alphas: tuple[float, ...] = (0.3, 0.5, 0.7, 0.9, 1.0)
    ms: tuple[float, ...] = (0.5, 0.75, 1.0)
    nu: float = 0.0
    mu: float = 1.0


def rows(cfg: SweepConfig):
    for name, coeffs in FAMILY.items():
        G = MonomialSeries.from_dense(0.0, coeffs)
        for a in cfg.alphas:
            for m in cfg.ms:
                p = ConvexityParams(HFunction.power_alpha(), m, Alpha(a), cfg.mu / m ** 2)
                try:
                    rep = verify_hh_hm(InequalityCase(G, p, cfg.nu, cfg.mu))
                except HMConvexError as exc:
                    yield [name, a, m, "", "", "", "Error", type(exc).__name__]
                    continue
                L, M, R = (v.base for _, v in rep.sides)
                yield [name, a, m, repr(L), repr(M), repr(R), rep.verdict.value, ""]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", help="CSV path; stdout if omitted")
    args = ap.parse_args()
    fh = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["G", "alpha", "m", "L_base", "M_base", "R_base", "verdict", "error"])
        w.writerows(rows(SweepConfig()))
    finally:
        if args.out:
            fh.close()


if __name__ == "__main__":
    main()
