"""Print how far the two integral readings drift apart as alpha falls.

For each monomial x^k on [0, 1] this compares the Gamma-ratio value with the
base-arithmetic Riemann reading, and for x + x^2 it also compares the
term-wise exact rule with the right kernel.
"""
import argparse
from dataclasses import dataclass

from hmconvex.functions import MonomialSeries
from hmconvex.lfi import IntegralScheme, SchemeKind, convention_gap, lfi


@dataclass(frozen=True)
class GapConfig:
    alphas: tuple[float, ...] = (0.2, 0.4, 0.6, 0.8, 1.0)
    degrees: tuple[int, ...] = (0, 1, 2, 3)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--alpha", type=float, action="append", help="repeatable; defaults to 0.2..1.0")
    args = ap.parse_args()
    cfg = GapConfig(alphas=tuple(args.alpha)) if args.alpha else GapConfig()

    print("alpha  k  gamma_ratio    base_riemann   gap")
    for a in cfg.alphas:
        for k in cfg.degrees:
            g = convention_gap(MonomialSeries.power(0.0, k), 0.0, 1.0, a)
            print(f"{a:5.2f} {k:2d}  {g.gamma_ratio:.10f}  {g.base_riemann:.10f}  {g.gap:+.3e}")

    print("\nx + x^2 on [0, 1]: term-wise exact vs right kernel")
    f = MonomialSeries.from_dense(0.0, [0.0, 1.0, 1.0])
    for a in cfg.alphas:
        e = lfi(f, 0.0, 1.0, a, IntegralScheme(SchemeKind.EXACT_MONOMIAL)).real
        r = lfi(f, 0.0, 1.0, a, IntegralScheme(SchemeKind.KERNEL_RIGHT)).real
        print(f"{a:5.2f}  exact {e:.10f}  kernel {r:.10f}  diff {e - r:+.3e}")


if __name__ == "__main__":
    main()
