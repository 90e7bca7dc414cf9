"""Eigenmodes of compact graphs found from the secular determinant.

An interval with reflecting ends is the particle in a box: ends with
r1 r2 = 1 quantize at p = n pi / L, flipping one end's sign moves the
comb to the half-integer grid. A compact triangle shows the same
machinery on a genuinely multidimensional determinant.
"""

import numpy as np

from graphscatter import (
    GraphSpec,
    build_graph,
    canonical,
    compact_spectrum,
    kirchhoff_local,
    mode_index,
)


def interval_report(r1, r2, length):
    fix = canonical("interval_compact", L=length, r1=r1, r2=r2)
    idx = mode_index(fix.graph)
    modes = compact_spectrum(fix.graph, fix.locals, idx, 1e-6, 10.0)
    print("interval L=%.2f, end reflections (%+.0f, %+.0f):" % (length, r1, r2))
    print("  modes:", "  ".join("%.6f" % m for m in modes))
    base = np.pi / length
    if r1 * r2 > 0:
        grid = "n * %.6f" % base
    else:
        grid = "(n + 1/2) * %.6f" % base
    print("  expected grid: %s" % grid)
    print()


def main():
    interval_report(-1.0, -1.0, 1.0)
    interval_report(+1.0, -1.0, 1.0)
    interval_report(-1.0, -1.0, 1.5)

    spec = GraphSpec(3, ((0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)), ())
    g = build_graph(spec)
    idx = mode_index(g)
    locs = [kirchhoff_local(v, 2) for v in range(3)]
    modes = compact_spectrum(g, locs, idx, 1e-6, 10.0)
    print("compact unit triangle with Kirchhoff vertices:")
    print("  modes:", "  ".join("%.6f" % m for m in modes))
    print("  (cycle length 3 makes these multiples of 2 pi / 3)")


if __name__ == "__main__":
    main()
