"""Resonance poles of the tetrahedron and the cube.

Both solids get one lead per vertex, unit edge lengths and the same
matrix at every vertex; the secular determinant then collapses to a
low-degree polynomial in zeta = e^{-ip} whose roots are printed below,
split into genuine poles (where S_tot blows up) and removable ones
(where the determinant vanishes but S_tot stays finite). The cube's
genuine pole set is exactly the tetrahedron's set plus its negatives.
"""

import numpy as np

from graphscatter import (
    find_poles,
    kirchhoff_local,
    mode_index,
    platonic,
    secular_polynomial,
    tetra2_local,
)


def report(name, maker, label):
    g, _ = platonic(name)
    idx = mode_index(g)
    locs = [maker(v, g.degree(v)) for v in range(g.vertex_count)]
    poly = secular_polynomial(g, locs, idx, 1.0)
    records = find_poles(poly, include_removable=True)
    print("%s, %s vertex matrices (determinant degree %d):" % (name, label, poly.degree_bound))
    print("   zeta                    p = i log(zeta)         mult  kind")
    for rec in records:
        print(
        "  %9.6f %+9.6fi   %9.6f %+9.6fi   %d    %s"
            % (
                rec.zeta.real,
                rec.zeta.imag,
                rec.p_representative.real,
                rec.p_representative.imag,
                rec.multiplicity,
                "removable" if rec.removable else "genuine",
            )
        )
    print()


def main():
    for name in ("tetrahedron", "cube"):
        report(name, lambda v, d: kirchhoff_local(v, d), "Kirchhoff")
        report(name, lambda v, d: tetra2_local(v, d), "second-family")


if __name__ == "__main__":
    main()
