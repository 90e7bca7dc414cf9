"""Structural identities checked on random graphs.

Draws a handful of random connected graphs (loops and parallel edges
included), equips them with random involutive vertex matrices and
prints three deviations that the construction forces to vanish:

  involution   S_tot(p) S_tot(-p) = 1
  unitarity    S_tot(p)^dag S_tot(p) = 1   (unitary vertex data)
  series       S_tot equals the summed multiple-reflection series
               (evaluated slightly off the real axis so it converges)

Numbers at machine-noise level are the point of the demo.
"""

import numpy as np

from graphscatter import (
    GraphSpec,
    build_graph,
    constant_local,
    mode_index,
    path_sum_oracle,
    total_scattering,
    verify_involution,
    verify_unitarity,
)


def random_graph(rng):
    n = int(rng.integers(2, 5))
    edges = [
        (int(rng.integers(0, v)), v, float(rng.uniform(0.6, 2.0)))
        for v in range(1, n)
    ]
    if rng.random() < 0.6:
        a = int(rng.integers(0, n))
        edges.append((a, a, float(rng.uniform(0.6, 2.0))))
    ext = tuple(int(rng.integers(0, n)) for _ in range(2))
    return build_graph(GraphSpec(n, tuple(edges), ext))


def random_unitary_involutive(rng, vertex, size):
    z = rng.normal(size=(size, size)) + 1j * rng.normal(size=(size, size))
    q, _ = np.linalg.qr(z)
    signs = np.where(rng.random(size) < 0.5, 1.0, -1.0)
    return constant_local(vertex, (q * signs) @ q.conj().T)


def main():
    rng = np.random.default_rng(7)
    print(" graph                     involution   unitarity    series gap")
    for k in range(8):
        g = random_graph(rng)
        idx = mode_index(g)
        locs = [
            random_unitary_involutive(rng, v, idx.vertex_slot_count(v))
            for v in range(g.vertex_count)
        ]
        p = float(rng.uniform(0.4, 5.0))
        inv = verify_involution(g, locs, idx, p)
        uni = verify_unitarity(g, locs, idx, p)

        d_min = min((e.length for e in g.internal_edges), default=1.0)
        p_off = p + 0.25j / d_min
        gap = float(
            np.max(
                np.abs(
                    total_scattering(g, locs, idx, p_off).matrix
                    - path_sum_oracle(g, locs, idx, p_off, tol=1e-12)
                )
            )
        )
        shape = "%d vertices, %d edges" % (g.vertex_count, g.n_internal)
        print(" %-24s  %.2e     %.2e     %.2e" % (shape, inv, uni, gap))


if __name__ == "__main__":
    main()
