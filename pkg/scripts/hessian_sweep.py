#!/usr/bin/env python3
"""Measure smallness constants for the perturbed inequality.

For the trace functional Psi_N(P) = N tr psi(P Q P) on the projection
manifold, sweep random base points and test polynomials, compute the
finite-difference Hessian over the product tangent space, and record

    m = max(0, -lambda_min(Hess Psi_N)) / N

against the sup norms n1 = sup|psi'| and n2 = sup|psi''| on [0, 1].
The smallest pair (c1, c2) with c1*n1 + c2*n2 >= m across the whole
sweep is the empirical constant pair quoted by the relative inequality
check.  The pair is found by a small linear program and printed with a
safety roundup.

Run:

    python3 scripts/hessian_sweep.py --dims 4 6 8 --trials 12 --seed 0
"""

from __future__ import annotations

import argparse
import csv
import sys

import numpy as np
from scipy.optimize import linprog

from liberlab.grassmann import hessian_fd, sample_haar_projection
from liberlab.potentials import PsiSpec

# Mixes of first and second derivative size, low order first.
TEST_POLYS = [
    (0.0, 1.0),                  # psi = x
    (0.0, 0.0, 0.5),             # psi = x^2 / 2
    (0.0, 0.0, 0.0, 1.0 / 6),    # psi = x^3 / 6
    (0.0, 1.0, -1.0),            # psi = x - x^2
    (0.0, 0.5, 0.0, 0.5),        # mixed odd
    (0.0, 0.0, 1.0, -0.5),       # mixed even
]


def sup_norms(coeffs: tuple[float, ...]) -> tuple[float, float]:
    xs = np.linspace(0.0, 1.0, 2001)
    d1 = np.polynomial.polynomial.polyder(coeffs) if len(coeffs) > 1 else [0.0]
    d2 = np.polynomial.polynomial.polyder(coeffs, 2) if len(coeffs) > 2 else [0.0]
    n1 = float(np.max(np.abs(np.polynomial.polynomial.polyval(xs, d1))))
    n2 = float(np.max(np.abs(np.polynomial.polynomial.polyval(xs, d2))))
    return n1, n2


def sweep(dims, trials, seed):
    rng = np.random.default_rng(seed)
    rows = []
    for coeffs in TEST_POLYS:
        psi = PsiSpec(coeffs)
        n1, n2 = sup_norms(psi.coeffs)
        for n_dim in dims:
            for trial in range(trials):
                k = int(rng.integers(1, n_dim))
                l = int(rng.integers(1, n_dim))
                p = sample_haar_projection(n_dim, k, rng)
                q = sample_haar_projection(n_dim, l, rng)
                hess = hessian_fd(p, q, psi)
                lam_min = float(np.linalg.eigvalsh(hess)[0])
                m = max(0.0, -lam_min) / n_dim
                rows.append(
                    {
                        "psi": ",".join(repr(c) for c in coeffs),
                        "N": n_dim,
                        "k": k,
                        "l": l,
                        "trial": trial,
                        "lambda_min": lam_min,
                        "m": m,
                        "n1": n1,
                        "n2": n2,
                    }
                )
                print(
                    f"psi=({rows[-1]['psi']}) N={n_dim} k={k} l={l} "
                    f"lambda_min={lam_min:+.4f} m={m:.4f} n1={n1:.3f} n2={n2:.3f}",
                    flush=True,
                )
    return rows


def minimal_pair(rows):
    """Smallest (c1, c2) by c1 + c2 subject to c1*n1 + c2*n2 >= m for all rows."""
    active = [r for r in rows if r["m"] > 0.0]
    if not active:
        return 0.0, 0.0
    a_ub = [[-r["n1"], -r["n2"]] for r in active]
    b_ub = [-r["m"] for r in active]
    res = linprog([1.0, 1.0], A_ub=a_ub, b_ub=b_ub, bounds=[(0, None), (0, None)])
    if not res.success:
        raise RuntimeError(f"constant fit failed: {res.message}")
    return float(res.x[0]), float(res.x[1])


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dims", type=int, nargs="+", default=[4, 6, 8])
    parser.add_argument("--trials", type=int, default=12)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", default=None, help="CSV of all sweep rows")
    args = parser.parse_args(argv)

    rows = sweep(args.dims, args.trials, args.seed)
    c1, c2 = minimal_pair(rows)
    worst = max(rows, key=lambda r: r["m"])
    print()
    print(f"sweep size: {len(rows)} Hessians")
    print(
        f"worst curvature m={worst['m']:.4f} at psi=({worst['psi']}) "
        f"N={worst['N']} k={worst['k']} l={worst['l']}"
    )
    print(f"minimal pair: c1={c1:.4f} c2={c2:.4f}")
    print(f"suggested frozen constants (round up to 0.1): "
          f"c1={np.ceil(c1 * 10) / 10:.1f} c2={np.ceil(c2 * 10) / 10:.1f}")

    if args.out:
        with open(args.out, "w", newline="") as handle:
            writer = csv.DictWriter(handle, fieldnames=list(rows[0]))
            writer.writeheader()
            writer.writerows(rows)
        print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
