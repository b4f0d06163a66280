"""Stress-by-dimensionality tables for anisotropic Gaussian clouds of known rank."""

import argparse

import numpy as np

from semmap import DissimilarityMatrix, elbow_scan, euclidean_distances


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=60)
    ap.add_argument("--max-dims", type=int, default=6)
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--engine", choices=["classic", "smacof"], default="classic")
    args = ap.parse_args()

    for rank, sds in [(2, (3.0, 2.0)), (3, (3.0, 2.0, 1.5)), (4, (3.0, 2.0, 1.5, 1.0))]:
        for seed in range(args.seeds):
            pts = np.random.default_rng(seed).standard_normal((args.n, rank)) * np.array(sds)
            delta = DissimilarityMatrix([f"p{i}" for i in range(args.n)], euclidean_distances(pts))
            scan = elbow_scan(delta, args.max_dims, args.engine)
            table = " ".join(f"{s:.3g}" for _, s in scan.rows)
            print(f"rank={rank} seed={seed} elbow={scan.elbow}  stress: {table}")


if __name__ == "__main__":
    main()
