#!/usr/bin/env python3
"""Regenerate the synthetic stand-in CSVs (cmc, glass, pima, wine).

iris.csv is the classic Anderson/Fisher measurements and is NOT generated
here. The other four files mirror the instance/dimension/class layout of
their UCI namesakes so the harness and tests have fixtures of realistic
shape, but the feature values are synthetic (per-class Gaussian blobs,
fixed seed). Point SWARM_CLUSTER_DATA at a directory with real UCI copies
to run against the originals.
"""
import random

SPECS = {
    # name: (dims, class sizes, feature scale)
    "cmc":   (9,  [629, 334, 510], 10.0),
    "glass": (9,  [70, 17, 76, 13, 9, 29], 4.0),
    "pima":  (8,  [500, 268], 50.0),
    "wine":  (13, [59, 71, 48], 30.0),
}


def main():
    rng = random.Random(20240229)
    for name, (d, sizes, scale) in sorted(SPECS.items()):
        rows = []
        for cls, size in enumerate(sizes, start=1):
            mean = [rng.uniform(0.2, 1.0) * scale for _ in range(d)]
            sd = [rng.uniform(0.05, 0.18) * scale for _ in range(d)]
            for _ in range(size):
                feats = [rng.gauss(m, s) for m, s in zip(mean, sd)]
                rows.append(",".join(f"{v:.4f}" for v in feats) + f",{cls}")
        with open(name + ".csv", "w") as f:
            f.write("\n".join(rows) + "\n")
        print(f"{name}.csv: {len(rows)} rows, {d} features, {len(sizes)} classes")


if __name__ == "__main__":
    main()
