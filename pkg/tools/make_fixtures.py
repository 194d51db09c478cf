"""Regenerate the synthetic fixture CSVs under src/samaboost/fixtures/."""

import csv
from pathlib import Path

import numpy as np

OUT = Path(__file__).resolve().parents[1] / "src" / "samaboost" / "fixtures"


def blobs(rng, n_per_class, centers, spread):
    X, y = [], []
    for c, mu in enumerate(centers, start=1):
        X.append(rng.normal(mu, spread, size=(n_per_class, len(mu))))
        y += [c] * n_per_class
    return np.vstack(X), np.array(y)


def write(name, X, y, labels):
    cols = [f"f{j + 1}" for j in range(X.shape[1])]
    with open(OUT / name, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(cols + ["label"])
        for row, c in zip(X, y):
            w.writerow([f"{v:.6f}" for v in row] + [labels[c - 1]])


def main():
    rng = np.random.default_rng(20160601)
    # Two overlapping classes; every feature carries a little signal.
    centers = [np.zeros(6), np.full(6, 0.55)]
    X, y = blobs(rng, 100, centers, 1.0)
    write("binary_fixture.csv", X, y, ["pos", "neg"])

    rng = np.random.default_rng(20160602)
    centers = [np.array([0, 0, 0, 0, 0, 0.]),
               np.array([1.2, 0, 1.2, 0, 1.2, 0.]),
               np.array([0, 1.2, 0, 1.2, 0, 1.2])]
    X, y = blobs(rng, 60, centers, 1.0)
    write("three_class_fixture.csv", X, y, ["a", "b", "c"])


if __name__ == "__main__":
    main()
