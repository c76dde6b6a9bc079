"""Regenerate the bundled dataset files.

WDBC, wine and iris are converted from the copies shipped inside
scikit-learn (originally from the UCI repository). Balance scale is the
full factorial design, enumerated in UCI file order.
"""
import csv
import os
from pathlib import Path

from sklearn import datasets

HERE = Path(__file__).resolve().parent


def clean(name):
    return name.replace(" (cm)", "").strip().replace(" ", "_").replace("/", "_")


def write_sklearn(name, bunch, target_name, labels):
    features = [clean(f) for f in bunch.feature_names]
    with open(HERE / f"{name}.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(features + [target_name])
        for row, y in zip(bunch.data, bunch.target):
            w.writerow([repr(float(v)) for v in row] + [labels[y]])
    with open(HERE / f"{name}.schema", "w") as fh:
        fh.write(f"target {target_name} {' '.join(labels)}\n")
        for f in features:
            fh.write(f"feature {f} continuous\n")


def write_balance():
    names = ["left_weight", "left_distance", "right_weight", "right_distance"]
    with open(HERE / "balance-scale.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["class"] + names)
        r = range(1, 6)
        for lw in r:
            for ld in r:
                for rw in r:
                    for rd in r:
                        left, right = lw * ld, rw * rd
                        label = "L" if left > right else ("R" if left < right else "B")
                        w.writerow([label, lw, ld, rw, rd])
    with open(HERE / "balance-scale.schema", "w") as fh:
        fh.write("target class L B R\n")
        for n in names:
            fh.write(f"feature {n} categorical 1 2 3 4 5\n")


if __name__ == "__main__":
    write_sklearn("wdbc", datasets.load_breast_cancer(), "diagnosis", ["malignant", "benign"])
    write_sklearn("wine", datasets.load_wine(), "cultivar", ["wine_1", "wine_2", "wine_3"])
    write_sklearn("iris", datasets.load_iris(), "species",
                  ["iris_setosa", "iris_versicolor", "iris_virginica"])
    write_balance()
