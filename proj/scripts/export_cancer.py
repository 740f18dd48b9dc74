#!/usr/bin/env python3
"""Export the scikit-learn breast-cancer table to data/uci/cancer.csv.

The benchmark ingests plain CSVs with a `label` column; this is the one UCI
table that ships inside scikit-learn, so it can be produced offline. The
other tables (credit, news, tennis) must be downloaded from the UCI
repository and exported to the same shape by hand.
"""

import csv
import pathlib
import sys

try:
    from sklearn.datasets import load_breast_cancer
except ImportError:
    sys.exit("scikit-learn is required: pip install scikit-learn")


def main() -> None:
    out_dir = pathlib.Path(__file__).resolve().parent.parent / "data" / "uci"
    out_dir.mkdir(parents=True, exist_ok=True)
    out_path = out_dir / "cancer.csv"

    bunch = load_breast_cancer()
    names = [n.replace(" ", "_") for n in bunch.feature_names]
    with out_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(names + ["label"])
        for row, target in zip(bunch.data, bunch.target):
            writer.writerow([repr(float(v)) for v in row] + [int(target)])
    print(f"wrote {out_path} ({len(bunch.target)} rows, {len(names)} features)")


if __name__ == "__main__":
    main()
