"""Plot a sweep CSV produced by `covertcap bound`.

Convenience script, not part of the library (needs matplotlib).

Usage:
    covertcap bound --channel bsc --eps-rx 0.1 --eps-dx 0.3 --output sweep.csv
    python docs/plot_sweep.py sweep.csv sweep.png
"""

import csv
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def main(csv_path, png_path):
    rows = []
    with open(csv_path, newline="") as fh:
        for row in csv.DictReader(line for line in fh if not line.startswith("#")):
            rows.append({k: float(v) for k, v in row.items()})
    n = [r["n"] for r in rows]
    rate = [r["rate"] for r in rows]
    asym = [r["asymptotic_rate"] for r in rows]

    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.loglog(n, rate, "-", label="achievable rate")
    ax.loglog(n, asym, "--", label="asymptotic rate")
    if "n_min" in rows[0]:
        ax.axvline(rows[0]["n_min"], ls="-.", color="gray", label="n_min")
    ax.set_xlabel("blocklength n")
    ax.set_ylabel("rate (bits/channel use)")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(png_path, dpi=150)
    print(f"wrote {png_path}")


if __name__ == "__main__":
    if len(sys.argv) != 3:
        sys.exit(__doc__)
    main(sys.argv[1], sys.argv[2])
