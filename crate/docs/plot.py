#!/usr/bin/env python3
"""Plot profiles written by `sgmix run`.

Usage:
    python3 docs/plot.py OUT_DIR [--fields p,u,theta,alpha1] [--save fig.png]

Reads OUT_DIR/final.csv, or the newest snapshot when the run failed, and
draws one panel per field. Needs numpy and matplotlib.
"""

import argparse
import glob
import os
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

LABELS = {
    "rho1": r"$\rho_1$", "rho2": r"$\rho_2$", "rho": r"$\rho$", "y1": r"$y_1$",
    "alpha1": r"$\alpha_1$", "alpha2": r"$\alpha_2$", "p": r"$p$", "u": r"$u$",
    "theta": r"$\theta$", "cs": r"$c_s$",
}


def pick_file(out_dir):
    final = os.path.join(out_dir, "final.csv")
    if os.path.exists(final):
        return final
    snaps = sorted(glob.glob(os.path.join(out_dir, "snapshot_*.csv")))
    if not snaps:
        sys.exit(f"no final.csv or snapshots in {out_dir}")
    return snaps[-1]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("out_dir")
    ap.add_argument("--fields", default="rho,p,u,theta,alpha1,y1")
    ap.add_argument("--save", default=None, help="image path (default OUT_DIR/profiles.png)")
    args = ap.parse_args()

    path = pick_file(args.out_dir)
    data = np.genfromtxt(path, delimiter=",", names=True)
    fields = [f for f in args.fields.split(",") if f]
    unknown = [f for f in fields if f not in data.dtype.names]
    if unknown:
        sys.exit(f"unknown fields {unknown}; columns are {data.dtype.names}")

    ncol = min(3, len(fields))
    nrow = (len(fields) + ncol - 1) // ncol
    fig, axes = plt.subplots(nrow, ncol, figsize=(4.2 * ncol, 3.2 * nrow), squeeze=False)
    for ax, f in zip(axes.flat, fields):
        ax.plot(data["x"], data[f], lw=1.2)
        ax.set_xlabel(r"$x$")
        ax.set_ylabel(LABELS.get(f, f))
        ax.grid(alpha=0.3)
    for ax in list(axes.flat)[len(fields):]:
        ax.axis("off")
    fig.suptitle(path)
    fig.tight_layout()
    out = args.save or os.path.join(args.out_dir, "profiles.png")
    fig.savefig(out, dpi=130)
    print(out)


if __name__ == "__main__":
    main()
