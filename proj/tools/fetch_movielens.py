#!/usr/bin/env python3
#
# Copyright 2026 The ItemField Authors.
# SPDX-License-Identifier: Apache-2.0
#
"""Fetch MovieLens 100K and rebuild the distributed u1..u5 folds.

The grouplens host is not always reachable, so the ratings are taken from the
RecBole wheel on PyPI, which ships the full u.data file in its original line
order. The five folds are then regenerated with the same procedure as the
mku.sh script distributed with the dataset: fold i tests on lines
[20000*(i-1), 20000*i) of u.data, trains on the rest, both sorted by
(user, item).
"""
import argparse
import glob
import os
import subprocess
import sys
import tempfile
import zipfile

WHEEL = "recbole==1.2.0"
MEMBER = "recbole/dataset_example/ml-100k/ml-100k.inter"


def fetch_udata(tmp):
    subprocess.check_call([sys.executable, "-m", "pip", "download", "--no-deps",
                           "--timeout", "120", "-q", "-d", tmp, WHEEL])
    whl = glob.glob(os.path.join(tmp, "recbole-*.whl"))[0]
    with zipfile.ZipFile(whl) as z:
        lines = z.read(MEMBER).decode("ascii").splitlines()
    return [l for l in lines[1:] if l.strip()]


def sort_key(line):
    u, i = line.split("\t")[:2]
    return int(u), int(i)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=os.path.join(os.path.dirname(__file__), "..", "data", "ml-100k"))
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        rows = fetch_udata(tmp)
    if len(rows) != 100000:
        sys.exit(f"expected 100000 ratings, got {len(rows)}")
    with open(os.path.join(args.out, "u.data"), "w") as f:
        f.write("\n".join(rows) + "\n")
    for i in range(1, 6):
        lo, hi = 20000 * (i - 1), 20000 * i
        test = sorted(rows[lo:hi], key=sort_key)
        base = sorted(rows[:lo] + rows[hi:], key=sort_key)
        with open(os.path.join(args.out, f"u{i}.test"), "w") as f:
            f.write("\n".join(test) + "\n")
        with open(os.path.join(args.out, f"u{i}.base"), "w") as f:
            f.write("\n".join(base) + "\n")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
