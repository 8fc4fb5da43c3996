#!/usr/bin/env python3
"""Builds the offline datasets under data/.

MNIST: the npm package `mnist` (v1.1.0) bundles 10000 real MNIST digits as
JSON arrays of pixel/255 rounded to three decimals. round(x * 255) recovers
the original bytes exactly. The digits are shuffled with a fixed seed and
written as gzip IDX files: 8000 training and 2000 held-out images.

WDBC: exported from scikit-learn's bundled copy of the UCI file, with the
diagnosis as the first column (1 = malignant, 0 = benign).

Usage: make_datasets.py <path-to-npm-mnist-package> <output-dir>
"""
import gzip
import json
import os
import random
import struct
import sys


def write_idx_images(path, images):
    with gzip.GzipFile(path, "wb", mtime=0) as f:
        f.write(struct.pack(">IIII", 0x00000803, len(images), 28, 28))
        for img in images:
            f.write(bytes(img))


def write_idx_labels(path, labels):
    with gzip.GzipFile(path, "wb", mtime=0) as f:
        f.write(struct.pack(">II", 0x00000801, len(labels)))
        f.write(bytes(labels))


def build_mnist(pkg, out):
    samples = []
    for digit in range(10):
        with open(os.path.join(pkg, "src", "digits", f"{digit}.json")) as f:
            flat = json.load(f)["data"]
        assert len(flat) % 784 == 0
        for i in range(0, len(flat), 784):
            px = [int(round(v * 255)) for v in flat[i:i + 784]]
            assert all(0 <= p <= 255 for p in px)
            samples.append((px, digit))
    assert len(samples) == 10000, len(samples)
    random.Random(20190101).shuffle(samples)
    train, test = samples[:8000], samples[8000:]
    os.makedirs(out, exist_ok=True)
    for name, part in (("train", train), ("test", test)):
        write_idx_images(os.path.join(out, f"mnist-{name}-images-idx3-ubyte.gz"),
                         [s[0] for s in part])
        write_idx_labels(os.path.join(out, f"mnist-{name}-labels-idx1-ubyte.gz"),
                         [s[1] for s in part])


def build_wdbc(out):
    from sklearn.datasets import load_breast_cancer
    ds = load_breast_cancer()
    names = [n.replace(" ", "_") for n in ds.feature_names]
    with open(os.path.join(out, "wdbc.csv"), "w") as f:
        f.write("diagnosis," + ",".join(names) + "\n")
        for row, target in zip(ds.data, ds.target):
            malignant = 1 if target == 0 else 0
            f.write(str(malignant) + "," + ",".join(repr(float(v)) for v in row) + "\n")


if __name__ == "__main__":
    if len(sys.argv) != 3:
        sys.exit(__doc__)
    build_mnist(sys.argv[1], sys.argv[2])
    build_wdbc(sys.argv[2])
