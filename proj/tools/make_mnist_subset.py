#!/usr/bin/env python3
# Copyright 2026 The HQRN Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Write a class-balanced MNIST subset in IDX format.

Source: the 5000-image MNIST sample bundled with the mlxtend wheel
(500 images per digit, sorted by label). Images are interleaved by class so
that any prefix of the output is balanced. The first 400 per class go to the
train files, the last 100 per class to the t10k files.

    pip download --no-deps -d /tmp/wheels mlxtend
    python3 tools/make_mnist_subset.py /tmp/wheels/mlxtend-*.whl data/mnist
"""
import argparse
import gzip
import io
import struct
import zipfile
from pathlib import Path

import numpy as np


def write_idx_images(path, images):
    with open(path, "wb") as f:
        f.write(struct.pack(">IIII", 0x00000803, len(images), 28, 28))
        f.write(images.astype(np.uint8).tobytes())


def write_idx_labels(path, labels):
    with open(path, "wb") as f:
        f.write(struct.pack(">II", 0x00000801, len(labels)))
        f.write(labels.astype(np.uint8).tobytes())


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("wheel")
    ap.add_argument("out_dir")
    args = ap.parse_args()

    with zipfile.ZipFile(args.wheel) as z:
        raw = gzip.decompress(z.read("mlxtend/data/data/mnist_5k.csv.gz"))
    table = np.loadtxt(io.BytesIO(raw), delimiter=",")
    pixels, labels = table[:, :-1], table[:, -1].astype(int)

    by_class = [np.flatnonzero(labels == c) for c in range(10)]
    train_idx = [by_class[c][i] for i in range(400) for c in range(10)]
    test_idx = [by_class[c][i] for i in range(400, 500) for c in range(10)]

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_idx_images(out / "train-images-idx3-ubyte", pixels[train_idx])
    write_idx_labels(out / "train-labels-idx1-ubyte", labels[train_idx])
    write_idx_images(out / "t10k-images-idx3-ubyte", pixels[test_idx])
    write_idx_labels(out / "t10k-labels-idx1-ubyte", labels[test_idx])


if __name__ == "__main__":
    main()
