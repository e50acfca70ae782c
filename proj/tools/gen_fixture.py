#!/usr/bin/env python3
"""Generate the bundled 16-seller coalition-accuracy fixture.

Writes <out>/table.csv (coalition,accuracy for all 2^16 coalitions) and
<out>/catalog.csv (id,price,volume). Prices are placeholders (uniform, sum 1);
experiments re-price the catalog.
"""
import argparse
import pathlib

import numpy as np

N = 16
A_STAR = 0.896294


def shapley(acc):
    """Exact Shapley values of the raw table (monotone up to measurement noise)."""
    size = np.array([bin(m).count("1") for m in range(1 << N)])
    fact = [1.0]
    for k in range(1, N + 1):
        fact.append(fact[-1] * k)
    weight = np.array([fact[k] * fact[N - k - 1] / fact[N] for k in range(N)])
    phi = np.zeros(N)
    masks = np.arange(1 << N)
    for i in range(N):
        without = masks[(masks >> i) & 1 == 0]
        phi[i] = np.sum(weight[size[without]] * (acc[without | (1 << i)] - acc[without]))
    return phi


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="data/fixture16")
    ap.add_argument("--seed", type=int, default=20240516)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)

    importance = rng.lognormal(mean=0.0, sigma=0.8, size=N)
    importance /= importance.sum()
    # Volume tracks importance only loosely.
    volume = importance * rng.lognormal(mean=0.0, sigma=0.8, size=N)
    volume = np.round(volume / volume.max() * 1000.0, 1)

    pairs = [(0, 5), (3, 11), (7, 14)]
    bonus = 0.04

    masks = np.arange(1 << N, dtype=np.int64)
    bits = ((masks[:, None] >> np.arange(N)) & 1).astype(float)
    mass = bits @ importance
    acc = (1.0 - np.exp(-4.0 * mass)) / (1.0 - np.exp(-4.0))
    for i, j in pairs:
        acc += bonus * bits[:, i] * bits[:, j]
    acc /= acc[-1]
    acc *= A_STAR
    noise = rng.normal(0.0, 0.01, size=acc.shape)
    noise[0] = 0.0
    noise[-1] = 0.0
    acc = np.clip(acc + noise, 0.0, A_STAR)
    acc[0] = 0.0
    acc[-1] = A_STAR

    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "table.csv", "w", newline="\n") as f:
        f.write("coalition,accuracy\n")
        for m, a in zip(masks, acc):
            f.write(f"{m},{a:.6f}\n")
    with open(out / "catalog.csv", "w", newline="\n") as f:
        f.write("id,price,volume\n")
        for i in range(N):
            f.write(f"{i},{1.0 / N!r},{float(volume[i])!r}\n")

    phi = shapley(acc)
    r = np.corrcoef(phi, volume)[0, 1]
    print(f"shapley/volume R^2 = {r * r:.3f}")


if __name__ == "__main__":
    main()
