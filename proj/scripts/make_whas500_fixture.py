#!/usr/bin/env python3
"""Regenerate data/whas500.csv.

The file is a synthetic surrogate for the WHAS500 heart-attack cohort,
matched to the published summary statistics (N = 500, 14 covariates,
215 observed deaths, follow-up 1..2358 days) rather than copied from the
real patient records, which are not redistributed here. Column x1 hits
its published mean exactly (integer columns are adjusted to an exact
target sum); the remaining moments are matched approximately. Durations
carry a genuine proportional-hazards signal so that fitted models have
real discriminative power on the file.

Deterministic: a fixed seed always reproduces the committed CSV.
"""

import numpy as np

N = 500
SEED = 20260818
OUT = "data/whas500.csv"

# column, mean, sd, min, max for the six numeric covariates (x5 is a
# skewed length-of-stay style count, the rest are roughly normal)
NUMERIC = [
    ("x1", 69.846, 14.491, 30, 104),
    ("x2", 26.614, 5.406, 13.045, 44.839),
    ("x3", 78.266, 21.545, 6, 198),
    ("x4", 87.018, 23.586, 35, 186),
    ("x5", 6.116, 4.714, 0, 47),
    ("x6", 144.704, 32.295, 57, 244),
]

# column, number of ones out of 500
BINARY = [
    ("x7", 78),    # 0.156
    ("x8", 375),   # 0.750
    ("x9", 200),   # 0.400
    ("x10", 39),   # 0.078
    ("x11", 22),   # 0.044
    ("x12", 11),   # 0.022
    ("x13", 147),  # 0.294
    ("x14", 157),  # 0.314
]

EVENTS = 215
Y_MAX = 2358
Y_MEAN = 882.436

# hazard weights on standardized covariates; spread across columns so
# that replacing any few of them visibly degrades a fitted model
BETA = np.array([
    0.50, -0.25, -0.12, 0.35, 0.10, -0.30,
    0.18, 0.10, 0.08, 0.12, 0.15, 0.05, 0.20, -0.15,
])

# correlations for (x1, x2, x3, x4, x5-latent, x6): blood pressures move
# together, body mass drifts down with age, the rest are weak
CORR = np.array([
    [1.00, -0.30, -0.05, 0.10, 0.05, 0.15],
    [-0.30, 1.00, 0.10, -0.05, 0.00, 0.05],
    [-0.05, 0.10, 1.00, 0.05, 0.00, 0.60],
    [0.10, -0.05, 0.05, 1.00, 0.10, -0.05],
    [0.05, 0.00, 0.00, 0.10, 1.00, 0.05],
    [0.15, 0.05, 0.60, -0.05, 0.05, 1.00],
])


def fix_sum(x, target, lo, hi, keep, rng):
    """Nudge random entries by +-1 until the column sums to target."""
    free = np.array([i for i in range(N) if i not in keep])
    deficit = target - int(x.sum())
    while deficit != 0:
        i = free[rng.integers(len(free))]
        if deficit > 0 and x[i] < hi:
            x[i] += 1
            deficit -= 1
        elif deficit < 0 and x[i] > lo:
            x[i] -= 1
            deficit += 1
    return x


def main():
    rng = np.random.default_rng(SEED)
    chol = np.linalg.cholesky(CORR)
    z = rng.standard_normal((N, 6)) @ chol.T

    cols = {}

    # x5: lognormal latent for a right-skewed stay count
    los = np.exp(1.60 + 0.68 * z[:, 4])
    # draw sigmas sit above the targets to offset clipping and rounding
    raw = {
        "x1": 69.846 + 15.2 * z[:, 0],
        "x2": 26.614 + 5.406 * z[:, 1],
        "x3": 78.266 + 21.45 * z[:, 2],
        "x4": 87.018 + 23.65 * z[:, 3],
        "x5": los,
        "x6": 144.704 + 33.9 * z[:, 5],
    }

    for name, mean, sd, lo, hi in NUMERIC:
        if name == "x2":
            x = raw[name]
            x = mean + sd * (x - x.mean()) / x.std(ddof=1)
            x = np.clip(x, lo, hi)
            i_lo, i_hi = int(np.argmin(x)), int(np.argmax(x))
            x[i_lo], x[i_hi] = lo, hi
            cols[name] = x
            continue
        x = np.clip(np.rint(raw[name]), lo, hi).astype(np.int64)
        i_lo, i_hi = int(np.argmin(x)), int(np.argmax(x))
        x[i_lo], x[i_hi] = lo, hi
        target = round(mean * N)
        assert abs(target - mean * N) < 1e-9, name
        cols[name] = fix_sum(x, target, lo, hi, {i_lo, i_hi}, rng)

    for name, ones in BINARY:
        flags = np.zeros(N, dtype=np.int64)
        flags[:ones] = 1
        cols[name] = rng.permutation(flags)

    X = np.column_stack([cols[n] for n, *_ in NUMERIC] +
                        [cols[n] for n, _ in BINARY]).astype(float)
    Xs = (X - X.mean(axis=0)) / X.std(axis=0)
    eta = Xs @ BETA

    # exponential event times under the hazard, independent censoring;
    # the censor scale is placed between order statistics so exactly
    # EVENTS subjects are observed
    t_event = -np.log(1.0 - rng.uniform(size=N)) * np.exp(-eta)
    censor_unit = -np.log(1.0 - rng.uniform(size=N))
    thresholds = np.sort(t_event / censor_unit)
    c0 = 0.5 * (thresholds[EVENTS - 1] + thresholds[EVENTS])
    event = (t_event <= c0 * censor_unit).astype(np.int64)
    assert int(event.sum()) == EVENTS
    y = np.minimum(t_event, c0 * censor_unit)

    # map ranks through a power-law quantile so the follow-up column has
    # the published location and spread; monotone, so the risk ordering
    # and the event flags are untouched
    ranks = np.empty(N, dtype=np.int64)
    ranks[np.argsort(y, kind="stable")] = np.arange(N)
    u = (ranks + 1) / N

    def mean_at(a):
        return float((Y_MAX * u**a).mean())

    lo_a, hi_a = 0.2, 8.0
    for _ in range(200):
        mid = 0.5 * (lo_a + hi_a)
        if mean_at(mid) > Y_MEAN:
            lo_a = mid
        else:
            hi_a = mid
    y_days = np.clip(np.rint(Y_MAX * u ** (0.5 * (lo_a + hi_a))), 1, Y_MAX)
    y_days = y_days.astype(np.int64)
    y_days[int(np.argmin(y_days))] = 1

    names = [n for n, *_ in NUMERIC] + [n for n, _ in BINARY]
    with open(OUT, "w") as f:
        f.write(",".join(names + ["time", "event"]) + "\n")
        for i in range(N):
            row = []
            for j, n in enumerate(names):
                v = X[i, j]
                row.append(f"{v:.5f}" if n == "x2" else str(int(v)))
            row += [str(int(y_days[i])), str(int(event[i]))]
            f.write(",".join(row) + "\n")

    print(f"wrote {OUT}")
    for j, (name, mean, sd, lo, hi) in enumerate(NUMERIC):
        c = X[:, j]
        print(f"{name}: mean {c.mean():.4f} (target {mean})  "
              f"sd {c.std(ddof=1):.3f} (target {sd})  "
              f"range [{c.min():g}, {c.max():g}] (target [{lo}, {hi}])")
    for j, (name, ones) in enumerate(BINARY):
        print(f"{name}: ones {int(X[:, 6 + j].sum())} (target {ones})")
    print(f"time: mean {y_days.mean():.3f} (target {Y_MEAN})  "
          f"sd {y_days.std(ddof=1):.3f} (target 705.665)  "
          f"range [{y_days.min()}, {y_days.max()}]")
    print(f"events: {int(event.sum())} / {N}")

    order = np.argsort(-y_days, kind="stable")
    conc = disc = 0
    for a in range(N):
        for b in range(N):
            if y_days[a] < y_days[b] and event[a] == 1:
                if eta[a] > eta[b]:
                    conc += 1
                elif eta[a] < eta[b]:
                    disc += 1
    _ = order
    print(f"true-signal c-index: {conc / (conc + disc):.4f}")


if __name__ == "__main__":
    main()
