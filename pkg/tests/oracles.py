"""Independent reference implementations the tests check the library against.

Everything here is deliberately written the straightforward way (direct
two-pass statistics, full materialization, exhaustive enumeration) and stays
free of the library's computational shortcuts.
"""

import math

import numpy as np


def oracle_znorm(window):
    window = np.asarray(window, dtype=float)
    sd = window.std()
    if sd < 1e-10:
        return np.zeros(window.size)
    return (window - window.mean()) / sd


def oracle_min_dist(cand_norm, series_values):
    """No-abandon reference: normalize every window directly, take the min."""
    length = len(cand_norm)
    best = np.inf
    for p in range(len(series_values) - length + 1):
        wn = oracle_znorm(series_values[p:p + length])
        best = min(best, float(((wn - cand_norm) ** 2).sum()))
    return best


def oracle_entropy(weights):
    total = sum(weights)
    return -sum((w / total) * math.log2(w / total) for w in weights if w > 0)


def oracle_gain(entries, threshold):
    """Direct gain of splitting (distance, label, weight) entries at threshold."""
    left = {}
    right = {}
    for d, label, w in entries:
        side = left if d <= threshold else right
        side[label] = side.get(label, 0.0) + w
    all_w = {}
    for d, label, w in entries:
        all_w[label] = all_w.get(label, 0.0) + w
    total = sum(all_w.values())
    wl = sum(left.values())
    wr = sum(right.values())
    h = oracle_entropy(all_w.values())
    hl = oracle_entropy(left.values()) if left else 0.0
    hr = oracle_entropy(right.values()) if right else 0.0
    return h - (wl * hl + wr * hr) / total


def oracle_thresholds(entries):
    dists = sorted({d for d, _, _ in entries})
    return [0.5 * (a + b) for a, b in zip(dists, dists[1:])]


def oracle_max_gain(entries):
    thresholds = oracle_thresholds(entries)
    if not thresholds:
        return 0.0
    return max(oracle_gain(entries, t) for t in thresholds)


def oracle_best_split(entries):
    """(gain, split, margin) with the larger-margin / smaller-threshold tie rules."""
    entries = sorted(entries, key=lambda e: e[0])
    dists = sorted({d for d, _, _ in entries})
    if len(dists) < 2:
        return 0.0, entries[0][0], 0.0
    totals = {}
    for d, label, w in entries:
        totals[label] = totals.get(label, 0.0) + w
    total_w = sum(totals.values())
    h_parent = oracle_entropy(totals.values())
    best = None
    for lo, hi in zip(dists, dists[1:]):
        theta = 0.5 * (lo + hi)
        left = {}
        wl = 0.0
        for d, label, w in entries:
            if d <= theta:
                left[label] = left.get(label, 0.0) + w
                wl += w
        wr = total_w - wl
        hl = oracle_entropy(left.values()) if left else 0.0
        right = {c: totals[c] - left.get(c, 0.0) for c in totals}
        right = {c: w for c, w in right.items() if w > 1e-15}
        hr = oracle_entropy(right.values()) if right else 0.0
        gain = max(0.0, h_parent - (wl * hl + wr * hr) / total_w)
        key = (gain, hi - lo, -theta)
        if best is None or key > best[0]:
            best = (key, gain, theta, hi - lo)
    return best[1], best[2], best[3]


def oracle_bound(entries, remaining_items, n_middle_samples=25, rng=None):
    """Max gain over exhaustive per-instance end placements of the remaining
    instances, plus sampled arbitrary-position placements."""
    placements = [(d, l, w) for d, l, w in entries]
    rem = list(remaining_items)
    dists = [d for d, _, _ in entries]
    lo, hi = min(dists), max(dists)
    best = 0.0
    n = len(rem)
    for mask in range(1 << n):
        placed = list(placements)
        low_step = 0
        high_step = 0
        for b, (label, w) in enumerate(rem):
            if (mask >> b) & 1:
                high_step += 1
                placed.append((hi + high_step, label, w))
            else:
                low_step += 1
                placed.append((lo - low_step, label, w))
        best = max(best, oracle_max_gain(placed))
    if rng is not None:
        span = hi - lo if hi > lo else 1.0
        for _ in range(n_middle_samples):
            placed = list(placements)
            for label, w in rem:
                placed.append((float(rng.uniform(lo - span, hi + span)), label, w))
            best = max(best, oracle_max_gain(placed))
    return best


def oracle_search_all(data, min_len, max_len):
    """Brute force over every candidate: {source: (gain, theta, margin)}."""
    results = {}
    for length in range(max_len, min_len - 1, -1):
        for inst in range(len(data)):
            series = data.instances[inst].values
            for pos in range(data.series_length - length + 1):
                cand = oracle_znorm(series[pos:pos + length])
                entries = [
                    (oracle_min_dist(cand, ts.values), ts.label, float(w))
                    for ts, w in zip(data.instances, data.weights)
                ]
                gain, theta, margin = oracle_best_split(entries)
                results[(inst, pos, length)] = (gain, theta, margin)
    return results


def oracle_search(data, min_len, max_len):
    """Best candidate under the incumbent rule (first strictly-better wins)."""
    results = oracle_search_all(data, min_len, max_len)
    best_key = None
    best = None
    for source, (gain, theta, margin) in results.items():
        key = (gain, margin, -theta)
        if best_key is None or key > best_key:
            best_key = key
            best = (gain, theta, source)
    return best


def brute_force_candidate_count(k, m, min_len, max_len):
    count = 0
    for length in range(min_len, max_len + 1):
        for _ in range(k):
            for _ in range(m - length + 1):
                count += 1
    return count
