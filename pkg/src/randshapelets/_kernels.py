"""Numba kernels for the shapelet search hot path.

Everything here operates on flat float64/int64 arrays so the whole search —
candidate sweep, incremental order line, gain-bound pruning, best-split — runs
jitted. The public modules wrap these with the object-level API. Keep the
arithmetic order stable: distances accumulate left to right, entropies sum in
class-index order; the pruning-equivalence guarantees rely on every code path
producing bit-identical floats.
"""

from __future__ import annotations

import numpy as np
from numba import njit

# Windows with population std below this are treated as constant and
# z-normalize to all zeros.
SIGMA_FLOOR = 1e-10


@njit(cache=True, nogil=True)
def _window_mean_std(cum_sum, cum_sq, start, length):
    s = cum_sum[start + length] - cum_sum[start]
    mean = s / length
    if length == 1:
        # a single point has no deviation; the cumulative differences would
        # only contribute cancellation noise here
        return mean, 0.0
    sq = cum_sq[start + length] - cum_sq[start]
    var = sq / length - mean * mean
    if var < 0.0:
        var = 0.0
    return mean, np.sqrt(var)


@njit(cache=True, nogil=True)
def _min_sq_dist(values, cum_sum, cum_sq, cand, cand_sq_sum):
    """Min z-normalized squared distance from ``cand`` to all windows of one series.

    Each window's accumulation abandons as soon as the partial sum exceeds the
    running minimum; the result equals the no-abandon computation exactly.
    Returns (distance, number of abandoned windows).
    """
    m = values.shape[0]
    length = cand.shape[0]
    best = np.inf
    n_abandoned = 0
    for p in range(m - length + 1):
        mean, sigma = _window_mean_std(cum_sum, cum_sq, p, length)
        if sigma < SIGMA_FLOOR:
            # constant window normalizes to zeros
            if cand_sq_sum < best:
                best = cand_sq_sum
            continue
        inv = 1.0 / sigma
        total = 0.0
        abandoned = False
        for j in range(length):
            diff = (values[p + j] - mean) * inv - cand[j]
            total += diff * diff
            if total > best:
                abandoned = True
                break
        if abandoned:
            n_abandoned += 1
        elif total < best:
            best = total
    return best, n_abandoned


@njit(cache=True, nogil=True)
def _sweep_best_gain(dists, labels, weights, n, n_classes, totals, left):
    """Best information-gain split of a distance-sorted line prefix.

    Thresholds sit at midpoints between consecutive distinct distances. Ties
    on gain prefer the larger margin, then the smaller threshold. For a line
    with no distinct boundary (or a single entry) the gain is 0 with the first
    distance as a degenerate threshold. ``totals`` holds per-class weight
    sums of the full line; ``left`` is caller scratch of size n_classes.
    Returns (gain, split_distance, margin).
    """
    total_w = 0.0
    for c in range(n_classes):
        left[c] = 0.0
        total_w += totals[c]

    h_parent = 0.0
    for c in range(n_classes):
        w = totals[c]
        if w > 0.0:
            p = w / total_w
            h_parent -= p * np.log2(p)

    best_gain = -1.0
    best_margin = 0.0
    best_split = dists[0]
    found = False

    w_left = 0.0
    for i in range(n - 1):
        c = labels[i]
        left[c] += weights[i]
        w_left += weights[i]
        if dists[i + 1] <= dists[i]:
            continue
        w_right = total_w - w_left
        h_l = 0.0
        h_r = 0.0
        for c2 in range(n_classes):
            a = left[c2]
            if a > 0.0:
                pa = a / w_left
                h_l -= pa * np.log2(pa)
            b = totals[c2] - a
            if b > 0.0:
                pb = b / w_right
                h_r -= pb * np.log2(pb)
        gain = h_parent - (w_left * h_l + w_right * h_r) / total_w
        if gain < 0.0:
            gain = 0.0
        margin = dists[i + 1] - dists[i]
        split = 0.5 * (dists[i] + dists[i + 1])
        if (not found) or gain > best_gain or (
            gain == best_gain
            and (margin > best_margin or (margin == best_margin and split < best_split))
        ):
            found = True
            best_gain = gain
            best_margin = margin
            best_split = split

    if not found:
        return 0.0, dists[0], 0.0
    return best_gain, best_split, best_margin


@njit(cache=True, nogil=True)
def _best_split_sorted(dists, labels, weights, n, n_classes):
    totals = np.zeros(n_classes)
    for i in range(n):
        totals[labels[i]] += weights[i]
    left = np.empty(n_classes)
    return _sweep_best_gain(dists, labels, weights, n, n_classes, totals, left)


@njit(cache=True, nogil=True)
def _gain_bound_sorted(
    dists, labels, weights, n, remaining, n_classes, aug_d, aug_c, aug_w, totals, left
):
    """Admissible upper bound on the gain reachable by placing ``remaining``.

    Each class still holding weight is appended, en bloc, strictly below the
    line minimum or strictly above the maximum; with up to 12 such classes all
    2^C end assignments are evaluated, beyond that a single greedy assignment
    (each class to the end already holding more of its placed weight). The
    bound is the max best-split gain over the evaluated augmented lines.
    ``aug_*`` / ``totals`` / ``left`` are caller scratch.
    """
    active = np.empty(n_classes, dtype=np.int64)
    n_active = 0
    for c in range(n_classes):
        if remaining[c] > 0.0:
            active[n_active] = c
            n_active += 1

    if n == 0:
        return np.log2(n_active) if n_active > 1 else 0.0

    for c in range(n_classes):
        totals[c] = remaining[c]
    for i in range(n):
        totals[labels[i]] += weights[i]

    if n_active == 0:
        g, s, m = _sweep_best_gain(dists, labels, weights, n, n_classes, totals, left)
        return g

    d_lo = dists[0]
    d_hi = dists[n - 1]

    if n_active <= 12:
        n_assignments = 1 << n_active
    else:
        n_assignments = 1

    is_high = np.zeros(n_active, dtype=np.bool_)
    best = 0.0
    for mask in range(n_assignments):
        if n_active <= 12:
            for b in range(n_active):
                is_high[b] = ((mask >> b) & 1) == 1
        else:
            # greedy: each class to the end holding more of its placed weight
            half = n // 2
            for b in range(n_active):
                c = active[b]
                w_low_half = 0.0
                w_high_half = 0.0
                for i in range(n):
                    if labels[i] == c:
                        if i < half:
                            w_low_half += weights[i]
                        else:
                            w_high_half += weights[i]
                is_high[b] = w_high_half > w_low_half

        n_low = 0
        for b in range(n_active):
            if not is_high[b]:
                n_low += 1

        # low block, distinct ascending positions strictly below the minimum
        pos = 0
        low_seen = 0
        for b in range(n_active):
            if not is_high[b]:
                aug_d[pos] = d_lo - (n_low - low_seen)
                aug_c[pos] = active[b]
                aug_w[pos] = remaining[active[b]]
                pos += 1
                low_seen += 1
        for i in range(n):
            aug_d[pos] = dists[i]
            aug_c[pos] = labels[i]
            aug_w[pos] = weights[i]
            pos += 1
        high_seen = 0
        for b in range(n_active):
            if is_high[b]:
                high_seen += 1
                aug_d[pos] = d_hi + high_seen
                aug_c[pos] = active[b]
                aug_w[pos] = remaining[active[b]]
                pos += 1

        g, s, m = _sweep_best_gain(aug_d, aug_c, aug_w, pos, n_classes, totals, left)
        if g > best:
            best = g
    return best


@njit(cache=True, nogil=True)
def _entropy_weights(totals, n_classes):
    total_w = 0.0
    for c in range(n_classes):
        total_w += totals[c]
    h = 0.0
    for c in range(n_classes):
        w = totals[c]
        if w > 0.0:
            p = w / total_w
            h -= p * np.log2(p)
    return h


@njit(cache=True, nogil=True)
def _find_shapelet_kernel(
    X,
    cum_sums,
    cum_sqs,
    labels,
    weights,
    n_classes,
    min_len,
    max_len,
    ratio,
    uniforms,
    use_sampling,
    pruning,
):
    """Full candidate sweep: lengths descending, instances then positions ascending.

    In sampling mode one uniform is consumed per visited candidate and the
    candidate is evaluated iff it falls below ``ratio``. The incumbent is
    replaced only when the new candidate is strictly better under
    (gain, margin, -threshold) lexicographic order.

    Returns (found, src_instance, src_pos, src_len, gain, split_distance,
    margin, line distances in instance order, visited, evaluated, pruned,
    distance_abandons).
    """
    k, m = X.shape

    class_totals = np.zeros(n_classes)
    for i in range(k):
        class_totals[labels[i]] += weights[i]

    bsf_found = False
    bsf_gain = -np.inf
    bsf_margin = -np.inf
    bsf_split = np.inf
    bsf_inst = -1
    bsf_pos = -1
    bsf_len = -1
    bsf_line = np.zeros(k)

    visited = 0
    evaluated = 0
    pruned_count = 0
    abandons = 0

    cand = np.empty(max_len)
    sorted_d = np.empty(k)
    sorted_c = np.empty(k, dtype=np.int64)
    sorted_w = np.empty(k)
    inst_d = np.empty(k)
    remaining = np.empty(n_classes)
    aug_d = np.empty(k + n_classes)
    aug_c = np.empty(k + n_classes, dtype=np.int64)
    aug_w = np.empty(k + n_classes)
    totals_scratch = np.empty(n_classes)
    left_scratch = np.empty(n_classes)

    for length in range(max_len, min_len - 1, -1):
        n_pos = m - length + 1
        # per-window stats of this length, shared by candidates and targets
        mu = np.empty((k, n_pos))
        inv = np.empty((k, n_pos))
        degenerate = np.zeros((k, n_pos), dtype=np.bool_)
        for i in range(k):
            for p in range(n_pos):
                mean, sigma = _window_mean_std(cum_sums[i], cum_sqs[i], p, length)
                mu[i, p] = mean
                if sigma < SIGMA_FLOOR:
                    degenerate[i, p] = True
                    inv[i, p] = 0.0
                else:
                    inv[i, p] = 1.0 / sigma

        for src in range(k):
            for pos in range(n_pos):
                if use_sampling:
                    u = uniforms[visited]
                    visited += 1
                    if u >= ratio:
                        continue
                else:
                    visited += 1
                evaluated += 1

                cand_sq_sum = 0.0
                if degenerate[src, pos]:
                    for j in range(length):
                        cand[j] = 0.0
                else:
                    c_mu = mu[src, pos]
                    c_inv = inv[src, pos]
                    for j in range(length):
                        v = (X[src, pos + j] - c_mu) * c_inv
                        cand[j] = v
                        cand_sq_sum += v * v

                for c in range(n_classes):
                    remaining[c] = class_totals[c]

                n_placed = 0
                was_pruned = False
                for i in range(k):
                    # minimum distance over windows, early abandon at running min
                    best = np.inf
                    for p in range(n_pos):
                        if degenerate[i, p]:
                            if cand_sq_sum < best:
                                best = cand_sq_sum
                            continue
                        w_mu = mu[i, p]
                        w_inv = inv[i, p]
                        total = 0.0
                        abandoned = False
                        for j in range(length):
                            diff = (X[i, p + j] - w_mu) * w_inv - cand[j]
                            total += diff * diff
                            if total > best:
                                abandoned = True
                                break
                        if abandoned:
                            abandons += 1
                        elif total < best:
                            best = total

                    # insert into the sorted line (ties keep insertion order)
                    lo = 0
                    hi = n_placed
                    while lo < hi:
                        mid = (lo + hi) // 2
                        if best < sorted_d[mid]:
                            hi = mid
                        else:
                            lo = mid + 1
                    for t in range(n_placed, lo, -1):
                        sorted_d[t] = sorted_d[t - 1]
                        sorted_c[t] = sorted_c[t - 1]
                        sorted_w[t] = sorted_w[t - 1]
                    sorted_d[lo] = best
                    sorted_c[lo] = labels[i]
                    sorted_w[lo] = weights[i]
                    n_placed += 1
                    inst_d[i] = best

                    rem = remaining[labels[i]] - weights[i]
                    remaining[labels[i]] = rem if rem > 0.0 else 0.0

                    if pruning and bsf_gain > 0.0 and n_placed < k:
                        bound = _gain_bound_sorted(
                            sorted_d,
                            sorted_c,
                            sorted_w,
                            n_placed,
                            remaining,
                            n_classes,
                            aug_d,
                            aug_c,
                            aug_w,
                            totals_scratch,
                            left_scratch,
                        )
                        if bound < bsf_gain:
                            was_pruned = True
                            break

                if was_pruned:
                    pruned_count += 1
                    continue

                gain, split, margin = _best_split_sorted(
                    sorted_d, sorted_c, sorted_w, k, n_classes
                )
                if gain > bsf_gain or (
                    gain == bsf_gain
                    and (
                        margin > bsf_margin
                        or (margin == bsf_margin and split < bsf_split)
                    )
                ):
                    bsf_found = True
                    bsf_gain = gain
                    bsf_margin = margin
                    bsf_split = split
                    bsf_inst = src
                    bsf_pos = pos
                    bsf_len = length
                    for i in range(k):
                        bsf_line[i] = inst_d[i]

    return (
        bsf_found,
        bsf_inst,
        bsf_pos,
        bsf_len,
        bsf_gain,
        bsf_split,
        bsf_margin,
        bsf_line,
        visited,
        evaluated,
        pruned_count,
        abandons,
    )
