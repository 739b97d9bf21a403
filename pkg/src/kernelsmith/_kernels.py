"""Hot numeric kernels, each in two variants.

``*_loops`` versions are explicit-loop implementations compiled with numba
when it is importable; ``*_numpy`` versions are vectorized fallbacks. The
public names bind to the loop variants when :data:`NUMBA_ENABLED` is true,
else to the numpy ones. Both variants of a kernel accumulate in the same
column order so results agree to float rounding; benchmarks/bench_kernels.py
times the pairs against each other.
"""
from __future__ import annotations

import math

import numpy as np

from ._accel import NUMBA_AVAILABLE, NUMBA_ENABLED, njit

# ---------------------------------------------------------------------------
# Gower distance matrix


def gower_numpy(num: np.ndarray, inv_range: np.ndarray, cat: np.ndarray) -> np.ndarray:
    n = num.shape[0] if num.size else cat.shape[0]
    out = np.zeros((n, n))
    for p in range(num.shape[1]):
        col = num[:, p]
        out += np.abs(col[:, None] - col[None, :]) * inv_range[p]
    for q in range(cat.shape[1]):
        col = cat[:, q]
        out += (col[:, None] != col[None, :]).astype(np.float64)
    return out


def _gower_loops(num, inv_range, cat):
    n = num.shape[0] if num.shape[1] > 0 else cat.shape[0]
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            s = 0.0
            for p in range(num.shape[1]):
                s += abs(num[i, p] - num[j, p]) * inv_range[p]
            for q in range(cat.shape[1]):
                if cat[i, q] != cat[j, q]:
                    s += 1.0
            out[i, j] = s
            out[j, i] = s
    return out


# ---------------------------------------------------------------------------
# PAM swap scan: best (medoid position, candidate) exchange


def pam_best_swap_numpy(dist, medoids, dn, ds, nearest_pos):
    n = dist.shape[0]
    is_medoid = np.zeros(n, dtype=bool)
    is_medoid[medoids] = True
    best_delta = 0.0
    best_pos = -1
    best_h = -1
    for pos in range(medoids.shape[0]):
        mine = nearest_pos == pos
        gain_mine = np.minimum(dist[mine], ds[mine, None]) - dn[mine, None]
        gain_rest = np.minimum(dist[~mine] - dn[~mine, None], 0.0)
        delta = gain_mine.sum(axis=0) + gain_rest.sum(axis=0)
        delta[is_medoid] = np.inf
        h = int(np.argmin(delta))
        if delta[h] < best_delta - 1e-12:
            best_delta = float(delta[h])
            best_pos = pos
            best_h = h
    return best_delta, best_pos, best_h


def _pam_best_swap_loops(dist, medoids, dn, ds, nearest_pos):
    n = dist.shape[0]
    k = medoids.shape[0]
    is_medoid = np.zeros(n, dtype=np.bool_)
    for p in range(k):
        is_medoid[medoids[p]] = True
    best_delta = 0.0
    best_pos = -1
    best_h = -1
    for pos in range(k):
        for h in range(n):
            if is_medoid[h]:
                continue
            delta = 0.0
            for j in range(n):
                d_jh = dist[j, h]
                if nearest_pos[j] == pos:
                    alt = d_jh if d_jh < ds[j] else ds[j]
                    delta += alt - dn[j]
                elif d_jh < dn[j]:
                    delta += d_jh - dn[j]
            if delta < best_delta - 1e-12:
                best_delta = delta
                best_pos = pos
                best_h = h
    return best_delta, best_pos, best_h


# ---------------------------------------------------------------------------
# One DDA training epoch over preallocated unit arrays


def dda_epoch_numpy(
    X, y, centers, sigma2, classes, weights, n_units,
    theta_plus, shrink_scale, default_sigma2, sigma2_floor,
):
    n = X.shape[0]
    changed = 0
    for i in range(n):
        x = X[i]
        c = y[i]
        u = n_units
        if u > 0:
            diff = centers[:u] - x
            d2 = np.einsum("ij,ij->i", diff, diff)
            same = classes[:u] == c
            act = np.exp(-d2[same] / sigma2[:u][same]) if same.any() else np.empty(0)
        else:
            d2 = np.empty(0)
            same = np.empty(0, dtype=bool)
            act = np.empty(0)
        if act.size and act.max() >= theta_plus:
            same_idx = np.flatnonzero(same)
            weights[same_idx[int(np.argmax(act))]] += 1
        else:
            if u > 0 and (~same).any():
                init = float((d2[~same] * shrink_scale).min())
            else:
                init = default_sigma2
            new_sigma2 = max(init, sigma2_floor)
            centers[u] = x
            sigma2[u] = new_sigma2
            classes[u] = c
            weights[u] = 1
            n_units += 1
            changed = 1
        u = n_units
        conflict = np.flatnonzero(classes[:u] != c)
        if conflict.size:
            diff = centers[conflict] - x
            lim = np.einsum("ij,ij->i", diff, diff) * shrink_scale
            lim = np.maximum(lim, sigma2_floor)
            shrink = lim < sigma2[conflict]
            if shrink.any():
                sigma2[conflict[shrink]] = lim[shrink]
                changed = 1
    return n_units, changed


def _dda_epoch_loops(
    X, y, centers, sigma2, classes, weights, n_units,
    theta_plus, shrink_scale, default_sigma2, sigma2_floor,
):
    n = X.shape[0]
    m = X.shape[1]
    changed = 0
    d2 = np.zeros(centers.shape[0])
    for i in range(n):
        c = y[i]
        best_act = -1.0
        best_j = -1
        for j in range(n_units):
            s = 0.0
            for p in range(m):
                diff = centers[j, p] - X[i, p]
                s += diff * diff
            d2[j] = s
            if classes[j] == c:
                act = math.exp(-s / sigma2[j])
                if act > best_act:
                    best_act = act
                    best_j = j
        if best_j >= 0 and best_act >= theta_plus:
            weights[best_j] += 1
        else:
            init = np.inf
            for j in range(n_units):
                if classes[j] != c:
                    lim = d2[j] * shrink_scale
                    if lim < init:
                        init = lim
            if init == np.inf:
                init = default_sigma2
            if init < sigma2_floor:
                init = sigma2_floor
            u = n_units
            for p in range(m):
                centers[u, p] = X[i, p]
            sigma2[u] = init
            classes[u] = c
            weights[u] = 1
            n_units += 1
            changed = 1
            d2[u] = 0.0
        for j in range(n_units):
            if classes[j] != c:
                lim = d2[j] * shrink_scale
                if lim < sigma2_floor:
                    lim = sigma2_floor
                if lim < sigma2[j]:
                    sigma2[j] = lim
                    changed = 1
    return n_units, changed


# ---------------------------------------------------------------------------
# Random-forest node split search (Gini impurity, midpoint thresholds)


def best_split_numpy(X, y, rows, feats, n_classes):
    n = rows.shape[0]
    best_feat = -1
    best_thr = 0.0
    best_child = np.inf
    ys = y[rows]
    for f in feats:
        vals = X[rows, f]
        order = np.argsort(vals, kind="stable")
        sv = vals[order]
        sy = ys[order]
        onehot = np.zeros((n, n_classes))
        onehot[np.arange(n), sy] = 1.0
        left = np.cumsum(onehot, axis=0)
        total = left[-1]
        boundary = np.flatnonzero(sv[:-1] < sv[1:])
        if boundary.size == 0:
            continue
        nl = boundary + 1.0
        nr = n - nl
        lc = left[boundary]
        rc = total - lc
        gini_l = 1.0 - np.sum((lc / nl[:, None]) ** 2, axis=1)
        gini_r = 1.0 - np.sum((rc / nr[:, None]) ** 2, axis=1)
        child = (nl * gini_l + nr * gini_r) / n
        b = int(np.argmin(child))
        if child[b] < best_child - 1e-12:
            best_child = float(child[b])
            best_feat = int(f)
            best_thr = float((sv[boundary[b]] + sv[boundary[b] + 1]) / 2.0)
    return best_feat, best_thr, best_child


def _best_split_loops(X, y, rows, feats, n_classes):
    n = rows.shape[0]
    best_feat = -1
    best_thr = 0.0
    best_child = np.inf
    counts_left = np.zeros(n_classes)
    counts_right = np.zeros(n_classes)
    vals = np.zeros(n)
    for fi in range(feats.shape[0]):
        f = feats[fi]
        for r in range(n):
            vals[r] = X[rows[r], f]
        order = np.argsort(vals, kind="mergesort")
        for c in range(n_classes):
            counts_left[c] = 0.0
            counts_right[c] = 0.0
        for r in range(n):
            counts_right[y[rows[r]]] += 1.0
        for pos in range(n - 1):
            cls = y[rows[order[pos]]]
            counts_left[cls] += 1.0
            counts_right[cls] -= 1.0
            v_here = vals[order[pos]]
            v_next = vals[order[pos + 1]]
            if v_here >= v_next:
                continue
            nl = pos + 1.0
            nr = n - nl
            sl = 0.0
            sr = 0.0
            for c in range(n_classes):
                sl += counts_left[c] * counts_left[c]
                sr += counts_right[c] * counts_right[c]
            gini_l = 1.0 - sl / (nl * nl)
            gini_r = 1.0 - sr / (nr * nr)
            child = (nl * gini_l + nr * gini_r) / n
            if child < best_child - 1e-12:
                best_child = child
                best_feat = f
                best_thr = (v_here + v_next) / 2.0
    return best_feat, best_thr, best_child


# ---------------------------------------------------------------------------
# Path binding

if NUMBA_AVAILABLE:
    gower_loops = njit(_gower_loops)
    pam_best_swap_loops = njit(_pam_best_swap_loops)
    dda_epoch_loops = njit(_dda_epoch_loops)
    best_split_loops = njit(_best_split_loops)
else:
    gower_loops = _gower_loops
    pam_best_swap_loops = _pam_best_swap_loops
    dda_epoch_loops = _dda_epoch_loops
    best_split_loops = _best_split_loops

if NUMBA_ENABLED:
    gower_matrix = gower_loops
    pam_best_swap = pam_best_swap_loops
    dda_epoch = dda_epoch_loops
    best_split = best_split_loops
else:
    gower_matrix = gower_numpy
    pam_best_swap = pam_best_swap_numpy
    dda_epoch = dda_epoch_numpy
    best_split = best_split_numpy
