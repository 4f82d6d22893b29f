"""Numpy implementations of the hot kernels.

These are the reference fallbacks for ``_ckernels``; both modules expose the
same functions with identical results.
"""
import numpy as np


def cycle_labels(perm):
    """Label every point with the smallest index on its cycle."""
    p = np.asarray(perm, dtype=np.int64)
    labels = np.arange(p.shape[0], dtype=np.int64)
    jump = p.copy()
    # pointer doubling: after k rounds labels[i] = min over 2**k orbit steps
    span = 1
    while span < p.shape[0]:
        labels = np.minimum(labels, labels[jump])
        jump = jump[jump]
        span *= 2
    return labels


def _all_images(p):
    masks = np.arange(1 << p.shape[0], dtype=np.int64)
    img = np.zeros_like(masks)
    for i, target in enumerate(p):
        img |= ((masks >> i) & 1) << int(target)
    return masks, img


def _weight_table(weights):
    w = np.asarray(weights, dtype=np.int64)
    masks = np.arange(1 << w.shape[0], dtype=np.int64)
    table = np.zeros_like(masks)
    for i, wi in enumerate(w):
        table += ((masks >> i) & 1) * wi
    return table


def max_sym_diff(perm, weights):
    """Max over all atom subsets S of weight(S xor perm(S))."""
    p = np.asarray(perm, dtype=np.int64)
    masks, img = _all_images(p)
    return int(_weight_table(weights)[masks ^ img].max())


def max_tower(perm, n, weights):
    """Heaviest subset whose first n iterates are pairwise disjoint.

    Returns ``(weight, mask)``; among maximisers the smallest mask wins.
    """
    p = np.asarray(perm, dtype=np.int64)
    masks, img = _all_images(p)
    ok = np.ones(masks.shape[0], dtype=bool)
    union = masks.copy()
    cur = masks
    for _ in range(1, n):
        cur = img[cur]
        ok &= (union & cur) == 0
        union |= cur
    table = _weight_table(weights)
    cand = np.where(ok, table, -1)
    best = int(cand.max())
    if best <= 0:
        return 0, 0
    return best, int(np.flatnonzero(cand == best)[0])
