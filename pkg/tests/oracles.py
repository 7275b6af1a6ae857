"""Independent reference implementations used as test oracles.

Deliberately naive: double loops and brute-force scans, kept free of any
code path they are used to check.
"""

import numpy as np


def brute_circ_convolve(a, b):
    """O(d^2) circular convolution: out_k = sum_j a_j * b_((k-j) mod d)."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    d = a.shape[0]
    out = np.zeros(d)
    for k in range(d):
        for j in range(d):
            out[k] += a[j] * b[(k - j) % d]
    return out


def brute_circ_correlate(a, b):
    """O(d^2) circular correlation: out_k = sum_j b_j * a_((j+k) mod d)."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    d = a.shape[0]
    out = np.zeros(d)
    for k in range(d):
        for j in range(d):
            out[k] += b[j] * a[(j + k) % d]
    return out


def central_diff(func, x0, step=1e-5):
    """Entrywise central finite differences of a scalar function."""
    x0 = np.asarray(x0, dtype=np.float64)
    grad = np.zeros_like(x0)
    flat_grad = grad.reshape(-1)
    x = x0.copy()
    flat_x = x.reshape(-1)
    for i in range(flat_x.size):
        keep = flat_x[i]
        flat_x[i] = keep + step
        hi = func(x)
        flat_x[i] = keep - step
        lo = func(x)
        flat_x[i] = keep
        flat_grad[i] = (hi - lo) / (2.0 * step)
    return grad


def nearest_mean_feature_oracle(train_x, train_y, queries):
    """Classify by smallest Euclidean distance to the class mean in feature space."""
    classes = np.unique(train_y)
    means = np.stack([train_x[train_y == c].mean(axis=0) for c in classes])
    out = np.empty(queries.shape[0], dtype=classes.dtype)
    for i, q in enumerate(queries):
        out[i] = classes[np.argmin(np.sum((means - q) ** 2, axis=1))]
    return out


def nearest_mean_embedding_oracle(weights, train_x, train_y, queries):
    """Classify by smallest Euclidean distance to the class mean after the linear map."""
    classes = np.unique(train_y)
    means = np.stack([(weights @ train_x[train_y == c].mean(axis=0)) for c in classes])
    out = np.empty(queries.shape[0], dtype=classes.dtype)
    for i, q in enumerate(queries):
        z = weights @ q
        out[i] = classes[np.argmin(np.sum((means - z) ** 2, axis=1))]
    return out


def cosine_oracle(u, v):
    """Plain dot-product cosine, no clipping or validation."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    return float(u @ v / (np.linalg.norm(u) * np.linalg.norm(v)))
