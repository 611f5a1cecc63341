"""Reference kernels (NumPy + plain loops).

Same signatures and summation order as the compiled ``_kernels`` module, so
the two agree to rounding.
"""

from __future__ import annotations

import numpy as np

__all__ = ["cos_mul_batch", "scan_exp_forward", "scan_exp_backward", "scan_rot_backward"]


def cos_mul_batch(a, b):
    """Row-wise cosine product of ``(n, P)`` and ``(n, Q)`` coefficient arrays
    (column index = harmonic); returns ``(n, P + Q - 1)``."""
    a = np.ascontiguousarray(a, dtype=np.float64)
    b = np.ascontiguousarray(b, dtype=np.float64)
    n, P = a.shape
    Q = b.shape[1]
    out = np.zeros((n, P + Q - 1))
    for p in range(P):
        ap = a[:, p]
        if not ap.any():
            continue
        for q in range(Q):
            bq = b[:, q]
            prod = 0.5 * ap * bq
            out[:, p + q] += prod
            out[:, abs(p - q)] += prod
    return out


def scan_exp_forward(f, decay: float, w0: float, w1: float, init: float):
    """``y[0] = init``, ``y[k+1] = decay*y[k] + w0*f[k] + w1*f[k+1]``."""
    f = np.asarray(f, dtype=np.float64)
    y = np.empty_like(f)
    acc = float(init)
    y[0] = acc
    for k in range(len(f) - 1):
        acc = decay * acc + (w0 * f[k] + w1 * f[k + 1])
        y[k + 1] = acc
    return y


def scan_exp_backward(f, decay: float, w0: float, w1: float, tail: float):
    """``y[N] = tail``, ``y[k] = decay*y[k+1] - (w0*f[k] + w1*f[k+1])``."""
    f = np.asarray(f, dtype=np.float64)
    y = np.empty_like(f)
    acc = float(tail)
    n = len(f)
    y[n - 1] = acc
    for k in range(n - 2, -1, -1):
        acc = decay * acc - (w0 * f[k] + w1 * f[k + 1])
        y[k] = acc
    return y


def scan_rot_backward(f, R, p0, p1, tail):
    """Backward 2x2 recurrences, one per block ``b``::

        W[b, N] = tail[b]
        W[b, k] = R[b] @ W[b, k+1] - (p0[b] f[b, k] + p1[b] f[b, k+1])

    ``f`` is ``(nb, n)``; returns ``(nb, n, 2)``.
    """
    f = np.asarray(f, dtype=np.float64)
    R = np.asarray(R, dtype=np.float64)
    p0 = np.asarray(p0, dtype=np.float64)
    p1 = np.asarray(p1, dtype=np.float64)
    nb, n = f.shape
    out = np.empty((nb, n, 2))
    for b in range(nb):
        r00, r01, r10, r11 = R[b, 0, 0], R[b, 0, 1], R[b, 1, 0], R[b, 1, 1]
        a0, a1 = p0[b, 0], p0[b, 1]
        c0, c1 = p1[b, 0], p1[b, 1]
        x, y = float(tail[b][0]), float(tail[b][1])
        fb = f[b]
        out[b, n - 1, 0] = x
        out[b, n - 1, 1] = y
        for k in range(n - 2, -1, -1):
            fk, fk1 = fb[k], fb[k + 1]
            nx = r00 * x + r01 * y - (a0 * fk + c0 * fk1)
            ny = r10 * x + r11 * y - (a1 * fk + c1 * fk1)
            x, y = nx, ny
            out[b, k, 0] = x
            out[b, k, 1] = y
    return out
