"""Arithmetic on nonnegative extended reals.

Operator seminorms and dual seminorms may be ``+inf``.  The conventions used
throughout the package are::

    0 / 0   = 0
    c / 0   = +inf      (c > 0)
    0 * inf = 0
    inf / inf = 1       (the inequality inf <= C * inf holds with C = 1)

Values are plain Python/numpy floats with ``math.inf`` standing in for
``+inf``.  The ``log_*`` variants operate on natural logarithms, where
``-inf`` encodes an exact zero.
"""

from __future__ import annotations

import math

import numpy as np

INF = math.inf


def div(a: float, b: float) -> float:
    if a == 0:
        return 0.0
    if b == 0:
        return INF
    if math.isinf(a) and math.isinf(b):
        return 1.0
    return a / b


def mul(a: float, b: float) -> float:
    if a == 0 or b == 0:
        return 0.0
    return a * b


def div_array(a, b):
    """Elementwise :func:`div` on numpy arrays."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    a, b = np.broadcast_arrays(a, b)
    out = np.zeros(a.shape)
    nz = a != 0
    zero_den = nz & (b == 0)
    both_inf = nz & np.isinf(a) & np.isinf(b)
    regular = nz & ~zero_den & ~both_inf
    with np.errstate(over="ignore"):
        out[regular] = a[regular] / b[regular]
    out[zero_den] = INF
    out[both_inf] = 1.0
    return out


def mul_array(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    a, b = np.broadcast_arrays(a, b)
    out = np.zeros(a.shape)
    nz = (a != 0) & (b != 0)
    with np.errstate(over="ignore"):
        out[nz] = a[nz] * b[nz]
    return out


def log_div(la, lb):
    """Log of ``div(exp(la), exp(lb))`` elementwise, honouring the conventions."""
    la = np.asarray(la, dtype=float)
    lb = np.asarray(lb, dtype=float)
    la, lb = np.broadcast_arrays(la, lb)
    out = np.full(la.shape, -INF)
    nz = la != -INF
    zero_den = nz & (lb == -INF)
    both_inf = nz & (la == INF) & (lb == INF)
    regular = nz & ~zero_den & ~both_inf
    out[regular] = la[regular] - lb[regular]
    out[zero_den] = INF
    out[both_inf] = 0.0
    return out


def log_mul(la, lb):
    """Log of a product; an exact zero factor wins over an infinite one."""
    la = np.asarray(la, dtype=float)
    lb = np.asarray(lb, dtype=float)
    la, lb = np.broadcast_arrays(la, lb)
    out = np.full(la.shape, -INF)
    nz = (la != -INF) & (lb != -INF)
    out[nz] = la[nz] + lb[nz]
    return out


def safe_log(values):
    values = np.asarray(values, dtype=float)
    with np.errstate(divide="ignore"):
        return np.log(values)


def safe_exp(logs):
    with np.errstate(over="ignore"):
        return np.exp(np.asarray(logs, dtype=float))
