"""Special functions used by the photon-subtracted state formulas.

Gauss hypergeometric functions only appear with integer parameters and
``c = 1`` (or ``c = 2``), so every evaluation is reduced to a terminating
polynomial, either directly or through the Euler transformation

    2F1(a, b; c; x) = (1 - x)**(c - a - b) * 2F1(c - a, c - b; c; x).

The log-space variants exist because the polynomials overflow doubles for
large photon numbers (``k`` in the hundreds).
"""

from __future__ import annotations

import math
import operator
from fractions import Fraction

import numpy as np
from scipy.special import gammaln

__all__ = [
    "hyp2f1_int",
    "hyp2f1_int_exact",
    "log_hyp2f1_int",
    "binom",
    "log_binom",
    "g_ef",
    "entropy_kernel",
]

# largest log-magnitude of a polynomial term for which plain float summation is used
_FLOAT_SAFE_LOG = 600.0


def _as_int(value, name):
    try:
        return operator.index(value)
    except TypeError:
        if isinstance(value, float) and value.is_integer():
            return int(value)
        raise ValueError(f"{name} must be an integer, got {value!r}") from None


def _check_args(a, b, c, x):
    a, b, c = _as_int(a, "a"), _as_int(b, "b"), _as_int(c, "c")
    if c < 1:
        raise ValueError(f"c must be a positive integer, got {c}")
    x = float(x)
    if not (0.0 <= x < 1.0):
        raise ValueError(f"argument must lie in [0, 1), got {x}")
    return a, b, c, x


def _terminating_terms(a, b, c, x):
    """Log-magnitudes and signs of the terms of a terminating 2F1 series."""
    degree = min(-p for p in (a, b) if p <= 0)
    if degree == 0 or x == 0.0:
        return np.zeros(1), np.ones(1)
    j = np.arange(degree, dtype=float)
    num = (a + j) * (b + j)
    den = (c + j) * (j + 1.0)
    ratio_log = np.log(np.abs(num)) - np.log(den) + math.log(x)
    logs = np.concatenate(([0.0], np.cumsum(ratio_log)))
    signs = np.concatenate(([1.0], np.cumprod(np.sign(num))))
    return logs, signs


def _poly_float(a, b, c, x, logs):
    total = 1.0
    term = 1.0
    for j in range(len(logs) - 1):
        term *= (a + j) * (b + j) / ((c + j) * (j + 1)) * x
        total += term
    return total


def _polynomial(a, b, c, x):
    """(log|F|, sign, float value or None) of a terminating series."""
    logs, signs = _terminating_terms(a, b, c, x)
    if logs.max() < _FLOAT_SAFE_LOG:
        total = _poly_float(a, b, c, x, logs)
        if total == 0.0:
            return -math.inf, 0.0, 0.0
        return math.log(abs(total)), math.copysign(1.0, total), total
    top = float(logs.max())
    total = float(np.sum(signs * np.exp(logs - top)))
    if total == 0.0:
        return -math.inf, 0.0, None
    return top + math.log(abs(total)), math.copysign(1.0, total), None


def _evaluate(a, b, c, x):
    a, b, c, x = _check_args(a, b, c, x)
    if a <= 0 or b <= 0:
        return _polynomial(a, b, c, x)
    if c - a <= 0 or c - b <= 0:
        log_val, sign, value = _polynomial(c - a, c - b, c, x)
        exponent = c - a - b
        log_val += exponent * math.log1p(-x)
        if value is not None:
            try:
                value *= (1.0 - x) ** exponent
            except OverflowError:
                value = None
            if value is not None and not math.isfinite(value):
                value = None
        return log_val, sign, value
    raise ValueError(
        f"2F1({a}, {b}; {c}; x) has no terminating representation; "
        "only polynomial and Euler-terminating cases are supported"
    )


def log_hyp2f1_int(a, b, c, x):
    """Return ``(log|2F1(a, b; c; x)|, sign)`` for integer parameters.

    Raises ValueError when no terminating representation exists (both
    ``a, b > 0`` and both ``c - a, c - b > 0``) or when ``x`` is outside
    ``[0, 1)``.
    """
    log_val, sign, _ = _evaluate(a, b, c, x)
    return log_val, sign


def hyp2f1_int(a, b, c, x):
    """Gauss hypergeometric function 2F1(a, b; c; x) for integer a, b, c.

    Parameters
    ----------
    a, b : int
        Upper parameters.
    c : int
        Lower parameter, ``c >= 1``.
    x : float
        Argument in ``[0, 1)``.

    Returns
    -------
    float
        The function value. Overflows to ``inf`` for very large parameters;
        use :func:`log_hyp2f1_int` in that regime.
    """
    log_val, sign, value = _evaluate(a, b, c, x)
    if value is not None:
        return value
    if log_val >= 709.0:
        return sign * math.inf
    return sign * math.exp(log_val)


def _poly_exact(a, b, c, x):
    degree = min(-p for p in (a, b) if p <= 0)
    coeffs = [Fraction(1)]
    for j in range(degree):
        coeffs.append(coeffs[-1] * Fraction((a + j) * (b + j), (c + j) * (j + 1)))
    scale = math.lcm(*(f.denominator for f in coeffs))
    ints = [f.numerator * (scale // f.denominator) for f in coeffs]
    # homogeneous Horner in x = p/q keeps everything in integers until the final division
    p, q = x.numerator, x.denominator
    acc = ints[-1]
    qpow = 1
    for coef in reversed(ints[:-1]):
        qpow *= q
        acc = acc * p + coef * qpow
    return Fraction(acc, scale * qpow)


def hyp2f1_int_exact(a, b, c, x):
    """Exact rational value of 2F1(a, b; c; x) for rational ``x`` in ``[0, 1)``.

    Floats are converted exactly (``Fraction(0.3)`` is the binary value of
    0.3). Intended for the cancellation-prone combinations of covariance
    matrix elements, where the result is rounded to a double only once.
    """
    a, b, c = _as_int(a, "a"), _as_int(b, "b"), _as_int(c, "c")
    if c < 1:
        raise ValueError(f"c must be a positive integer, got {c}")
    x = Fraction(x)
    if not (0 <= x < 1):
        raise ValueError(f"argument must lie in [0, 1), got {x}")
    if a <= 0 or b <= 0:
        return _poly_exact(a, b, c, x)
    if c - a <= 0 or c - b <= 0:
        return (1 - x) ** (c - a - b) * _poly_exact(c - a, c - b, c, x)
    raise ValueError(
        f"2F1({a}, {b}; {c}; x) has no terminating representation; "
        "only polynomial and Euler-terminating cases are supported"
    )


def log_binom(n, k):
    """Natural log of the binomial coefficient C(n, k) for real ``n >= k >= 0``."""
    return float(gammaln(n + 1.0) - gammaln(k + 1.0) - gammaln(n - k + 1.0))


def binom(n, k):
    """Binomial coefficient as a float.

    Exact integer arithmetic rounded once to a double whenever the result is
    representable; otherwise ``exp(log_binom)`` (which overflows to ``inf``).
    """
    n, k = _as_int(n, "n"), _as_int(k, "k")
    if k < 0 or k > n:
        return 0.0
    try:
        return float(math.comb(n, k))
    except OverflowError:
        return math.inf


def _entropy_pair(u, w):
    # u*ln(u) - w*ln(w) with w = u - 1 supplied by the caller (no cancellation in w)
    if w <= 0.0:
        return u * math.log(u) if u > 0.0 else 0.0
    if u > 2.0:
        return math.log(u) - w * math.log1p(-1.0 / u)
    return u * math.log(u) - w * math.log(w)


def g_ef(x):
    """Entanglement-of-formation kernel of a symmetric Gaussian state, in nats.

    ``g(x) = A ln A - B ln B`` with ``A = (1+x)^2 / 4x`` and
    ``B = (1-x)^2 / 4x``. Symmetric under ``x -> 1/x`` and zero at ``x = 1``.
    """
    x = float(x)
    if not x > 0.0:
        raise ValueError(f"g_ef requires x > 0, got {x}")
    if x > 1.0:
        x = 1.0 / x
    u = (1.0 + x) ** 2 / (4.0 * x)
    w = (1.0 - x) ** 2 / (4.0 * x)
    return _entropy_pair(u, w)


def entropy_kernel(nu, tol=1e-12):
    """Von Neumann entropy contribution h(nu) of one symplectic eigenvalue.

    ``nu`` slightly below 1 (within ``tol``) is treated as 1.
    """
    nu = float(nu)
    if nu < 1.0 - tol:
        raise ValueError(f"symplectic eigenvalue must be >= 1, got {nu}")
    if nu <= 1.0:
        return 0.0
    return _entropy_pair((nu + 1.0) / 2.0, (nu - 1.0) / 2.0)
