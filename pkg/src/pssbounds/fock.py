"""Brute-force Fock-basis description of symmetric photon-subtracted states.

A k-photon-subtracted twin beam has the Schmidt form

    |psi_k> = sum_{n >= k} c_n |n-k, n-k>,
    c_n = z^(n-k) C(n, k) sqrt[(1-z^2)^(2k+1) / 2F1(-k, -k; 1; z^2)],

with effective squeezing ``z = tanh r``. Everything here works directly on
these coefficients and serves as the exact reference for the second-moment
bounds in :mod:`pssbounds.bounds`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from scipy.special import gammaln

from .specfun import log_hyp2f1_int

__all__ = [
    "DegenerateStateError",
    "TruncationError",
    "PssPure",
    "SchmidtSpectrum",
    "TruncatedBipartiteState",
    "schmidt_coefficient",
    "schmidt_spectrum",
    "normalization",
    "exact_entanglement",
    "logneg_closed",
    "logneg_series",
    "moment_normally_ordered",
    "build_mixed_density",
    "logneg_mixed_oracle",
]

DEFAULT_TAIL_TOL = 1e-14
DEFAULT_MAX_TERMS = 10**6
DEFAULT_ORDER_CAP = 12


class DegenerateStateError(ValueError):
    """Photon subtraction from the vacuum (k > 0 at z = 0) has zero probability."""


class TruncationError(RuntimeError):
    """A Fock-space truncation could not be certified within the allowed size."""


@dataclass(frozen=True)
class PssPure:
    """Pure state with ``k`` photons subtracted per beam at effective squeezing ``z``."""

    k: int
    z: float

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 0:
            raise ValueError(f"k must be a nonnegative integer, got {self.k!r}")
        if not (0.0 <= self.z < 1.0):
            raise ValueError(f"z must lie in [0, 1), got {self.z!r}")
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "z", float(self.z))

    @classmethod
    def from_r(cls, k, r):
        return cls(k, math.tanh(r))

    @property
    def r(self):
        return math.atanh(self.z)


def _log_prefactor(k, z):
    # log sqrt[(1-z^2)^(2k+1) / 2F1(-k,-k;1;z^2)]
    log_f, _ = log_hyp2f1_int(-k, -k, 1, z * z)
    return 0.5 * ((2 * k + 1) * math.log1p(-z * z) - log_f)


def schmidt_coefficient(state: PssPure, n: int) -> float:
    """Schmidt coefficient ``c_n`` of ``|psi_k>`` on ``|n-k, n-k>``."""
    k, z = state.k, state.z
    if n < k:
        raise ValueError(f"Schmidt index n={n} must be >= k={k}")
    if z == 0.0:
        return 1.0 if n == k else 0.0
    log_c = (n - k) * math.log(z) + _log_binom_exact(n, k) + _log_prefactor(k, z)
    return math.exp(log_c)


def _log_binom_column(m, k):
    """ln C(m + k, k) for an array of m; a product of k ratios keeps small k exact to a few ulps."""
    if k <= 64:
        out = np.zeros_like(m)
        for i in range(1, k + 1):
            out += np.log1p(m / i)
        return out
    return gammaln(m + k + 1) - gammaln(float(k) + 1) - gammaln(m + 1)


def _log_binom_exact(n, k):
    if n <= 1000:
        return math.log(math.comb(n, k))
    return float(gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1))


@dataclass(frozen=True)
class SchmidtSpectrum:
    """Leading Schmidt coefficients of a pure PSS plus a certified tail bound.

    ``truncation_bound`` majorizes the discarded probability
    ``sum_{n > n*} c_n^2``; ``tail_ratio`` is the geometric ratio used for it.
    """

    k: int
    z: float
    coefficients: np.ndarray = field(repr=False)
    truncation_bound: float
    tail_ratio: float

    @property
    def probabilities(self):
        return self.coefficients**2

    def entropy(self):
        p = self.probabilities
        p = p[p > 0.0]
        return float(-np.sum(p * np.log(p)))

    def entropy_tail_bound(self):
        """Upper bound on the entropy carried by the discarded tail."""
        if self.truncation_bound == 0.0:
            return 0.0
        p_last = float(self.coefficients[-1] ** 2)
        rho = self.tail_ratio
        s1 = p_last * rho / (1.0 - rho)
        s2 = p_last * rho / (1.0 - rho) ** 2
        return -math.log(p_last) * s1 - math.log(rho) * s2


def schmidt_spectrum(state: PssPure, tail_tol=DEFAULT_TAIL_TOL, max_terms=DEFAULT_MAX_TERMS):
    """Schmidt coefficients through the first index with a certified tail.

    For ``n`` past the peak the squared-coefficient ratio
    ``z^2 ((n+1)/(n+1-k))^2`` decreases monotonically, so
    ``c_n^2 rho_n / (1 - rho_n)`` bounds everything after ``n``.
    """
    if not (0.0 < tail_tol < 1.0):
        raise ValueError(f"tail_tol must lie in (0, 1), got {tail_tol}")
    k, z = state.k, state.z
    if z == 0.0:
        return SchmidtSpectrum(k, z, np.ones(1), 0.0, 0.0)

    log_z = math.log(z)
    prefactor = _log_prefactor(k, z)
    z2 = z * z
    start = 0
    block = 256
    chunks = []
    while start < max_terms:
        stop = min(start + block, max_terms)
        m = np.arange(start, stop, dtype=float)  # m = n - k
        n = m + k
        log_c = m * log_z + _log_binom_column(m, k) + prefactor
        c = np.exp(log_c)
        rho = z2 * ((n + 1.0) / (m + 1.0)) ** 2
        with np.errstate(divide="ignore"):
            tail = np.where(rho < 1.0, c * c * rho / (1.0 - rho), np.inf)
        hit = np.flatnonzero(tail <= tail_tol)
        if hit.size:
            last = hit[0]
            chunks.append(c[: last + 1])
            coeffs = np.concatenate(chunks)
            return SchmidtSpectrum(k, z, coeffs, float(tail[last]), float(rho[last]))
        chunks.append(c)
        start = stop
        block *= 2
    raise TruncationError(
        f"Schmidt tail for k={k}, z={z} not below {tail_tol} within {max_terms} terms"
    )


def normalization(state: PssPure) -> float:
    """Success-probability normalization ``<psi_0| a1^dag^k a2^dag^k a1^k a2^k |psi_0>``.

    Closed form ``k!^2 2F1(k+1, k+1; 1; z^2) (1 - z^2) z^(2k)``.
    """
    k, z = state.k, state.z
    if z == 0.0:
        if k > 0:
            raise DegenerateStateError("normalization vanishes for k > 0 at z = 0")
        return 1.0
    log_f, _ = log_hyp2f1_int(k + 1, k + 1, 1, z * z)
    log_n = 2.0 * math.lgamma(k + 1) + log_f + math.log1p(-z * z) + 2 * k * math.log(z)
    return math.exp(log_n)


def exact_entanglement(state: PssPure, tail_tol=DEFAULT_TAIL_TOL) -> float:
    """Entropy of entanglement -sum c_n^2 ln c_n^2, in nats."""
    return schmidt_spectrum(state, tail_tol).entropy()


def logneg_closed(state: PssPure) -> float:
    """Logarithmic negativity ``-ln[(1-z)^(2k+2) 2F1(k+1, k+1; 1; z^2)]``."""
    k, z = state.k, state.z
    log_f, _ = log_hyp2f1_int(k + 1, k + 1, 1, z * z)
    return -((2 * k + 2) * math.log1p(-z) + log_f)


def logneg_series(state: PssPure, tail_tol=1e-13) -> float:
    """Logarithmic negativity of a pure state from its Schmidt sum, ``2 ln sum c_n``."""
    spectrum = schmidt_spectrum(state, max(tail_tol * tail_tol, 1e-300))
    c = spectrum.coefficients
    total = float(np.sum(c))
    if spectrum.truncation_bound > 0.0:
        s = math.sqrt(spectrum.tail_ratio)
        total += float(c[-1]) * s / (1.0 - s)
    return 2.0 * math.log(total)


def moment_normally_ordered(r, i, j, l, m, order_cap=DEFAULT_ORDER_CAP) -> float:
    """Normally ordered twin-beam moment ``<a1^dag^j a1^i a2^dag^m a2^l>``.

    Obtained by expanding the normally ordered characteristic function
    ``exp{s[c(x1 x2 + y1 y2) - s(x1 y1 + x2 y2)]}`` (``s = sinh r``,
    ``c = cosh r``, ``x -> alpha``, ``y -> alpha*``) and reading off the
    coefficient of ``x1^i y1^j x2^l y2^m``.
    """
    for name, value in (("i", i), ("j", j), ("l", l), ("m", m)):
        if int(value) != value or value < 0:
            raise ValueError(f"{name} must be a nonnegative integer, got {value!r}")
    order = i + j + l + m
    if order > order_cap:
        raise ValueError(f"moment order {order} exceeds cap {order_cap}")
    if i - j != l - m:
        return 0.0
    s, c = math.sinh(r), math.cosh(r)
    pair = s * c  # coefficient of x1 x2 and y1 y2
    local = -s * s  # coefficient of x1 y1 and x2 y2
    scale = math.factorial(i) * math.factorial(j) * math.factorial(l) * math.factorial(m)
    total = 0.0
    # u = power of x1 y1; then x1 x2 -> i-u, y1 y2 -> j-u, x2 y2 -> l-i+u
    for u in range(max(0, i - l), min(i, j) + 1):
        p, q, v = i - u, j - u, l - i + u
        weight = Fraction(scale, math.factorial(p) * math.factorial(q) * math.factorial(u) * math.factorial(v))
        total += float(weight) * pair ** (p + q) * local ** (u + v)
    return (-1) ** (j + m) * total


@dataclass(frozen=True)
class TruncatedBipartiteState:
    """Density matrix supported on the Schmidt-correlated kets ``|n, n>``.

    ``matrix[a, b]`` is the coefficient of ``|a, a><b, b|``; the full state
    lives on ``dimension**2`` basis vectors ``|i, j>`` but only this block is
    ever nonzero.
    """

    dimension: int
    matrix: np.ndarray = field(repr=False)

    def trace(self):
        return float(np.trace(self.matrix))

    def purity(self):
        return float(np.sum(self.matrix * self.matrix.T))

    def to_dense(self):
        """Full ``dim^2 x dim^2`` matrix in the ``|i, j>`` basis (row index ``i*dim + j``)."""
        d = self.dimension
        dense = np.zeros((d * d, d * d))
        diag = np.arange(d) * (d + 1)
        dense[np.ix_(diag, diag)] = self.matrix
        return dense


def build_mixed_density(
    states: Iterable[tuple[float, PssPure]],
    dim: int | None = None,
    tail_tol=DEFAULT_TAIL_TOL,
) -> TruncatedBipartiteState:
    """Truncated density matrix of the mixture ``sum_k p_k |psi_k><psi_k|``.

    ``dim`` defaults to the smallest size holding every component's Schmidt
    spectrum certified at ``tail_tol**2`` in probability, so the discarded
    amplitude sum, which controls the trace norm, is of order ``tail_tol``.
    """
    states = [(float(p), s) for p, s in states]
    if not states:
        raise ValueError("empty mixture")
    weights = np.array([p for p, _ in states])
    if np.any(weights < 0.0) or abs(weights.sum() - 1.0) > 1e-12:
        raise ValueError(f"weights must be nonnegative and sum to 1, got {weights.tolist()}")
    zs = {s.z for _, s in states}
    if len(zs) != 1:
        raise ValueError(f"all components must share z, got {sorted(zs)}")
    for p, s in states:
        if p > 0.0 and s.k > 0 and s.z == 0.0:
            raise DegenerateStateError(f"component k={s.k} is undefined at z = 0")

    sq_tol = max(tail_tol * tail_tol, 1e-300)
    spectra = [(p, schmidt_spectrum(s, sq_tol)) for p, s in states if p > 0.0]
    if dim is None:
        dim = max(sp.coefficients.size for _, sp in spectra)
    dim = int(dim)
    rho = np.zeros((dim, dim))
    for p, sp in spectra:
        d = np.zeros(dim)
        n = min(dim, sp.coefficients.size)
        d[:n] = sp.coefficients[:n]
        rho += p * np.outer(d, d)
    deficit = 1.0 - float(np.trace(rho))
    if deficit > 1e-6:
        raise TruncationError(f"dimension {dim} loses trace {deficit:.3e} (> 1e-6)")
    return TruncatedBipartiteState(dim, rho)


def logneg_mixed_oracle(rho: TruncatedBipartiteState) -> float:
    """Logarithmic negativity ``ln ||rho^T2||_1`` of a Schmidt-correlated state.

    Partial transposition sends ``|a,a><b,b|`` to ``|a,b><b,a|``: the diagonal
    stays put and each off-diagonal pair ``a != b`` forms a 2x2 block
    ``[[0, R_ab], [R_ab, 0]]`` on ``{|a,b>, |b,a>}`` with eigenvalues
    ``+-|R_ab|``.
    """
    r = np.asarray(rho.matrix)
    if r.shape != (rho.dimension, rho.dimension):
        raise ValueError("density block has the wrong shape")
    if not np.allclose(r, r.T, atol=1e-12):
        raise ValueError("density matrix is not symmetric")
    if abs(np.trace(r) - 1.0) > 1e-6:
        raise ValueError(f"density matrix trace {np.trace(r)} is not 1")
    if np.linalg.eigvalsh(r).min() < -1e-10:
        raise ValueError("density matrix is not positive semidefinite")
    diagonal = np.abs(np.diag(r)).sum()
    upper = np.abs(np.triu(r, 1)).sum()
    return float(math.log(diagonal + 2.0 * upper))


def mixture_from_weights(weights: Sequence[tuple[int, float]], z: float):
    """``[(p_k, PssPure(k, z)), ...]`` from ``[(k, p_k), ...]``."""
    return [(p, PssPure(k, z)) for k, p in weights]
