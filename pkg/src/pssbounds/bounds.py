"""Second-moment entanglement bounds for pure and mixed photon-subtracted states.

All entropic quantities are in nats. The covariance matrix of ``|psi_k>`` is
that of a symmetric two-mode squeezed thermal state in standard form,
``a1 = a2 = a_k`` and ``gamma_x = -gamma_p = gamma_k``, and the bounds are

    lower: g(a_k - gamma_k)          (Gaussian state with the same CM)
    upper: ln(1 + 2 gamma_k)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from . import fock
from .gaussian import (
    StandardFormCM,
    gaussian_ef_symmetric,
    to_standard_form,
)
from .specfun import entropy_kernel, g_ef, hyp2f1_int_exact

__all__ = [
    "BoundsReport",
    "MixedPss",
    "cm_diagonal_element",
    "cm_cross_element",
    "epr_variance",
    "pss_standard_form",
    "pss_cm",
    "lower_bound",
    "upper_bound",
    "error_band",
    "delta_max",
    "symplectic_eigenvalue",
    "upsilon",
    "upsilon_max",
    "pure_bounds",
    "mixed_cm",
    "mixed_bounds",
    "bounds_from_standard_form",
    "convert_units",
]

LN2 = math.log(2.0)


def _check_kz(k, z):
    if int(k) != k or k < 0:
        raise ValueError(f"k must be a nonnegative integer, got {k!r}")
    z = float(z)
    if not (0.0 <= z < 1.0):
        raise ValueError(f"z must lie in [0, 1), got {z}")
    return int(k), z


@lru_cache(maxsize=4096)
def _cm_elements_exact(k, z):
    # exact rationals: the large Euler prefactors and the a - gamma difference cancel without rounding
    zq = Fraction(z)
    x = zq * zq
    cosh2 = 1 / (1 - x)
    sinh2 = x / (1 - x)
    f_norm = hyp2f1_int_exact(k + 1, k + 1, 1, x)
    bracket = 2 * (k + 1) ** 2 * sinh2 * hyp2f1_int_exact(-k, -k, 2, x) + hyp2f1_int_exact(-k, -k, 1, x)
    a = cosh2 ** (1 + 2 * k) / f_norm * bracket
    gamma = 2 * zq * (k + 1) * hyp2f1_int_exact(k + 1, k + 2, 1, x) / f_norm
    return a, gamma


def cm_diagonal_element(k, z):
    """Local variance ``a_k`` of either mode.

    ``cosh(r)^(2+4k) / 2F1(k+1,k+1;1;z^2) * [2(k+1)^2 sinh(r)^2 2F1(-k,-k;2;z^2)
    + 2F1(-k,-k;1;z^2)]``, evaluated exactly at the binary value of ``z``.
    """
    k, z = _check_kz(k, z)
    return float(_cm_elements_exact(k, z)[0])


def cm_cross_element(k, z):
    """Quadrature correlation ``gamma_k = 2z(k+1) 2F1(k+1,k+2;1;z^2) / 2F1(k+1,k+1;1;z^2)``."""
    k, z = _check_kz(k, z)
    return float(_cm_elements_exact(k, z)[1])


def epr_variance(k, z):
    """``a_k - gamma_k``, the variance of ``(q1 - q2)/sqrt(2)``, correctly rounded."""
    k, z = _check_kz(k, z)
    a, gamma = _cm_elements_exact(k, z)
    return float(a - gamma)


def pss_standard_form(k, z) -> StandardFormCM:
    a, g = cm_diagonal_element(k, z), cm_cross_element(k, z)
    return StandardFormCM(a, a, g, -g)


def pss_cm(k, z):
    """4x4 covariance matrix of ``|psi_k>``; already in standard form."""
    return pss_standard_form(k, z).matrix()


def lower_bound(k, z):
    """Entanglement of formation of the Gaussian state sharing the CM of ``|psi_k>``.

    Same value as ``gaussian_ef_symmetric(pss_standard_form(k, z))`` but with
    ``a_k - gamma_k`` taken from the exact difference rather than two rounded
    doubles; the two agree to rounding for moderate squeezing.
    """
    x = epr_variance(k, z)
    return 0.0 if x >= 1.0 else g_ef(x)


def upper_bound(k, z):
    """``ln(1 + 2 gamma_k)``, an upper bound on the log-negativity of ``|psi_k>``."""
    return math.log1p(2.0 * cm_cross_element(k, z))


def _band(e_low, e_up):
    delta = 0.5 * (e_up - e_low)
    total = e_up + e_low
    delta_rel = (e_up - e_low) / total if total > 0.0 else 0.0
    return delta, delta_rel


def error_band(k, z):
    """Absolute and relative error ``(Delta_k, delta_k)`` of the bound pair."""
    return _band(lower_bound(k, z), upper_bound(k, z))


def delta_max(k):
    """Large-squeezing limit of the absolute error, ``(ln(4 + 8k) - 1) / 2``."""
    if int(k) != k or k < 0:
        raise ValueError(f"k must be a nonnegative integer, got {k!r}")
    return 0.5 * (math.log(4.0 + 8.0 * k) - 1.0)


def symplectic_eigenvalue(k, z):
    """Doubly degenerate symplectic eigenvalue ``sqrt(a_k^2 - gamma_k^2)`` of the PSS CM.

    Taken from the exact ``(a - gamma)(a + gamma)``; the generic 4x4 route
    loses all digits once ``a`` and ``gamma`` exceed ~1e8.
    """
    k, z = _check_kz(k, z)
    a, gamma = _cm_elements_exact(k, z)
    return math.sqrt(float((a - gamma) * (a + gamma)))


def upsilon(k, z):
    """Entropic non-Gaussianity of ``|psi_k>``: the entropy of its Gaussian counterpart.

    Equal to ``gaussian_entropy(pss_cm(k, z))``, i.e. ``2 h(nu)`` for the
    degenerate symplectic eigenvalue ``nu``.
    """
    k, z = _check_kz(k, z)
    if k == 0 or z == 0.0:
        return 0.0
    return 2.0 * entropy_kernel(symplectic_eigenvalue(k, z))


def upsilon_max(k):
    """Printed large-squeezing non-Gaussianity formula; 0 for the Gaussian case k = 0."""
    if int(k) != k or k < 0:
        raise ValueError(f"k must be a nonnegative integer, got {k!r}")
    if k == 0:
        return 0.0
    root = math.sqrt(2 * k + 1)
    return 0.5 * (math.log(k / 2.0) + root * math.log((k + root + 1.0) / k))


@dataclass(frozen=True)
class BoundsReport:
    e_low: float
    e_up: float
    delta: float
    delta_rel: float
    source: str
    upsilon: Optional[float] = None
    logneg_closed: Optional[float] = None
    params: dict = field(default_factory=dict)

    def to_dict(self, units="nats"):
        out = {
            "source": self.source,
            **self.params,
            "e_low": convert_units(self.e_low, units),
            "e_up": convert_units(self.e_up, units),
            "delta": convert_units(self.delta, units),
            "delta_rel": self.delta_rel,
        }
        if self.upsilon is not None:
            out["upsilon"] = convert_units(self.upsilon, units)
        if self.logneg_closed is not None:
            out["logneg_closed"] = convert_units(self.logneg_closed, units)
        return out


def convert_units(value, units):
    if units == "nats":
        return value
    if units == "bits":
        return value / LN2
    raise ValueError(f"unknown units {units!r}")


def pure_bounds(k, z) -> BoundsReport:
    k, z = _check_kz(k, z)
    e_low, e_up = lower_bound(k, z), upper_bound(k, z)
    delta, delta_rel = _band(e_low, e_up)
    return BoundsReport(
        e_low,
        e_up,
        delta,
        delta_rel,
        source="closed_form",
        upsilon=upsilon(k, z),
        logneg_closed=fock.logneg_closed(fock.PssPure(k, z)),
        params={"k": k, "z": z},
    )


@dataclass(frozen=True)
class MixedPss:
    """Mixture ``sum_k p_k |psi_k><psi_k|`` at a common effective squeezing ``z``."""

    z: float
    weights: tuple

    def __post_init__(self):
        if not (0.0 < self.z < 1.0):
            raise ValueError(f"z must lie in (0, 1), got {self.z}")
        weights = tuple((int(k), float(p)) for k, p in self.weights)
        if not weights:
            raise ValueError("mixture needs at least one component")
        if any(k < 0 for k, _ in weights):
            raise ValueError("photon numbers must be nonnegative")
        if any(p < 0.0 for _, p in weights):
            raise ValueError("weights must be nonnegative")
        if abs(sum(p for _, p in weights) - 1.0) > 1e-12:
            raise ValueError(f"weights must sum to 1, got {sum(p for _, p in weights)}")
        object.__setattr__(self, "weights", weights)

    @classmethod
    def binomial(cls, n, p, z):
        """``p_k = C(n, k) p^k (1-p)^(n-k)`` for k = 0..n."""
        if n < 1 or not (0.0 < p <= 1.0):
            raise ValueError(f"need n >= 1 and 0 < p <= 1, got n={n}, p={p}")
        weights = [(k, math.comb(n, k) * p**k * (1.0 - p) ** (n - k)) for k in range(n + 1)]
        total = sum(w for _, w in weights)
        return cls(z, tuple((k, w / total) for k, w in weights))

    @property
    def k_bar(self):
        return sum(k * p for k, p in self.weights)

    def components(self):
        """``[(p_k, PssPure(k, z)), ...]`` for the Fock-space oracle."""
        return [(p, fock.PssPure(k, self.z)) for k, p in self.weights]


def mixed_cm(mix: MixedPss):
    """Covariance matrix of the mixture, the weighted sum of the component CMs."""
    return sum(p * pss_cm(k, mix.z) for k, p in mix.weights)


def bounds_from_standard_form(sf: StandardFormCM, source="measured_cm", params=None) -> BoundsReport:
    """Bounds for a symmetric standard-form CM (``a1 = a2``, ``gamma_p = -gamma_x``)."""
    e_low = gaussian_ef_symmetric(sf)
    e_up = math.log1p(2.0 * sf.gamma_x)
    delta, delta_rel = _band(e_low, e_up)
    return BoundsReport(e_low, e_up, delta, delta_rel, source=source, params=dict(params or {}))


def mixed_bounds(mix: MixedPss) -> BoundsReport:
    """Lower and upper bounds on the entanglement of formation of the mixture."""
    sf = to_standard_form(mixed_cm(mix))
    return bounds_from_standard_form(sf, source="mixture", params={"z": mix.z, "k_bar": mix.k_bar})
