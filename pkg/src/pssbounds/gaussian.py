"""Two-mode covariance matrices: physicality, standard form, symplectic spectra.

Conventions: quadrature order ``(q1, p1, q2, p2)`` with ``q = a + a^dag`` and
``p = -i(a - a^dag)``, so the vacuum covariance matrix is the identity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .specfun import entropy_kernel, g_ef

__all__ = [
    "OMEGA",
    "AsymmetricStateError",
    "ValidationReport",
    "StandardFormCM",
    "SymplecticSpectrum",
    "as_cm",
    "twin_beam_cm",
    "validate",
    "to_standard_form",
    "symplectic_spectrum",
    "gaussian_ef_symmetric",
    "gaussian_entropy",
]

PHYSICALITY_TOL = 1e-9
SYMMETRY_TOL = 1e-10

OMEGA = np.array(
    [
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0, 0.0],
    ]
)


class AsymmetricStateError(ValueError):
    """Raised when a formula valid only for symmetric states gets an asymmetric one."""


def as_cm(cm):
    """Coerce to a 4x4 float array."""
    cm = np.asarray(cm, dtype=float)
    if cm.shape != (4, 4):
        raise ValueError(f"covariance matrix must be 4x4, got shape {cm.shape}")
    return cm


def twin_beam_cm(r):
    """Covariance matrix of the two-mode squeezed vacuum with squeezing ``r``."""
    a, g = math.cosh(2 * r), math.sinh(2 * r)
    return StandardFormCM(a, a, g, -g).matrix()


@dataclass(frozen=True)
class ValidationReport:
    symmetry_defect: float
    min_eigenvalue: float
    ok: bool

    def to_dict(self):
        return {
            "symmetry_defect": self.symmetry_defect,
            "min_eigenvalue": self.min_eigenvalue,
            "ok": self.ok,
        }


def validate(cm, tol=PHYSICALITY_TOL) -> ValidationReport:
    """Check symmetry and the uncertainty relation ``sigma + i Omega >= 0``."""
    cm = as_cm(cm)
    defect = float(np.max(np.abs(cm - cm.T)))
    sym = 0.5 * (cm + cm.T)
    min_eig = float(np.linalg.eigvalsh(sym + 1j * OMEGA).min())
    ok = defect <= SYMMETRY_TOL and min_eig >= -tol
    return ValidationReport(defect, min_eig, bool(ok))


@dataclass(frozen=True)
class StandardFormCM:
    """Local-unitary invariants ``(a1, a2, gamma_x, gamma_p)`` with ``gamma_x >= |gamma_p|``."""

    a1: float
    a2: float
    gamma_x: float
    gamma_p: float

    def matrix(self):
        a1, a2, gx, gp = self.a1, self.a2, self.gamma_x, self.gamma_p
        return np.array(
            [
                [a1, 0.0, gx, 0.0],
                [0.0, a1, 0.0, gp],
                [gx, 0.0, a2, 0.0],
                [0.0, gp, 0.0, a2],
            ]
        )

    def is_symmetric(self, rtol=1e-8):
        scale = max(self.a1, self.a2, 1.0)
        return abs(self.a1 - self.a2) <= rtol * scale and abs(self.gamma_x + self.gamma_p) <= rtol * scale

    def to_dict(self):
        return {"a1": self.a1, "a2": self.a2, "gamma_x": self.gamma_x, "gamma_p": self.gamma_p}


def _inv_sqrt_2x2(block):
    w, v = np.linalg.eigh(block)
    if w.min() <= 0.0:
        raise ValueError("local covariance block is not positive definite")
    return (v / np.sqrt(w)) @ v.T


def to_standard_form(cm) -> StandardFormCM:
    """Reduce a two-mode CM to its standard-form invariants.

    Each local block is mapped to ``a_i * I`` by the symplectic
    ``sqrt(a_i) * alpha_i^(-1/2)`` (unit determinant), after which the
    correlation block's singular values give ``gamma_x >= |gamma_p|`` and
    ``sign(gamma_p) = sign(det gamma)``.
    """
    cm = as_cm(cm)
    cm = 0.5 * (cm + cm.T)
    alpha1, alpha2, gamma = cm[:2, :2], cm[2:, 2:], cm[:2, 2:]
    det1, det2 = np.linalg.det(alpha1), np.linalg.det(alpha2)
    if det1 <= 0.0 or det2 <= 0.0:
        raise ValueError("local blocks must have positive determinant")
    a1, a2 = math.sqrt(det1), math.sqrt(det2)
    s1 = math.sqrt(a1) * _inv_sqrt_2x2(alpha1)
    s2 = math.sqrt(a2) * _inv_sqrt_2x2(alpha2)
    g = s1 @ gamma @ s2.T
    sv = np.linalg.svd(g, compute_uv=False)
    det_g = np.linalg.det(gamma)
    gamma_x = float(sv[0])
    gamma_p = float(sv[1]) * (1.0 if det_g >= 0.0 else -1.0)
    return StandardFormCM(a1, a2, gamma_x, gamma_p)


@dataclass(frozen=True)
class SymplecticSpectrum:
    nu_minus: float
    nu_plus: float


def symplectic_spectrum(cm, tol=PHYSICALITY_TOL) -> SymplecticSpectrum:
    """Symplectic eigenvalues ``nu_- <= nu_+`` of a two-mode CM.

    Computed as the eigenvalue moduli of the Hermitian matrix
    ``sigma^(1/2) (i Omega) sigma^(1/2)``, whose spectrum is ``{+-nu_-, +-nu_+}``.
    """
    cm = as_cm(cm)
    cm = 0.5 * (cm + cm.T)
    w, v = np.linalg.eigh(cm)
    if w.min() <= 0.0:
        raise ValueError("covariance matrix is not positive definite")
    root = (v * np.sqrt(w)) @ v.T
    herm = root @ (1j * OMEGA) @ root
    eig = np.sort(np.abs(np.linalg.eigvalsh(herm)))
    nu_minus, nu_plus = float(eig[0]), float(eig[2])
    if nu_minus < 1.0 - tol:
        raise ValueError(f"unphysical covariance matrix: nu_- = {nu_minus}")
    return SymplecticSpectrum(max(nu_minus, 1.0), max(nu_plus, 1.0))


def gaussian_ef_symmetric(sf: StandardFormCM, rtol=1e-8) -> float:
    """Entanglement of formation (nats) of a symmetric Gaussian state ``g(a - gamma_x)``."""
    if not sf.is_symmetric(rtol):
        raise AsymmetricStateError(
            "entanglement of formation is only available for symmetric standard forms "
            f"(a1 = a2, gamma_p = -gamma_x); got {sf}"
        )
    x = 0.5 * (sf.a1 + sf.a2) - sf.gamma_x
    if x >= 1.0:
        return 0.0
    return g_ef(x)


def gaussian_entropy(cm) -> float:
    """Von Neumann entropy (nats) of the Gaussian state with covariance matrix ``cm``."""
    spec = symplectic_spectrum(cm)
    return entropy_kernel(spec.nu_minus) + entropy_kernel(spec.nu_plus)
