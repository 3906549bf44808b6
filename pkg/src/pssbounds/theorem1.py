"""Numerical certification of the upper-bound inequality ln(1 + 2 gamma_k) >= E_N(psi_k).

Exponentiating both sides reduces the inequality to ``F_k(z) >= 0`` with

    F_k(z) = 2F1(k+1,k+1;1;z^2) + 4z(k+1) 2F1(k+2,k+1;1;z^2) - (1-z)^(-2k-2)
           = sum_{m>=1} f_m z^m.

For k >= 2 the argument runs through three links: F >= F~ (truncation of the
series at m = 2k+2 drops a nonnegative remainder), F~ >= S_0 z^(2k+2) (the
ratio expands in powers of (1-z) with coefficients S_l / S_0 > 0), and
S_0 > 0. Every link is checked here: coefficient identities in exact integer
arithmetic, and the F-chain in exact rational arithmetic at rational grid
points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from . import bounds, fock
from .specfun import hyp2f1_int, hyp2f1_int_exact

__all__ = [
    "f_coeff",
    "ProofCoefficients",
    "proof_coefficients",
    "big_f",
    "big_f_exact",
    "f_tilde",
    "s_sum",
    "r_series",
    "Check",
    "VerificationReport",
    "verify_theorem1",
    "verify_suite",
    "default_grid",
]

THEOREM_TOL = 1e-9


def f_coeff(k: int, m: int) -> int:
    """Series coefficient f_m of F_k, as an exact integer.

    ``[(1-(-1)^m)(2k+m+1/2) + 1] C(k + m/2 + ((-1)^m - 1)/4, k)^2 - C(2k+m+1, 2k+1)``
    """
    if k < 0 or m < 1:
        raise ValueError(f"need k >= 0 and m >= 1, got k={k}, m={m}")
    sign = -1 if m % 2 else 1
    # prefactor doubled to stay integral: (1 - sign)(4k + 2m + 1) + 2
    prefactor2 = (1 - sign) * (4 * k + 2 * m + 1) + 2
    top4 = sign - 1 + 4 * k + 2 * m
    if top4 % 4 or prefactor2 % 2:
        raise AssertionError(f"non-integral coefficient arguments at k={k}, m={m}")
    top = top4 // 4
    return (prefactor2 // 2) * math.comb(top, k) ** 2 - math.comb(2 * k + m + 1, 2 * k + 1)


@dataclass(frozen=True)
class ProofCoefficients:
    k: int
    f: tuple

    def sign_violations(self):
        """Indices m where odd coefficients are negative or even ones positive."""
        return [m for m, fm in enumerate(self.f, start=1) if (fm < 0 if m % 2 else fm > 0)]

    def tail_violations(self):
        """j > k+1 (within range) where f_{2j-1} + f_{2j} < 0."""
        out = []
        for j in range(self.k + 2, len(self.f) // 2 + 1):
            if self.f[2 * j - 2] + self.f[2 * j - 1] < 0:
                out.append(j)
        return out


def proof_coefficients(k, m_max=None, coeff=f_coeff) -> ProofCoefficients:
    m_max = 2 * k + 2 if m_max is None else m_max
    return ProofCoefficients(k, tuple(coeff(k, m) for m in range(1, m_max + 1)))


def big_f(k, z):
    """F_k(z) in floating point.

    Written as ``(1-z)^(-2k-2) G(z)`` with the bracket
    ``G = (1-z)(1+z)^(-2k-1) P0 + 4z(k+1)(1+z)^(-2k-2) P1 - 1`` built from the
    terminating polynomials ``P0 = 2F1(-k,-k;1;z^2)``, ``P1 = 2F1(-k-1,-k;1;z^2)``,
    so no term blows up as z -> 1.
    """
    z = float(z)
    if not (0.0 < z < 1.0):
        raise ValueError(f"z must lie in (0, 1), got {z}")
    x = z * z
    p0 = hyp2f1_int(-k, -k, 1, x)
    p1 = hyp2f1_int(-k - 1, -k, 1, x)
    bracket = (1.0 - z) * (1.0 + z) ** (-2 * k - 1) * p0 + 4.0 * z * (k + 1) * (1.0 + z) ** (-2 * k - 2) * p1 - 1.0
    return (1.0 - z) ** (-2 * k - 2) * bracket


def big_f_exact(k, z) -> Fraction:
    """F_k(z) exactly, for rational ``z`` in (0, 1)."""
    z = Fraction(z)
    if not (0 < z < 1):
        raise ValueError(f"z must lie in (0, 1), got {z}")
    x = z * z
    return (
        hyp2f1_int_exact(k + 1, k + 1, 1, x)
        + 4 * z * (k + 1) * hyp2f1_int_exact(k + 2, k + 1, 1, x)
        - (1 - z) ** (-2 * k - 2)
    )


def f_tilde(k, z, coeff=f_coeff):
    """Truncated series ``sum_{m=1}^{2k+2} f_m z^m`` (exact when ``z`` is a Fraction)."""
    return sum(coeff(k, m) * z**m for m in range(1, 2 * k + 3))


def s_sum(k: int, l: int, coeff=f_coeff) -> int:
    """``S_l = sum_{m=1}^{2k+2} C(2k+l-m+1, l) f_m``; exact integer."""
    if k < 0 or l < 0:
        raise ValueError(f"need k >= 0 and l >= 0, got k={k}, l={l}")
    total = 0
    for m in range(1, 2 * k + 3):
        top = 2 * k + l - m + 1
        # top = -1 only when m = 2k+2, l = 0: coefficient of (1-z)^0 in z^0
        weight = 1 if l == 0 else math.comb(top, l)
        total += weight * coeff(k, m)
    return total


def r_series(k, z, l_max=200):
    """Partial sum of ``sum_l (S_l / S_0) (1 - z)^l``, which equals ``F~ / (S_0 z^(2k+2))``."""
    s0 = s_sum(k, 0)
    return sum(s_sum(k, l) / s0 * (1.0 - z) ** l for l in range(l_max + 1))


@dataclass(frozen=True)
class Check:
    name: str
    k: int
    point: object
    ok: bool
    margin: float

    def to_dict(self):
        return {"check": self.name, "k": self.k, "at": self.point, "ok": self.ok, "margin": self.margin}


@dataclass
class VerificationReport:
    checks: list = field(default_factory=list)
    parameters: dict = field(default_factory=dict)

    @property
    def ok(self):
        return all(c.ok for c in self.checks)

    def violations(self):
        return [c for c in self.checks if not c.ok]

    def extend(self, other: "VerificationReport"):
        self.checks.extend(other.checks)

    def summary(self):
        out = {}
        for c in self.checks:
            entry = out.setdefault(c.name, {"count": 0, "failures": 0, "min_margin": math.inf})
            entry["count"] += 1
            entry["failures"] += 0 if c.ok else 1
            entry["min_margin"] = min(entry["min_margin"], c.margin)
        return out

    def to_dict(self):
        return {
            "ok": self.ok,
            "parameters": self.parameters,
            "summary": self.summary(),
            "violations": [c.to_dict() for c in self.violations()],
        }


def _as_float(value):
    try:
        return float(value)
    except OverflowError:
        return math.inf if value > 0 else -math.inf


def _point_label(z):
    return str(z) if isinstance(z, Fraction) else repr(float(z))


def verify_theorem1(k: int, z_grid: Iterable, coeff: Callable = f_coeff) -> VerificationReport:
    """Check the theorem and, for k >= 2, each link of its proof on ``z_grid``.

    Grid points given as ``Fraction`` are checked exactly for the F-chain;
    floats are converted exactly to their binary rational value. Violations
    are recorded in the report, never raised.
    """
    report = VerificationReport(parameters={"k": k})
    grid = [z if isinstance(z, Fraction) else Fraction(float(z)) for z in z_grid]
    for zq in grid:
        if not (0 < zq < 1):
            raise ValueError(f"grid point {zq} outside (0, 1)")
    for zq in grid:
        z = float(zq)
        margin = bounds.upper_bound(k, z) - fock.logneg_closed(fock.PssPure(k, z))
        report.checks.append(Check("theorem: E_up >= E_N", k, _point_label(zq), margin >= -THEOREM_TOL, margin))
    if k < 2:
        return report

    coeffs = proof_coefficients(k, coeff=coeff)
    bad = coeffs.sign_violations()
    report.checks.append(Check("proof: coefficient signs m <= 2k+2", k, bad or None, not bad, float(-len(bad))))
    s0 = s_sum(k, 0, coeff=coeff)
    for zq in grid:
        f_val = big_f_exact(k, zq)
        ft = f_tilde(k, zq, coeff=coeff)
        env = s0 * zq ** (2 * k + 2)
        label = _point_label(zq)
        report.checks.append(Check("proof: F >= F~", k, label, f_val >= ft, _as_float(f_val - ft)))
        report.checks.append(Check("proof: F~ >= S0 z^(2k+2)", k, label, ft >= env, _as_float(ft - env)))
        report.checks.append(Check("proof: S0 z^(2k+2) >= 0", k, label, env >= 0, _as_float(env)))
    return report


def default_grid(points=99):
    """``points`` equally spaced rationals ``j / (points + 1)`` strictly inside (0, 1)."""
    return [Fraction(j, points + 1) for j in range(1, points + 1)]


def verify_suite(
    k_max=10,
    l_max=50,
    grid=99,
    coeff_k_max=20,
    tail_extra=30,
    coeff: Callable = f_coeff,
) -> VerificationReport:
    """Full certification run.

    * theorem inequality for k = 0..k_max on the grid;
    * F-chain for k = 2..k_max on the grid;
    * coefficient sign pattern and tail domination (j = k+2..k+tail_extra)
      for k = 2..coeff_k_max;
    * S_l > 0 for k = 2..coeff_k_max, l = 0..l_max.

    Coefficient-level checks are skipped entirely when ``k_max < 2``.
    """
    z_grid = default_grid(grid)
    report = VerificationReport(
        parameters={
            "k_max": k_max,
            "l_max": l_max,
            "grid": grid,
            "coeff_k_max": coeff_k_max if k_max >= 2 else None,
            "tail_extra": tail_extra,
        }
    )
    for k in range(k_max + 1):
        report.extend(verify_theorem1(k, z_grid, coeff=coeff))
    if k_max < 2:
        return report
    for k in range(2, coeff_k_max + 1):
        coeffs = proof_coefficients(k, m_max=2 * (k + tail_extra), coeff=coeff)
        bad = coeffs.sign_violations()
        report.checks.append(Check("coefficient signs", k, bad or None, not bad, float(-len(bad))))
        tail_bad = coeffs.tail_violations()
        report.checks.append(Check("tail domination f_(2j-1) + f_(2j) >= 0", k, tail_bad or None, not tail_bad, float(-len(tail_bad))))
        for l in range(l_max + 1):
            s = s_sum(k, l, coeff=coeff)
            report.checks.append(Check("S_l > 0", k, l, s > 0, _as_float(s)))
    return report
