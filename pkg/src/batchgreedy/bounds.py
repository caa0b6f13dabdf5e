"""Curvature-dependent approximation guarantees for batch greedy."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional

from .curvature import CurvatureReport
from .objectives import Certificate
from .setsystem import ExplicitMatroid, Matroid, UniformMatroid

HARMONIC = "harmonic"
EXPONENTIAL = "exponential_finite_t"
EXPONENTIAL_LIMIT = "exponential_limit"
NEMHAUSER = "nemhauser_batch"


class CurvatureRangeWarning(UserWarning):
    """Curvature outside [0, 1]; the guarantee's hypotheses do not hold."""


def _warn_range(alpha):
    if not 0.0 <= alpha <= 1.0:
        warnings.warn(f"curvature {alpha} lies outside [0, 1]", CurvatureRangeWarning, stacklevel=3)


def harmonic_bound(alpha: float) -> float:
    _warn_range(alpha)
    return 1.0 / (1.0 + alpha)


def exponential_bound(alpha: float, t: int) -> float:
    """``(1 - (1 - alpha/t)^t) / alpha``, continuous at ``alpha = 0`` (value 1)."""
    if t < 1:
        raise ValueError(f"t must be a positive integer, got {t}")
    _warn_range(alpha)
    if alpha == 0:
        return 1.0
    x = alpha / t
    if x >= 1:
        return (1.0 - (1.0 - x) ** t) / alpha
    # -expm1(t*log1p(-x)) avoids cancellation for small alpha
    return -math.expm1(t * math.log1p(-x)) / alpha


def exponential_limit_bound(alpha: float) -> float:
    _warn_range(alpha)
    if alpha == 0:
        return 1.0
    return -math.expm1(-alpha) / alpha


def nemhauser_batch_bound(k: int, K: int) -> float:
    """Curvature-free batch guarantee for a uniform matroid of rank K = k*s - p."""
    if k < 1 or K < 1:
        raise ValueError("k and K must be positive")
    s = -(-K // k)
    p = k * s - K
    lam = 1.0 - p / k
    return 1.0 - (1.0 - lam / s) * (1.0 - 1.0 / s) ** (s - 1)


@dataclass(frozen=True)
class BoundReport:
    bound_kind: str
    alpha: float
    value: float
    applicable: bool
    certificate_ok: bool
    t: Optional[int] = None
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "bound_kind": self.bound_kind,
            "alpha": self.alpha,
            "t": self.t,
            "value": self.value,
            "applicable": self.applicable,
            "certificate_ok": self.certificate_ok,
            "note": self.note,
        }


def matroid_certified(m: Matroid, axioms=None) -> bool:
    """Uniform and partition matroids pass by construction; explicit systems
    need a passing axiom report and equal-size maximal sets."""
    if isinstance(m, ExplicitMatroid):
        return axioms is not None and axioms.ok and m.equicardinal()
    return True


def bound_report(
    f,
    m: Matroid,
    k: int,
    curvature: CurvatureReport,
    certificate: Optional[Certificate] = None,
    axioms=None,
) -> list[BoundReport]:
    """Every guarantee that can be stated for (f, m, k), flagged by applicability."""
    cert = certificate if certificate is not None else curvature.certificate
    cert_ok = bool(cert is not None and cert.ok)
    K = m.rank_upper()
    divides = K % k == 0
    alpha = curvature.alpha_k
    notes = []
    if not cert_ok:
        notes.append("objective not certified nondecreasing submodular")
    if not divides:
        notes.append(f"k={k} does not divide K={K}; partial final batch is outside the guarantee")
    if alpha == 0:
        notes.append("alpha=0 resolved by continuity")
    note = "; ".join(notes)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", CurvatureRangeWarning)
        out = [
            BoundReport(
                HARMONIC,
                alpha,
                harmonic_bound(alpha),
                cert_ok and divides and matroid_certified(m, axioms),
                cert_ok,
                note=note,
            )
        ]
        uniform = isinstance(m, UniformMatroid)
        t = max(1, -(-K // k))
        ok = cert_ok and divides and uniform
        if not uniform:
            reason = "exponential guarantees need a uniform matroid"
            note = f"{note}; {reason}" if note else reason
        out.append(BoundReport(EXPONENTIAL, alpha, exponential_bound(alpha, t), ok, cert_ok, t, note))
        out.append(BoundReport(EXPONENTIAL_LIMIT, alpha, exponential_limit_bound(alpha), ok, cert_ok, t, note))
        if uniform:
            out.append(
                BoundReport(NEMHAUSER, alpha, nemhauser_batch_bound(k, K), cert_ok, cert_ok, t, note)
            )
    return out
