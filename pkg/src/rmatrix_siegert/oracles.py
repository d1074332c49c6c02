"""Analytic reference solutions: the Bargmann potential and the free p wave."""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, InvalidArgumentError, OutOfDomainError, PoleEvaluationError

__all__ = [
    "BargmannParams",
    "bargmann_potential",
    "bargmann_s_exact",
    "bargmann_phase_shift_deg",
    "bargmann_truncated_wf",
    "bargmann_truncated_k_residual",
    "complex_newton",
    "find_truncated_poles",
    "TruncatedPoles",
    "free_l1_wave",
    "phase_shift_deg",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BargmannParams:
    b: float
    c: float

    def __post_init__(self):
        if not self.b > 0:
            raise InvalidArgumentError(f"Bargmann b must be positive, got {self.b!r}")
        if self.b + self.c == 0:
            raise InvalidArgumentError("Bargmann parameters need b + c != 0")

    @property
    def beta(self) -> float:
        return (self.b - self.c) / (self.b + self.c)


def phase_shift_deg(s) -> float:
    """Half the argument of ``S``, in degrees, reduced to [0, 180)."""
    delta = math.degrees(cmath.phase(s) % (2 * math.pi) / 2)
    return 0.0 if delta >= 180.0 else delta


def bargmann_potential(p: BargmannParams, r):
    e = p.beta * np.exp(-2 * p.b * np.asarray(r, dtype=float))
    v = -4 * p.b**2 * e / (1 + e) ** 2
    return float(v) if np.ndim(v) == 0 else v


def bargmann_s_exact(p: BargmannParams, k: complex) -> complex:
    """``S_0(k) = (k + ib)(k - ic) / ((k - ib)(k + ic))``."""
    b, c = p.b, p.c
    den = (k - 1j * b) * (k + 1j * c)
    if abs(den) == 0:
        raise PoleEvaluationError(f"k = {k!r} is a pole of the Bargmann S-matrix")
    return complex((k + 1j * b) * (k - 1j * c) / den)


def bargmann_phase_shift_deg(p: BargmannParams, energy: float) -> float:
    if not energy > 0:
        raise InvalidArgumentError(f"phase shifts need E > 0, got {energy!r}")
    return phase_shift_deg(bargmann_s_exact(p, math.sqrt(2 * energy)))


def bargmann_truncated_wf(p: BargmannParams, k: complex, r: float) -> complex:
    """Unnormalized regular solution of the Bargmann potential at wave number ``k``."""
    b, c = p.b, p.c
    th = math.tanh(b * r)
    den = b + c * th
    k2b2 = k * k + b * b
    if den == 0 or k2b2 == 0:
        raise OutOfDomainError(f"singular Bargmann wave function at k={k!r}, r={r!r}")
    s = cmath.sin(k * r)
    return complex(s + (b * b - c * c) / k2b2 * (k * th * cmath.cos(k * r) - b * s) / den)


def bargmann_truncated_k_residual(p: BargmannParams, a: float, k: complex, *, tanh_argument: str = "ba") -> complex:
    """Outgoing-wave condition at ``r = a`` for the Bargmann potential cut at ``a``.

    Returns ``lhs - rhs`` multiplied by ``exp(-|Im k| a)``, which keeps every
    exponential bounded without moving the zeros.

    ``tanh_argument`` selects the argument of the squared hyperbolic tangent in
    the first bracketed term: ``"ba"`` (the form whose zeros make the wave
    function purely outgoing) or ``"ka"`` (the literal typeset form, kept for
    comparison only).
    """
    if tanh_argument not in ("ba", "ka"):
        raise InvalidArgumentError("tanh_argument must be 'ba' or 'ka'")
    b, c = p.b, p.c
    k = complex(k)
    damp = abs(k.imag) * a
    tba = math.tanh(b * a)
    # sin(ka) e^{-|Im k| a} and e^{-ika} e^{-|Im k| a}, each exponent with Re <= 0
    sin_scaled = (cmath.exp(1j * k * a - damp) - cmath.exp(-1j * k * a - damp)) / 2j
    out_scaled = cmath.exp(-1j * k * a - damp)
    t2 = tba**2 if tanh_argument == "ba" else cmath.tanh(k * a) ** 2
    lhs = b * b * (c + 1j * k) / math.cosh(b * a) ** 2 * sin_scaled
    bracket = (b * b + 1j * k * c) * t2 + b * (c + 1j * k) * tba - (k * k + b * b) / (b * b - c * c) * (b + c * tba) ** 2
    return lhs - k * bracket * out_scaled


def complex_newton(func, k0: complex, *, tol: float = 1e-12, max_iter: int = 200, rel_step: float = 1e-7):
    """Newton iteration on an analytic function with a central-difference derivative.

    The difference step is ``rel_step * max(1, |k|)``. Returns ``(root, iterations)``.
    """
    k = complex(k0)
    for it in range(1, max_iter + 1):
        h = rel_step * max(1.0, abs(k))
        f0 = func(k)
        df = (func(k + h) - func(k - h)) / (2 * h)
        if df == 0 or not cmath.isfinite(df):
            raise ConvergenceError(f"zero or non-finite derivative at k={k!r}")
        dk = f0 / df
        k -= dk
        if not cmath.isfinite(k):
            raise ConvergenceError("Newton iterate diverged")
        if abs(dk) < tol:
            return k, it
    raise ConvergenceError(f"Newton did not converge from {k0!r} in {max_iter} steps")


@dataclass
class TruncatedPoles:
    roots: np.ndarray
    dropped: list = field(default_factory=list)

    def __iter__(self):
        return iter(self.roots)

    def __len__(self):
        return len(self.roots)


def find_truncated_poles(p: BargmannParams, a: float, seeds, *, dedupe_tol: float = 1e-8) -> TruncatedPoles:
    """Refine seeds to zeros of :func:`bargmann_truncated_k_residual`.

    Seeds that fail to converge are recorded in ``dropped`` and logged.
    Roots closer than ``dedupe_tol`` are merged.
    """
    roots = []
    dropped = []
    for seed in np.atleast_1d(np.asarray(seeds, dtype=complex)):
        try:
            root, _ = complex_newton(lambda k: bargmann_truncated_k_residual(p, a, k), seed)
        except (ConvergenceError, OverflowError, ZeroDivisionError) as exc:
            logger.warning("dropping seed %s: %s", seed, exc)
            dropped.append((complex(seed), str(exc)))
            continue
        if all(abs(root - r) > dedupe_tol for r in roots):
            roots.append(root)
    roots = np.array(roots, dtype=complex)
    order = np.lexsort((roots.imag, np.abs(roots.real)))
    return TruncatedPoles(roots=roots[order], dropped=dropped)


def free_l1_wave(k: float, r: float) -> float:
    """Regular free p wave ``sin(kr)/(kr) - cos(kr)``."""
    z = k * r
    if abs(z) < 1e-2:
        z2 = z * z
        return z2 / 3 * (1 - z2 / 10 * (1 - z2 / 28 * (1 - z2 / 54)))
    return math.sin(z) / z - math.cos(z)
