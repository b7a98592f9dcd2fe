"""Analytic eigenpairs and eigenvalue sequences for the kernel families.

The min-kernel Sobolev space gets its eigenvalues from the transcendental
equation cot x = x (one root per interval ((j-1) pi, j pi)); the cosh-kernel
Sobolev space follows the Neumann-cosine rule 1 / (1 + pi^2 (j-1)^2); the
korobov family has the fully explicit spectrum {1} + {beta k^(-2 alpha),
each twice}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericError, ParameterError
from .spectra import REL_TIE, Eigenpair, EigenSequence, KernelSpec

# Bisection width before the final Newton polish.
_BISECT_ATOL = 1e-13
# Offset keeping the bracket away from the cot singularities at multiples of pi.
_BRACKET_PAD = 1e-9


def _cot_minus_x(x: float) -> float:
    return math.cos(x) / math.sin(x) - x


def solve_cot_root(j: int) -> float:
    """Root alpha_j of cot x = x strictly inside ((j-1) pi, j pi).

    Bisection (unconditionally convergent on the bracket: cot x - x falls
    from +inf to -inf across each interval) down to 1e-13, then two Newton
    steps to restore full double precision.
    """
    if j < 1:
        raise ParameterError(f"root index must be >= 1, got {j}")
    lo = (j - 1) * math.pi + _BRACKET_PAD
    hi = j * math.pi - _BRACKET_PAD
    if not (_cot_minus_x(lo) > 0.0 > _cot_minus_x(hi)):
        raise NumericError(f"cot-root bracket lost its sign change for j={j}")
    while hi - lo > _BISECT_ATOL:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break  # interval already at ulp resolution
        if _cot_minus_x(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    for _ in range(2):
        s = math.sin(x)
        x -= (math.cos(x) / s - x) / (-1.0 / (s * s) - 1.0)
    return x


def sobolev_min_eigenpair(j: int) -> Eigenpair:
    """Eigenpair of the min-kernel Sobolev space: lambda_j = alpha_j^(-2).

    The eigenfunction eta_j(x) = beta_j cos(alpha_j x - alpha_j) has unit
    norm for ||f||^2 = f(0)^2 + int f'(x)^2 dx, which forces
    beta_j = (cos^2 alpha_j + (alpha_j / 2)(alpha_j - sin(2 alpha_j) / 2))^(-1/2).
    """
    a = solve_cot_root(j)
    b = (math.cos(a) ** 2 + 0.5 * a * (a - 0.5 * math.sin(2.0 * a))) ** -0.5

    def eta(x, a=a, b=b):
        return b * np.cos(a * np.asarray(x, dtype=float) - a)

    def deta(x, a=a, b=b):
        return -b * a * np.sin(a * np.asarray(x, dtype=float) - a)

    return Eigenpair(index=j, value=a ** -2, params={"alpha": a, "beta": b},
                     func=eta, dfunc=deta)


def sobolev_min_eigenvalues(count: int) -> EigenSequence:
    if count < 1:
        raise ParameterError("count must be >= 1")
    vals = np.array([solve_cot_root(j) ** -2 for j in range(1, count + 1)])
    return EigenSequence(vals, source="analytic-rule", exact_decay=2.0)


def sobolev_cosh_eigenpair(j: int) -> Eigenpair:
    """Eigenpair for the cosh-kernel Sobolev space (norm int f^2 + int f'^2).

    eta_j(x) = beta_j cos((j-1) pi x) with lambda_j = 1 / (1 + pi^2 (j-1)^2).
    """
    if j < 1:
        raise ParameterError("index must be >= 1")
    mu = (math.pi * (j - 1)) ** 2
    lam = 1.0 / (1.0 + mu)
    b = 1.0 if j == 1 else math.sqrt(2.0 * lam)
    freq = math.pi * (j - 1)

    def eta(x, f=freq, b=b):
        return b * np.cos(f * np.asarray(x, dtype=float))

    def deta(x, f=freq, b=b):
        return -b * f * np.sin(f * np.asarray(x, dtype=float))

    return Eigenpair(index=j, value=lam, params={"alpha": freq, "beta": b},
                     func=eta, dfunc=deta)


def sobolev_cosh_eigenvalues(count: int) -> EigenSequence:
    """{1, 1/(1+pi^2), 1/(1+4 pi^2), ...}; certified against the quadrature
    oracle before being relied on (see the nystrom module tests)."""
    if count < 1:
        raise ParameterError("count must be >= 1")
    j = np.arange(count, dtype=float)
    vals = 1.0 / (1.0 + (math.pi * j) ** 2)
    return EigenSequence(vals, source="analytic-rule", exact_decay=2.0)


def korobov_eigenvalues(alpha: float, beta: float, count: int) -> EigenSequence:
    """{1} followed by beta * k^(-2 alpha), each with multiplicity 2."""
    if count < 1:
        raise ParameterError("count must be >= 1")
    if not alpha > 0.5:
        raise ParameterError(f"korobov alpha must exceed 1/2, got {alpha}")
    if not 0.0 < beta <= 1.0:
        raise ParameterError(f"korobov beta must lie in (0, 1], got {beta}")
    kmax = (count + 1) // 2
    pairs = beta * np.arange(1, kmax + 1, dtype=float) ** (-2.0 * alpha)
    vals = np.sort(np.concatenate([[1.0], np.repeat(pairs, 2)]))[::-1][:count]
    return EigenSequence(vals, source="analytic-rule", exact_decay=2.0 * alpha)


def _korobov_eigenpair(alpha: float, beta: float, j: int) -> Eigenpair:
    if j == 1:
        return Eigenpair(index=1, value=1.0, params={"harmonic": 0.0},
                         func=lambda x: np.ones_like(np.asarray(x, dtype=float)),
                         dfunc=lambda x: np.zeros_like(np.asarray(x, dtype=float)))
    k = j // 2
    lam = beta * k ** (-2.0 * alpha)
    scale = math.sqrt(2.0 * beta) * k ** (-alpha)
    w = 2.0 * math.pi * k
    if j % 2 == 0:
        func = lambda x, w=w, s=scale: s * np.cos(w * np.asarray(x, dtype=float))
        dfunc = lambda x, w=w, s=scale: -s * w * np.sin(w * np.asarray(x, dtype=float))
    else:
        func = lambda x, w=w, s=scale: s * np.sin(w * np.asarray(x, dtype=float))
        dfunc = lambda x, w=w, s=scale: s * w * np.cos(w * np.asarray(x, dtype=float))
    return Eigenpair(index=j, value=lam, params={"harmonic": float(k)},
                     func=func, dfunc=dfunc)


@dataclass
class FamilySpectrum:
    """Analytic spectrum of one family: sequence, leading eigenpairs, and the
    multiplicity of the top eigenvalue (ties decided within REL_TIE)."""

    family: KernelSpec
    eigensequence: EigenSequence
    eigenpairs: list
    multiplicity_of_top: int


def family_eigenvalues(spec: KernelSpec, count: int) -> EigenSequence:
    if spec.family == "sobolev-min":
        return sobolev_min_eigenvalues(count)
    if spec.family == "sobolev-cosh":
        return sobolev_cosh_eigenvalues(count)
    if spec.family == "korobov":
        return korobov_eigenvalues(spec.alpha, spec.beta, count)
    raise ParameterError(f"no analytic eigenvalue rule for family {spec.family!r}")


def family_eigenpair(spec: KernelSpec, j: int) -> Eigenpair:
    if spec.family == "sobolev-min":
        return sobolev_min_eigenpair(j)
    if spec.family == "sobolev-cosh":
        return sobolev_cosh_eigenpair(j)
    if spec.family == "korobov":
        return _korobov_eigenpair(spec.alpha, spec.beta, j)
    raise ParameterError(f"no analytic eigenpair rule for family {spec.family!r}")


def family_spectrum(spec: KernelSpec, count: int, pairs: int = 1) -> FamilySpectrum:
    seq = family_eigenvalues(spec, count)
    eps = [family_eigenpair(spec, j) for j in range(1, min(pairs, count) + 1)]
    top = seq.values[0]
    mult = int(np.count_nonzero(seq.values >= top * (1.0 - REL_TIE)))
    if mult == len(seq) and not seq.is_exhaustive:
        raise ParameterError("top multiplicity not resolved by the requested count")
    return FamilySpectrum(family=spec, eigensequence=seq, eigenpairs=eps,
                          multiplicity_of_top=mult)
