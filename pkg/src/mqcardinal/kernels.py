"""Radial kernels and their Fourier transforms.

Supported kernels
-----------------
general multiquadric   phi(x) = (x^2 + c^2)^alpha,  alpha < 0 for the
                       Fourier pipeline
poisson                the alpha = -1 multiquadric; its transform has the
                       closed form (pi/c) * exp(-c|xi|)
gaussian               g(x) = exp(-lambda x^2)

The Fourier convention throughout is ``fhat(xi) = int f(x) exp(-i x xi) dx``,
so the generic multiquadric transform is

    sqrt(2 pi) * 2^(1+alpha)/Gamma(-alpha) * (c/|xi|)^(alpha+1/2)
        * K_{alpha+1/2}(c |xi|)

with K the modified Bessel function of the second kind.  All functions in
this module are pure and accept scalars or numpy arrays for the evaluation
variable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import DomainError, DivergenceError, SingularityError, UnsupportedKernelError

MULTIQUADRIC = "multiquadric"
POISSON = "poisson"
GAUSSIAN = "gaussian"

_FAMILIES = (MULTIQUADRIC, POISSON, GAUSSIAN)


@dataclass(frozen=True)
class Kernel:
    """A radial basis kernel with its parameters.

    ``alpha`` and ``c`` apply to the multiquadric/poisson families,
    ``lam`` to the gaussian.  Unused parameters are stored as ``nan``.
    """

    family: str
    alpha: float = float("nan")
    c: float = float("nan")
    lam: float = float("nan")

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise DomainError(f"unknown kernel family {self.family!r}")
        if self.family == GAUSSIAN:
            if not (np.isfinite(self.lam) and self.lam > 0):
                raise DomainError("gaussian kernel requires lambda > 0")
        else:
            if not (np.isfinite(self.c) and self.c > 0):
                raise DomainError("multiquadric kernel requires c > 0")
            if not np.isfinite(self.alpha):
                raise DomainError("multiquadric kernel requires finite alpha")
            if self.family == POISSON and self.alpha != -1.0:
                raise DomainError("poisson kernel is the alpha = -1 multiquadric")

    @property
    def bessel_order(self) -> float:
        """Order alpha + 1/2 of the Bessel factor in the transform."""
        return self.alpha + 0.5


def multiquadric(alpha: float, c: float) -> Kernel:
    """General multiquadric (x^2 + c^2)^alpha."""
    return Kernel(MULTIQUADRIC, alpha=float(alpha), c=float(c))


def poisson(c: float) -> Kernel:
    """Poisson kernel: the alpha = -1 multiquadric with closed-form transform."""
    return Kernel(POISSON, alpha=-1.0, c=float(c))


def gaussian(lam: float) -> Kernel:
    """Gaussian kernel exp(-lambda x^2)."""
    return Kernel(GAUSSIAN, lam=float(lam))


def _check_r(r):
    r = np.asarray(r, dtype=float)
    if not np.all(np.isfinite(r)):
        raise DomainError("bessel_k requires finite r")
    if np.any(r <= 0):
        raise DomainError("bessel_k requires r > 0")
    return r


def _half_integer_k(nu: float, r: np.ndarray) -> np.ndarray:
    # K_{1/2}(r) = sqrt(pi/(2r)) e^{-r}; upward recurrence
    # K_{m+1/2} = K_{m-3/2} + (2m-1)/r * K_{m-1/2}.
    n = int(round(abs(nu) - 0.5))
    k_lo = np.sqrt(np.pi / (2.0 * r)) * np.exp(-r)  # K_{-1/2} = K_{1/2}
    k_hi = k_lo.copy()
    order = 0.5
    for _ in range(n):
        k_lo, k_hi = k_hi, k_lo + (2.0 * order / r) * k_hi
        order += 1.0
    return k_hi


def bessel_k(nu: float, r):
    """Modified Bessel function of the second kind K_nu(r) for r > 0.

    Symmetric in the order (K_nu = K_{-nu}).  Half-integer orders use the
    closed elementary form; other orders defer to scipy's implementation.
    """
    if not np.isfinite(nu):
        raise DomainError("bessel_k requires a finite order")
    r_arr = _check_r(r)
    nu = abs(float(nu))
    if nu < np.finfo(float).tiny:
        # scipy's kv returns inf/nan for subnormal orders; K is continuous
        # in the order, so flushing to zero is exact to double precision.
        nu = 0.0
    if abs(nu - round(nu - 0.5) - 0.5) < 1e-15:
        out = _half_integer_k(nu, r_arr)
    else:
        out = special.kv(nu, r_arr)
    return out if np.ndim(r) else float(out)


def bessel_k_upper_bound(nu: float, r):
    """Upper bound sqrt(2 pi) r^(-1/2) e^(-r) e^(nu^2/(2r)) for K_nu(r)."""
    if not np.isfinite(nu):
        raise DomainError("bessel_k_upper_bound requires a finite order")
    r_arr = _check_r(r)
    out = np.sqrt(2.0 * np.pi / r_arr) * np.exp(-r_arr + nu * nu / (2.0 * r_arr))
    return out if np.ndim(r) else float(out)


def kernel_spatial(k: Kernel, x):
    """Evaluate the kernel in the spatial domain."""
    x = np.asarray(x, dtype=float)
    if k.family == GAUSSIAN:
        out = np.exp(-k.lam * x * x)
    else:
        out = (x * x + k.c * k.c) ** k.alpha
    return out if out.ndim else float(out)


def _mq_fourier_prefactor(alpha: float) -> float:
    return math.sqrt(2.0 * math.pi) * 2.0 ** (1.0 + alpha) / math.gamma(-alpha)


def kernel_fourier(k: Kernel, xi):
    """Fourier transform of the kernel at frequency xi.

    The generic multiquadric branch is singular at xi = 0 when
    alpha >= -1/2; use :func:`kernel_fourier_at_zero` for the removable
    alpha < -1/2 limit.
    """
    xi_arr = np.asarray(xi, dtype=float)
    scalar = xi_arr.ndim == 0
    if k.family == GAUSSIAN:
        out = np.sqrt(np.pi / k.lam) * np.exp(-xi_arr * xi_arr / (4.0 * k.lam))
    elif k.family == POISSON:
        out = (np.pi / k.c) * np.exp(-k.c * np.abs(xi_arr))
    else:
        if k.alpha >= 0:
            raise UnsupportedKernelError(
                "Fourier transform of a growing multiquadric is distributional"
            )
        if np.any(xi_arr == 0.0):
            raise SingularityError(
                "multiquadric transform is singular at xi = 0; "
                "use kernel_fourier_at_zero for alpha < -1/2"
            )
        absxi = np.abs(xi_arr)
        nu = k.bessel_order
        out = (
            _mq_fourier_prefactor(k.alpha)
            * (k.c / absxi) ** (k.alpha + 0.5)
            * bessel_k(nu, k.c * absxi)
        )
    return float(out) if scalar else out


def kernel_fourier_at_zero(k: Kernel) -> float:
    """Limit of the Fourier transform at xi = 0.

    Finite exactly when the kernel is integrable: gaussian, poisson, or
    multiquadric with alpha < -1/2.
    """
    if k.family == GAUSSIAN:
        return math.sqrt(math.pi / k.lam)
    if k.alpha >= -0.5:
        raise DivergenceError(
            f"transform of multiquadric with alpha={k.alpha} diverges at xi = 0"
        )
    return (
        math.sqrt(math.pi)
        * math.gamma(-k.alpha - 0.5)
        / math.gamma(-k.alpha)
        * k.c ** (2.0 * k.alpha + 1.0)
    )
