"""Exact finite-n determinants: Toeplitz, Hankel, Toeplitz+Hankel.

Dense determinants are taken through LU with partial pivoting, accumulating
log-modulus and phase so values spanning hundreds of orders of magnitude stay
representable.  Hankel moment matrices escalate to mpmath arithmetic when the
double-precision condition estimate passes 1e12 (the Airy-limit weight
e^{-4xn} is catastrophically ill-conditioned long before n = 16).
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath as mp
import numpy as np
from numpy.polynomial import chebyshev as _cheb
from scipy.linalg import lu_factor

from ._accel import USING_NUMBA, njit
from .errors import (
    ParameterError,
    PrecisionError,
    SingularMinorError,
    SymmetryError,
)
from .symbol import CoeffTable, FHSymbol


def _wrap_phase(p):
    r = math.remainder(p, 2.0 * math.pi)
    if r <= -math.pi:
        r += 2.0 * math.pi
    return r


@dataclass(frozen=True)
class LogDet:
    """A determinant as (log-modulus, phase); log_modulus = -inf encodes 0."""

    log_modulus: float
    phase: float = 0.0

    @property
    def value(self):
        if self.log_modulus == -np.inf:
            return 0.0 + 0.0j
        return np.exp(self.log_modulus) * np.exp(1j * self.phase)

    @property
    def log(self):
        return complex(self.log_modulus, self.phase)

    @staticmethod
    def from_value(v):
        v = complex(v)
        if v == 0:
            return LogDet(-np.inf, 0.0)
        return LogDet(np.log(abs(v)), np.angle(v))

    @staticmethod
    def from_log(z):
        z = complex(z)
        return LogDet(z.real, _wrap_phase(z.imag))

    def __mul__(self, other):
        return LogDet(self.log_modulus + other.log_modulus,
                      _wrap_phase(self.phase + other.phase))

    def __truediv__(self, other):
        return LogDet(self.log_modulus - other.log_modulus,
                      _wrap_phase(self.phase - other.phase))


# -- dense LU log-determinant ---------------------------------------------------


@njit(cache=True)
def _lu_logdet_kernel(a):  # pragma: no cover - exercised through dense_logdet
    n = a.shape[0]
    swaps = 0
    logmod = 0.0
    phase = 0.0
    for k in range(n):
        p = k
        mx = abs(a[k, k])
        for i in range(k + 1, n):
            v = abs(a[i, k])
            if v > mx:
                mx = v
                p = i
        if mx == 0.0:
            return -np.inf, 0.0
        if p != k:
            for j in range(n):
                tmp = a[p, j]
                a[p, j] = a[k, j]
                a[k, j] = tmp
            swaps += 1
        piv = a[k, k]
        logmod += np.log(abs(piv))
        phase += np.arctan2(piv.imag, piv.real)
        inv = 1.0 / piv
        for i in range(k + 1, n):
            m = a[i, k] * inv
            a[i, k] = m
            for j in range(k + 1, n):
                a[i, j] -= m * a[k, j]
    if swaps % 2 == 1:
        phase += np.pi
    return logmod, phase


def _lu_logdet_lapack(a):
    lu, piv = lu_factor(a, check_finite=False)
    d = np.diag(lu)
    if np.any(d == 0):
        return -np.inf, 0.0
    logmod = float(np.sum(np.log(np.abs(d))))
    phase = float(np.sum(np.angle(d)))
    phase += math.pi * int(np.count_nonzero(piv != np.arange(len(piv))))
    return logmod, phase


def dense_logdet(mat):
    """LogDet of a dense complex matrix (n = 0 gives the empty determinant 1)."""
    mat = np.ascontiguousarray(mat, dtype=complex)
    if mat.shape[0] == 0:
        return LogDet(0.0, 0.0)
    if USING_NUMBA:
        logmod, phase = _lu_logdet_kernel(mat.copy())
    else:
        logmod, phase = _lu_logdet_lapack(mat)
    if logmod == -np.inf:
        return LogDet(-np.inf, 0.0)
    return LogDet(logmod, _wrap_phase(phase))


# -- Toeplitz ---------------------------------------------------------------------


def _coeff_array(coeffs, k_min, k_max):
    if isinstance(coeffs, CoeffTable):
        return np.array([coeffs[j] for j in range(k_min, k_max + 1)], dtype=complex)
    if isinstance(coeffs, dict):
        return np.array([coeffs.get(j, 0.0) for j in range(k_min, k_max + 1)], dtype=complex)
    raise ParameterError("coefficients must be a CoeffTable or a dict")


def build_toeplitz(coeffs, n):
    c = _coeff_array(coeffs, -(n - 1), n - 1)
    j = np.arange(n)
    return c[(j[:, None] - j[None, :]) + (n - 1)]


def toeplitz_det(coeffs, n):
    """D_n(f) = det (f_{j-k}), j,k = 0..n-1; D_0 = 1 by convention."""
    if n < 0:
        raise ParameterError("n must be nonnegative")
    if n == 0:
        return LogDet(0.0, 0.0)
    return dense_logdet(build_toeplitz(coeffs, n))


TPH_VARIANTS = ("plus", "minus2", "plus1", "minus1")


def build_toeplitz_plus_hankel(coeffs, n, variant):
    if variant not in TPH_VARIANTS:
        raise ParameterError(f"unknown variant {variant!r}; expected one of {TPH_VARIANTS}")
    c = _coeff_array(coeffs, -(2 * n), 2 * n)
    off = 2 * n
    sym_err = np.max(np.abs(c - c[::-1])) if n > 0 else 0.0
    scale = np.max(np.abs(c)) + 1e-300
    if sym_err > 1e-10 * scale:
        raise SymmetryError(f"symbol is not even: max |f_j - f_-j| = {sym_err:.2e}")
    j = np.arange(n)
    t = c[(j[:, None] - j[None, :]) + off]
    if variant == "plus":
        h = c[(j[:, None] + j[None, :]) + off]
        return t + h
    if variant == "minus2":
        h = c[(j[:, None] + j[None, :] + 2) + off]
        return t - h
    h = c[(j[:, None] + j[None, :] + 1) + off]
    return t + h if variant == "plus1" else t - h


def toeplitz_plus_hankel_det(coeffs, n, variant):
    """det(f_{j-k} +- f_{j+k...}) in the four even-symbol combinations."""
    if n == 0:
        return LogDet(0.0, 0.0)
    return dense_logdet(build_toeplitz_plus_hankel(coeffs, n, variant))


# -- Hankel ------------------------------------------------------------------------


class MomentTable:
    """Moments int x^{j} w(x) dx, j = 0..count-1, in double or mpmath precision."""

    def __init__(self, values_float=None, values_mp=None, dps=None):
        if values_float is None and values_mp is None:
            raise ParameterError("MomentTable needs at least one representation")
        if values_mp is not None and values_float is None:
            values_float = np.array([complex(v) for v in values_mp])
        self.values_float = np.asarray(values_float, dtype=complex)
        self.values_mp = values_mp
        self.dps = dps

    def __len__(self):
        return len(self.values_float)

    @staticmethod
    def from_values(values):
        return MomentTable(values_float=np.asarray(values, dtype=complex))

    @staticmethod
    def from_function(w, a, b, count, dps=60):
        """Moments of a weight callable via mpmath tanh-sinh quadrature."""
        with mp.workdps(dps):
            vals = [mp.quad(lambda x, m=m: w(x) * x**m, [a, b]) for m in range(count)]
        return MomentTable(values_mp=vals, dps=dps)

    @staticmethod
    def from_exponential(rate, upper, count, dps=60):
        """Moments of w = e^{-rate x} on [0, upper] (upper=None: half line)."""
        with mp.workdps(dps):
            r = mp.mpf(rate)
            if upper is None:
                vals = [mp.gamma(m + 1) / r ** (m + 1) for m in range(count)]
            else:
                ub = mp.mpf(upper)
                vals = [mp.gammainc(m + 1, 0, r * ub) / r ** (m + 1) for m in range(count)]
        return MomentTable(values_mp=vals, dps=dps)

    @staticmethod
    def from_symbol_chebyshev(coeffs, kind, count):
        """Exact moments of w(x) = f(e^{i theta(x)}) * chi(x) on [-1, 1] for even f.

        chi in {"inv_sqrt": 1/sqrt(1-x^2), "sqrt": sqrt(1-x^2),
        "plus": sqrt((1+x)/(1-x)), "minus": sqrt((1-x)/(1+x))}.
        Uses int_0^pi T_k(cos t) f dt = pi f_k, so each moment is a finite
        Chebyshev combination of the Fourier coefficients.
        """
        mults = {
            "inv_sqrt": np.array([1.0]),
            "sqrt": np.array([0.5, 0.0, -0.5]),  # 1-x^2 in Chebyshev basis
            "plus": np.array([1.0, 1.0]),  # 1+x
            "minus": np.array([1.0, -1.0]),  # 1-x
        }
        if kind not in mults:
            raise ParameterError(f"unknown weight kind {kind!r}")
        vals = []
        for m in range(count):
            xm = np.zeros(m + 1)
            xm[m] = 1.0
            t = _cheb.chebmul(_cheb.poly2cheb(xm), mults[kind])
            acc = 0.0 + 0.0j
            for k, tk in enumerate(t):
                if tk != 0.0:
                    acc += tk * complex(coeffs[k] if not isinstance(coeffs, dict) else coeffs.get(k, 0.0))
            vals.append(np.pi * acc)
        return MomentTable(values_float=np.array(vals))


def build_hankel(moments, n):
    vals = moments.values_float
    if len(vals) < 2 * n - 1:
        raise ParameterError(f"need {2 * n - 1} moments for n={n}, have {len(vals)}")
    j = np.arange(n)
    return vals[j[:, None] + j[None, :]]


def _mp_hankel_logdet(values_mp, n, dps):
    with mp.workdps(dps):
        mat = mp.matrix(n, n)
        for j in range(n):
            for k in range(n):
                mat[j, k] = values_mp[j + k]
        d = mp.det(mat)
        if d == 0:
            return LogDet(-np.inf, 0.0)
        return LogDet(float(mp.log(abs(d))), _wrap_phase(float(mp.arg(d))))


def hankel_det(moments, n, cond_threshold=1e12):
    """D_n^H = det(moment_{j+k}); switches to extended precision when needed."""
    if n == 0:
        return LogDet(0.0, 0.0)
    mat = build_hankel(moments, n)
    cond = np.linalg.cond(mat)
    if not np.isfinite(cond) or cond > cond_threshold:
        if moments.values_mp is None:
            raise PrecisionError(
                f"condition estimate {cond:.2e} needs extended-precision moments"
            )
        dps = moments.dps or 60
        d1 = _mp_hankel_logdet(moments.values_mp, n, dps)
        d2 = _mp_hankel_logdet(moments.values_mp, n, dps + 20)
        if abs(d1.log_modulus - d2.log_modulus) > 1e-6 * max(1.0, abs(d2.log_modulus)):
            d3 = _mp_hankel_logdet(moments.values_mp, n, 2 * dps)
            if abs(d2.log_modulus - d3.log_modulus) > 1e-6 * max(1.0, abs(d3.log_modulus)):
                raise PrecisionError("extended precision cannot certify 6 digits")
            return d3
        return d2
    return dense_logdet(mat)


# -- orthogonal polynomials on the circle ----------------------------------------


@dataclass(frozen=True)
class OPUCResult:
    degree: int
    chi: complex
    phi: tuple  # ascending coefficients of phi_k
    phi_hat: tuple

    def phi_at(self, z):
        return complex(np.polyval(list(self.phi)[::-1], z))

    def phi_hat_at(self, z):
        return complex(np.polyval(list(self.phi_hat)[::-1], z))


def opuc(coeffs, k):
    """Orthonormal polynomials phi_k, phi_hat_k for the weight with the given
    Fourier coefficients; chi_k^2 = D_k / D_{k+1}."""
    c = _coeff_array(coeffs, -k, k)
    off = k
    j = np.arange(k + 1)
    t = c[(j[:, None] - j[None, :]) + off]  # t[j, i] = f_{j-i}
    rhs = np.zeros(k + 1, dtype=complex)
    rhs[k] = 1.0
    try:
        sol = np.linalg.solve(t, rhs)
        sol_hat = np.linalg.solve(t.T, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularMinorError(f"moment system singular at degree {k}") from exc
    resid = np.max(np.abs(t @ sol - rhs))
    if not np.isfinite(resid) or resid > 1e-8:
        raise SingularMinorError(f"moment system residual {resid:.2e} at degree {k}")
    lead = sol[k]
    if lead == 0:
        raise SingularMinorError(f"vanishing leading coefficient at degree {k}")
    chi = np.sqrt(complex(lead))
    return OPUCResult(k, complex(chi), tuple(sol / chi), tuple(sol_hat / chi))


def th_bridge_check(sym, n):
    """Relative residual of the Hankel-Toeplitz bridge

    [D_n^H(w)]^2 = pi^{2n} / 4^{(n-1)^2}
                   * (chi_{2n} + phi_{2n}(0))^2 / (phi_{2n}(1) phi_{2n}(-1))
                   * D_{2n}(f),   w(x) = f(e^{i theta}) / |sin theta|.
    """
    if not isinstance(sym, FHSymbol):
        raise ParameterError("th_bridge_check expects an FHSymbol")
    if not sym.is_even():
        raise SymmetryError("bridge requires an even symbol")
    if n == 0:
        return 0.0
    k_need = max(2 * n, 2 * n - 2)
    coeffs = sym.fourier_coeffs(-k_need, k_need)
    moments = MomentTable.from_symbol_chebyshev(coeffs, "inv_sqrt", 2 * n - 1)
    lhs = hankel_det(moments, n)
    op = opuc(coeffs, 2 * n)
    d2n = toeplitz_det(coeffs, 2 * n)
    pref = 2 * n * np.log(np.pi) - (n - 1) ** 2 * np.log(4.0)
    mid = (op.chi + op.phi_at(0.0)) ** 2 / (op.phi_at(1.0) * op.phi_at(-1.0))
    rhs_log = pref + np.log(complex(mid)) + d2n.log
    return abs(np.exp(2 * lhs.log - rhs_log) - 1.0)


TH_HANKEL_KINDS = {"plus": "inv_sqrt", "minus2": "sqrt", "plus1": "plus", "minus1": "minus"}


def th_hankel_relation_residual(sym, n, variant):
    """Relative residual of det(T+-H) = 2^{p(n)} / pi^n * D_n^H(mapped weight)."""
    powers = {
        "plus": n * n - 2 * n + 2,
        "minus2": n * n,
        "plus1": n * n - n,
        "minus1": n * n - n,
    }
    coeffs = sym.fourier_coeffs(-(2 * n), 2 * n)
    lhs = toeplitz_plus_hankel_det(coeffs, n, variant)
    moments = MomentTable.from_symbol_chebyshev(coeffs, TH_HANKEL_KINDS[variant], 2 * n - 1)
    rhs_log = powers[variant] * np.log(2.0) - n * np.log(np.pi) + hankel_det(moments, n).log
    return abs(np.exp(lhs.log - rhs_log) - 1.0)


# -- Gessel generating function ----------------------------------------------------


@lru_cache(maxsize=128)
def _gessel_coeffs(lam, n):
    root = math.sqrt(lam)
    sym = FHSymbol({1: root, -1: root})
    return sym.fourier_coeffs(-(n - 1), n - 1)

def gessel_det(n, lam):
    """D_n(exp(sqrt(lam) (z + 1/z))): the generating function of LIS counts."""
    if n < 1:
        raise ParameterError("n must be >= 1")
    if lam < 0:
        raise ParameterError("lambda must be nonnegative")
    if lam == 0.0:
        return 1.0
    d = toeplitz_det(_gessel_coeffs(float(lam), n), n)
    return float(np.real(d.value))
