"""Closed-form asymptotic predictions.

All predictions are assembled additively in log space from log_gamma,
log_barnes_g and the explicit branch formulas: the jump-power and b_+/b_-
factors appear as exp{...} expressions with stated exponents, never as a
complex log of an already-formed product.  This is where the branch rules
live, so they are spelled out term by term.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import specfun
from .errors import (
    DegenerateError,
    DivergenceWarning,
    ParameterError,
    SeminormError,
    ZeroError,
)
from .fredholm import KernelSpec
from .symbol import FHSymbol

_SCALES = ("toeplitz-n", "sine-s", "bessel-s", "airy-s")


@dataclass(frozen=True)
class AsymptoticPrediction:
    """Structured log-value: evaluate() yields the predicted log-determinant."""

    linear_coeff: complex
    sqrt_coeff: complex
    log_coeff: complex
    constant: complex
    error_order: str
    scale: str = "toeplitz-n"
    diagnostics: dict = field(default_factory=dict, compare=False)

    def evaluate(self, x):
        """Predicted log D at size n (Toeplitz scales) or endpoint s (kernels)."""
        if self.scale == "toeplitz-n":
            return self.linear_coeff * x + self.log_coeff * np.log(x) + self.constant
        if self.scale == "sine-s":
            return (
                self.linear_coeff * x * x
                + self.sqrt_coeff * x
                + self.log_coeff * np.log(x)
                + self.constant
            )
        if self.scale == "bessel-s":
            return (
                self.linear_coeff * x
                + self.sqrt_coeff * np.sqrt(x)
                + self.log_coeff * np.log(x)
                + self.constant
            )
        if self.scale == "airy-s":
            return (
                self.linear_coeff * abs(x) ** 3
                + self.log_coeff * np.log(abs(x))
                + self.constant
            )
        raise ParameterError(f"unknown scale {self.scale!r}")


def _check_degenerate(alpha, beta):
    for sign in (+1, -1):
        v = complex(alpha) + sign * complex(beta)
        if abs(v.imag) < 1e-12 and v.real < -0.5 and abs(v.real - round(v.real)) < 1e-12:
            raise DegenerateError(
                f"alpha {'+' if sign > 0 else '-'} beta = {v} is a negative integer"
            )


def szego_prediction(sym, n=None):
    """Strong Szego limit: ln D_n -> n V_0 + sum_k k V_k V_{-k}."""
    if any(not s.trivial for s in sym.singularities):
        raise ParameterError("szego_prediction requires a smooth symbol")
    v = sym.v_coeffs
    const = sum(k * v.get(k, 0.0) * v.get(-k, 0.0) for k in v if k > 0)
    kmax = max((abs(k) for k in v), default=0)
    if kmax and abs(v.get(kmax, 0.0)) ** 2 * kmax > 1e-12:
        warnings.warn(
            "boundary Fourier coefficients are not negligible; S(f) tail unreliable",
            DivergenceWarning,
        )
    return AsymptoticPrediction(
        linear_coeff=v.get(0, 0.0),
        sqrt_coeff=0.0,
        log_coeff=0.0,
        constant=const,
        error_order="o(1)",
        diagnostics={"szego_sum": sym.szego_sum()},
    )


def _fh_log_terms(sym):
    """(linear, log_coeff, constant) of the Fisher-Hartwig formula for sym."""
    v = sym.v_coeffs
    const = complex(sum(k * v.get(k, 0.0) * v.get(-k, 0.0) for k in v if k > 0))
    sings = [s for s in sym.singularities if not s.trivial]
    log_coeff = 0.0 + 0.0j
    for s in sings:
        a, b = complex(s.alpha), complex(s.beta)
        _check_degenerate(a, b)
        log_coeff += a * a - b * b
        # b_+(z_j)^{-a+b} b_-(z_j)^{-a-b} = exp{(-a+b) sum V_k z_j^k + (-a-b) sum V_{-k} z_j^{-k}}
        zp = sum(v[k] * np.exp(1j * k * s.theta) for k in v if k > 0)
        zm = sum(v[k] * np.exp(1j * k * s.theta) for k in v if k < 0)
        const += (-a + b) * zp + (-a - b) * zm
        try:
            const += (
                specfun.log_barnes_g(1 + a + b)
                + specfun.log_barnes_g(1 + a - b)
                - specfun.log_barnes_g(1 + 2 * a)
            )
        except ZeroError as exc:
            raise DegenerateError(str(exc)) from exc
    for j in range(len(sings)):
        for k in range(j + 1, len(sings)):
            aj, bj = complex(sings[j].alpha), complex(sings[j].beta)
            ak, bk = complex(sings[k].alpha), complex(sings[k].beta)
            tj, tk = sings[j].theta, sings[k].theta
            dist = 2.0 * abs(np.sin(0.5 * (tj - tk)))
            const += 2.0 * (bj * bk - aj * ak) * np.log(dist)
            # (z_k / (z_j e^{i pi}))^{a_j b_k - a_k b_j} with the stated branch
            const += 1j * (tk - tj - np.pi) * (aj * bk - ak * bj)
    return complex(v.get(0, 0.0)), log_coeff, const


def fh_prediction(sym, n=None):
    """Fisher-Hartwig asymptotics for |||beta||| < 1."""
    norm = sym.beta_seminorm()
    if norm >= 1.0:
        raise SeminormError(f"|||beta||| = {norm} >= 1; use basor_tracy_prediction")
    linear, log_coeff, const = _fh_log_terms(sym)
    return AsymptoticPrediction(
        linear_coeff=linear,
        sqrt_coeff=0.0,
        log_coeff=log_coeff,
        constant=const,
        error_order="o(1)",
        diagnostics={"beta_seminorm": norm},
    )


def basor_tracy_prediction(sym, n):
    """Sum of the Fisher-Hartwig formula over all representations in M.

    Returns the complex log of sum_{M} (prod z_j^{n_j})^n R(f(.; n)), with the
    sum carried out stably (largest real exponent factored out).
    """
    reps = sym.fh_representations()
    exponents = []
    for rep in reps:
        shifted = sym.with_shifted_beta(rep)
        linear, log_coeff, const = _fh_log_terms(shifted)
        rot = 1j * n * sum(
            nn * s.theta for nn, s in zip(rep.shifts, sym.singularities)
        )
        exponents.append(rot + linear * n + log_coeff * np.log(n) + const)
    exponents = np.asarray(exponents, dtype=complex)
    m = exponents.real.max()
    total = np.sum(np.exp(exponents - m))
    if total == 0:
        return complex(-np.inf, 0.0)
    return m + np.log(total)


def transition_prediction(alpha, beta, v_coeffs, n, t, sigma_source):
    """Painleve-V transition expansion of ln D_n(f_t).

    v_coeffs: the Fourier coefficients of the analytic exponent V.
    sigma_source: object with .omega(X) (a SigmaSolution) supplying Omega(2nt).
    """
    a, b = complex(alpha), complex(beta)
    _check_degenerate(a, b)
    if t <= 0:
        raise ParameterError("t must be positive (t=0 is the pure FH case)")
    v = dict(v_coeffs or {})
    out = n * v.get(0, 0.0) + (a + b) * n * t
    out += sum(k * v.get(k, 0.0) * v.get(-k, 0.0) for k in v if k > 0)
    out -= (a - b) * sum(v[k] * np.exp(-t * k) for k in v if k > 0)
    out -= (a + b) * sum(v[k] * np.exp(t * k) for k in v if k < 0)
    out -= (a * a - b * b) * np.log(1.0 - np.exp(-2.0 * t))
    try:
        out += (
            specfun.log_barnes_g(1 + a + b)
            + specfun.log_barnes_g(1 + a - b)
            - specfun.log_barnes_g(1 + 2 * a)
        )
    except ZeroError as exc:
        raise DegenerateError(str(exc)) from exc
    out += sigma_source.omega(2.0 * n * t)
    return complex(out)


def fredholm_prediction(spec):
    """Large-s asymptotics of ln det(I - K) for the four kernels."""
    zp = specfun.zeta_prime_minus1()
    ln2 = np.log(2.0)
    if spec.variant == "sine":
        return AsymptoticPrediction(
            linear_coeff=-0.5,
            sqrt_coeff=0.0,
            log_coeff=-0.25,
            constant=ln2 / 12.0 + 3.0 * zp,
            error_order="O(1/s)",
            scale="sine-s",
        )
    if spec.variant == "ch":
        a, b = complex(spec.alpha), complex(spec.beta)
        if a.real <= -0.5:
            raise ParameterError("ch kernel needs Re alpha > -1/2")
        _check_degenerate(a, b)
        const = (
            0.5 * np.log(np.pi)
            + 2.0 * specfun.log_barnes_g(0.5)
            + specfun.log_barnes_g(1 + 2 * a)
            - 2.0 * a * a * ln2
            - specfun.log_barnes_g(1 + a + b)
            - specfun.log_barnes_g(1 + a - b)
        )
        return AsymptoticPrediction(
            linear_coeff=-0.5,
            sqrt_coeff=2.0 * a,
            log_coeff=-0.25 - a * a + b * b,
            constant=const,
            error_order="O(1/s)",
            scale="sine-s",
        )
    if spec.variant == "bessel":
        a = complex(spec.a)
        if a.real <= -1.0:
            raise ParameterError("Bessel kernel needs Re a > -1")
        const = specfun.log_barnes_g(1 + a) - 0.5 * a * np.log(2.0 * np.pi)
        return AsymptoticPrediction(
            linear_coeff=-0.25,
            sqrt_coeff=a,
            log_coeff=-0.25 * a * a,
            constant=const,
            error_order="O(s^-1/2)",
            scale="bessel-s",
        )
    if spec.variant == "airy":
        return AsymptoticPrediction(
            linear_coeff=-1.0 / 12.0,
            sqrt_coeff=0.0,
            log_coeff=-0.125,
            constant=ln2 / 24.0 + zp,
            error_order="O(|s|^-3/2)",
            scale="airy-s",
        )
    raise ParameterError(f"unknown kernel variant {spec.variant!r}")
