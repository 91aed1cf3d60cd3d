"""Fisher-Hartwig symbols on the unit circle.

A symbol is

    f(e^{i theta}) = e^{V(z)} z^{sum beta_j}
                     prod_j |z - z_j|^{2 alpha_j} g_{z_j, beta_j}(z) z_j^{-beta_j}

with z_j = e^{i theta_j}, 0 = theta_0 < theta_1 < ... < theta_m < 2 pi, where
g is the pure jump factor (e^{i pi beta_j} before theta_j, e^{-i pi beta_j}
after) and the smooth part V is stored spectrally as finitely many Fourier
coefficients.  All complex powers of moduli are principal; every other branch
choice is explicit in the factors above.
"""

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from . import quadrature
from .errors import DegenerateError, ParameterError, SingularPointError

_TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class FHSingularity:
    theta: float
    alpha: complex = 0.0
    beta: complex = 0.0

    def __post_init__(self):
        if not 0.0 <= self.theta < _TWO_PI:
            raise ParameterError(f"singularity angle {self.theta} outside [0, 2pi)")
        if complex(self.alpha).real <= -0.5:
            raise ParameterError(f"Re alpha must exceed -1/2, got {self.alpha}")

    @property
    def trivial(self):
        return self.alpha == 0 and self.beta == 0


@dataclass(frozen=True)
class FHRepresentation:
    """Integer shift vector (n_0, ..., n_m) with sum 0; beta_j -> beta_j + n_j."""

    shifts: tuple

    def __post_init__(self):
        if sum(self.shifts) != 0:
            raise ParameterError("representation shifts must sum to zero")


@dataclass(frozen=True)
class CoeffTable:
    """Fourier coefficients f_j for j in [k_min, k_max]."""

    k_min: int
    values: tuple

    @property
    def k_max(self):
        return self.k_min + len(self.values) - 1

    def __getitem__(self, j):
        if not self.k_min <= j <= self.k_max:
            raise KeyError(f"coefficient index {j} outside [{self.k_min}, {self.k_max}]")
        return self.values[j - self.k_min]

    def get(self, j, default=0.0):
        if self.k_min <= j <= self.k_max:
            return self.values[j - self.k_min]
        return default

    def array(self):
        return np.asarray(self.values, dtype=complex)

    @staticmethod
    def from_array(values, k_min):
        return CoeffTable(k_min, tuple(complex(v) for v in values))


class FHSymbol:
    """Immutable symbol: spectral smooth part plus Fisher-Hartwig singularities."""

    def __init__(self, v_coeffs=None, singularities=(), truncation_order=None):
        v = {int(k): complex(c) for k, c in (v_coeffs or {}).items() if c != 0}
        sings = sorted((s for s in singularities), key=lambda s: s.theta)
        for s in sings[1:]:
            if s.trivial:
                raise ParameterError("only the theta=0 slot may be trivial")
        thetas = [s.theta for s in sings]
        if len(set(thetas)) != len(thetas):
            raise ParameterError("singularity angles must be distinct")
        if not sings or sings[0].theta != 0.0:
            sings = [FHSingularity(0.0, 0.0, 0.0)] + sings
        self.v_coeffs = v
        self.singularities = tuple(sings)
        self.truncation_order = (
            truncation_order
            if truncation_order is not None
            else max((abs(k) for k in v), default=0)
        )

    # -- basic structure ---------------------------------------------------
    @property
    def beta_sum(self):
        return sum(s.beta for s in self.singularities)

    def v_at(self, theta):
        theta = np.asarray(theta, dtype=float)
        out = np.zeros(theta.shape, dtype=complex)
        for k, c in self.v_coeffs.items():
            out += c * np.exp(1j * k * theta)
        return out

    def with_shifted_beta(self, rep):
        """Apply an FH-representation: beta_j -> beta_j + n_j."""
        if len(rep.shifts) != len(self.singularities):
            raise ParameterError("shift vector length mismatch")
        sings = []
        for s, n in zip(self.singularities, rep.shifts):
            if n != 0 and s.trivial:
                raise ParameterError("cannot shift the trivial slot")
            sings.append(FHSingularity(s.theta, s.alpha, s.beta + n))
        # slots that became trivial contribute unit factors and are dropped
        return FHSymbol(self.v_coeffs, [s for s in sings if not s.trivial],
                        self.truncation_order)

    # -- evaluation ---------------------------------------------------------
    def evaluate_many(self, theta):
        theta = np.mod(np.asarray(theta, dtype=float), _TWO_PI)
        log_mod = np.zeros(theta.shape, dtype=float)
        log_rest = self.v_at(theta) + 1j * theta * self.beta_sum
        for s in self.singularities:
            if s.trivial:
                continue
            diff = 0.5 * (theta - s.theta)
            dist = 2.0 * np.abs(np.sin(diff))
            if s.alpha != 0:
                if np.any(dist == 0.0):
                    raise SingularPointError(
                        f"symbol evaluated at singular point theta={s.theta}"
                    )
                log_mod = log_mod + 2.0 * np.real(
                    complex(s.alpha) * np.log(dist)
                )
                log_rest = log_rest + 2j * complex(s.alpha).imag * np.log(dist)
            jump = np.where(theta < s.theta, 1j * np.pi * s.beta, -1j * np.pi * s.beta)
            log_rest = log_rest + jump - 1j * s.theta * s.beta
        return np.exp(log_mod + log_rest)

    def evaluate(self, theta):
        return complex(self.evaluate_many(np.asarray([theta]))[0])

    # -- Fourier coefficients ------------------------------------------------
    def fourier_coeffs(self, k_min, k_max, order=quadrature.DEFAULT_ORDER):
        """Coefficients f_j, j in [k_min, k_max], by singularity-split quadrature."""
        sing = [
            (s.theta, (2.0 * complex(s.alpha)) if s.alpha != 0 else None)
            for s in self.singularities
            if not s.trivial
        ]
        k_abs = max(abs(k_min), abs(k_max))
        nodes, weights = quadrature.circle_rule(sing, k_abs, order)
        vals = self.evaluate_many(nodes)
        coeffs = quadrature.project_fourier(vals, nodes, weights, k_min, k_max)
        return CoeffTable.from_array(coeffs, k_min)

    # -- Wiener-Hopf ----------------------------------------------------------
    def wiener_hopf(self):
        plus = {k: c for k, c in self.v_coeffs.items() if k > 0}
        minus = {k: c for k, c in self.v_coeffs.items() if k < 0}
        return WienerHopf(plus, self.v_coeffs.get(0, 0.0), minus)

    # -- seminorm and representations -----------------------------------------
    def _genuine_mask(self):
        return [not s.trivial for s in self.singularities]

    def beta_seminorm(self):
        """max_{j,k} |Re beta_j - Re beta_k| over genuine singular slots."""
        res = [complex(s.beta).real for s in self.singularities if not s.trivial]
        if len(res) <= 1:
            return 0.0
        return max(res) - min(res)

    def fh_representations(self):
        """The set M of shift vectors minimizing sum (Re beta_j + n_j)^2."""
        sings = self.singularities
        genuine = [i for i, s in enumerate(sings) if not s.trivial]
        if not genuine:
            return [FHRepresentation(tuple(0 for _ in sings))]
        res = [complex(sings[i].beta).real for i in genuine]
        boxes = [range(-(int(np.ceil(abs(r))) + 1), int(np.ceil(abs(r))) + 2) for r in res]
        best, elems = None, []
        for combo in itertools.product(*boxes[:-1]):
            last = -sum(combo)
            if last not in boxes[-1]:
                continue
            ns = combo + (last,)
            val = sum((r + n) ** 2 for r, n in zip(res, ns))
            if best is None or val < best - 1e-12:
                best, elems = val, [ns]
            elif abs(val - best) <= 1e-12:
                elems.append(ns)
        reps = []
        for ns in elems:
            shifts = [0] * len(sings)
            for i, n in zip(genuine, ns):
                shifts[i] = n
            reps.append(FHRepresentation(tuple(shifts)))
        for rep in reps:
            for s, n in zip(sings, rep.shifts):
                for sign in (+1, -1):
                    v = complex(s.alpha) + sign * (complex(s.beta) + n)
                    if abs(v.imag) < 1e-9 and v.real < -0.5 and abs(v.real - round(v.real)) < 1e-9:
                        raise DegenerateError(
                            f"representation {rep.shifts}: alpha{'+-'[sign < 0]}beta_hat "
                            f"= {v} is a negative integer"
                        )
        return reps

    # -- diagnostics ------------------------------------------------------------
    def szego_sum(self):
        """S(f) = sum |k| |V_k|^2 over the stored coefficients."""
        return sum(abs(k) * abs(c) ** 2 for k, c in self.v_coeffs.items())

    def smoothness_sum(self, s):
        """sum |k|^s |V_k|; diagnostic for the smoothness hypothesis."""
        return sum(abs(k) ** s * abs(c) for k, c in self.v_coeffs.items() if k != 0)

    def is_even(self, tol=1e-12):
        """f(e^{i theta}) = f(e^{-i theta}): even V, root factors only at +-1."""
        for k, c in self.v_coeffs.items():
            if abs(c - self.v_coeffs.get(-k, 0.0)) > tol:
                return False
        return all(
            s.trivial or (s.theta in (0.0, np.pi) and s.beta == 0)
            for s in self.singularities
        )

    def __repr__(self):
        sing = [(s.theta, s.alpha, s.beta) for s in self.singularities if not s.trivial]
        return f"FHSymbol(V keys={sorted(self.v_coeffs)}, singularities={sing})"


@dataclass(frozen=True)
class WienerHopf:
    """e^V = b_+ e^{V_0} b_-, stored as the one-sided exponent series."""

    plus_coeffs: dict
    v0: complex
    minus_coeffs: dict

    def log_plus(self, z):
        return sum(c * complex(z) ** k for k, c in self.plus_coeffs.items())

    def log_minus(self, z):
        return sum(c * complex(z) ** k for k, c in self.minus_coeffs.items())

    def plus(self, z):
        return np.exp(self.log_plus(z))

    def minus(self, z):
        return np.exp(self.log_minus(z))


# -- transition symbol ---------------------------------------------------------


def transition_symbol_values(alpha, beta, t, v_coeffs, theta):
    """f_t(e^{i theta}) = (z - e^t)^{a+b} (z - e^{-t})^{a-b} z^{-a+b}
    e^{-i pi (a+b)} e^{V(z)} for t > 0.

    Branches: z - e^t stays in the left half plane, its log uses
    arg = pi + Arg(e^t - z); the log of z - e^{-t} winds once around 0 and is
    taken continuous on (0, 2pi) starting from arg 0 at theta = 0.  With these
    choices f_t is smooth on the whole circle for t > 0 and tends to the
    Fisher-Hartwig symbol |z-1|^{2a} z^b e^{-i pi b} as t -> 0.
    """
    if t <= 0:
        raise ParameterError("transition symbol requires t > 0")
    a, b = complex(alpha), complex(beta)
    theta = np.asarray(theta, dtype=float)
    z = np.exp(1j * theta)
    w_out = z - np.exp(t)
    log_out = np.log(np.abs(w_out)) + 1j * (np.pi + np.angle(-w_out))
    w_in = z - np.exp(-t)
    log_in = np.log(np.abs(w_in)) + 1j * np.mod(np.angle(w_in), 2.0 * np.pi)
    expo = (a + b) * log_out + (a - b) * log_in + 1j * (-a + b) * theta - 1j * np.pi * (a + b)
    for k, c in (v_coeffs or {}).items():
        expo = expo + c * np.exp(1j * k * theta)
    return np.exp(expo)


def transition_coeffs(alpha, beta, t, v_coeffs, k_min, k_max, order=quadrature.DEFAULT_ORDER):
    """Fourier coefficients of the transition symbol f_t (analytic for t > 0,
    but steep on the scale t near theta = 0, hence the graded rule)."""
    k_abs = max(abs(k_min), abs(k_max))
    nodes, weights = quadrature.circle_rule([(0.0, 0.0)], k_abs, order)
    vals = transition_symbol_values(alpha, beta, t, v_coeffs, nodes)
    coeffs = quadrature.project_fourier(vals, nodes, weights, k_min, k_max)
    return CoeffTable.from_array(coeffs, k_min)


# -- symbol description files -------------------------------------------------


def symbol_from_dict(data):
    """Build an FHSymbol from the JSON description format:
    {"V": [[k, re, im], ...], "singularities": [{"theta": t, "alpha": [re, im],
    "beta": [re, im]}, ...]}"""
    v = {}
    for entry in data.get("V", []):
        k, re, im = entry
        v[int(k)] = complex(re, im)
    sings = []
    for s in data.get("singularities", []):
        alpha = complex(*s.get("alpha", (0.0, 0.0)))
        beta = complex(*s.get("beta", (0.0, 0.0)))
        sings.append(FHSingularity(float(s["theta"]), alpha, beta))
    return FHSymbol(v, sings, data.get("truncation_order"))


def symbol_to_dict(sym):
    return {
        "V": [[k, c.real, c.imag] for k, c in sorted(sym.v_coeffs.items())],
        "singularities": [
            {
                "theta": s.theta,
                "alpha": [complex(s.alpha).real, complex(s.alpha).imag],
                "beta": [complex(s.beta).real, complex(s.beta).imag],
            }
            for s in sym.singularities
            if not s.trivial
        ],
    }


def load_symbol(path):
    with open(path) as fh:
        return symbol_from_dict(json.load(fh))
