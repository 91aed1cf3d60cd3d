"""Nystrom evaluation of det(I - K) for the sine, confluent-hypergeometric,
Bessel and Airy kernels, plus the finite-size Toeplitz/Hankel checks that
converge to them.

Discretization notes.  The sine and Airy kernels are analytic on their
domains, so plain Gauss-Legendre with symmetric square-root weighting is
spectrally accurate.  The ch and Bessel kernels carry algebraic factors
(|2x|^{2 alpha} respectively (xy)^{a/2}) which would wreck Gauss-Legendre;
both kernels factor as K(x, y) = sqm(x) sqm(y) H(x, y) with H analytic, so the
algebraic part is folded into a Gauss-Jacobi quadrature weight and the Nystrom
matrix is built from H.  The determinant is unchanged: this is a similarity
transform of the discretized operator.

Diagonal values are closed forms obtained by L'Hopital (validated against
Richardson extrapolation in the tests):

    sine:   K(x,x) = 1/pi
    Airy:   K(x,x) = Ai'(x)^2 - x Ai(x)^2
    Bessel: K(x,x) = [J_a'(t)^2 + (1 - a^2/t^2) J_a(t)^2]/4,  t = sqrt(x)
    ch:     H(x,x) = pre * (a'(x) b(x) - a(x) b'(x)) with
            a(x) = e^{-ix} phi(1+al+be, 1+2al, 2ix),
            b(x) = e^{+ix} phi(1+al-be, 1+2al, -2ix),
            a'(x) = i e^{-ix} (2 phi'(2ix) - phi(2ix)) etc.

Branches for the ch kernel follow the piecewise jump factor
g_beta(x) = e^{-i pi beta} (x > 0), e^{+i pi beta} (x < 0); its square root is
taken as e^{-+ i pi beta / 2} by the sign of x.
"""

from dataclasses import dataclass

import numpy as np

from . import detcore, specfun
from .detcore import LogDet, MomentTable, hankel_det, toeplitz_det
from .errors import ConvergenceError, DomainError, ParameterError
from .quadrature import gauss_jacobi, gauss_legendre, interval_rule, project_fourier
from .symbol import CoeffTable, FHSingularity, FHSymbol

_VARIANTS = ("sine", "ch", "bessel", "airy")


@dataclass(frozen=True)
class KernelSpec:
    """Tagged kernel selection; domains are (-s,s), (-s,s), (0,s), (s,inf)."""

    variant: str
    s: float
    alpha: complex = 0.0
    beta: complex = 0.0
    a: complex = 0.0

    def __post_init__(self):
        if self.variant not in _VARIANTS:
            raise ParameterError(f"unknown kernel variant {self.variant!r}")
        if self.variant in ("sine", "ch", "bessel") and not self.s > 0:
            raise ParameterError(f"{self.variant} kernel needs s > 0")
        if self.variant == "ch":
            if complex(self.alpha).real <= -0.5:
                raise ParameterError("ch kernel needs Re alpha > -1/2")
            for sign in (+1, -1):
                v = complex(self.alpha) + sign * complex(self.beta)
                if abs(v.imag) < 1e-12 and v.real < -0.5 and abs(v.real - round(v.real)) < 1e-12:
                    raise ParameterError(f"alpha +- beta = {v} is a negative integer")
        if self.variant == "bessel" and complex(self.a).real <= -1.0:
            raise ParameterError("Bessel kernel needs Re a > -1")

    @staticmethod
    def sine(s):
        return KernelSpec("sine", float(s))

    @staticmethod
    def ch(alpha, beta, s):
        return KernelSpec("ch", float(s), alpha=complex(alpha), beta=complex(beta))

    @staticmethod
    def bessel(a, s):
        return KernelSpec("bessel", float(s), a=complex(a))

    @staticmethod
    def airy(s):
        return KernelSpec("airy", float(s))

    def domain(self):
        if self.variant in ("sine", "ch"):
            return (-self.s, self.s)
        if self.variant == "bessel":
            return (0.0, self.s)
        return (self.s, np.inf)


def _in_domain(spec, x):
    lo, hi = spec.domain()
    return lo <= x <= hi


def _ch_pre(alpha, beta):
    lg = (
        specfun.log_gamma(1 + alpha + beta)
        + specfun.log_gamma(1 + alpha - beta)
        - 2.0 * specfun.log_gamma(1 + 2 * alpha)
    )
    return np.exp(lg) / (2j * np.pi)


def _ch_ab(alpha, beta, x):
    """a(x), b(x), a'(x), b'(x) of the desingularized ch kernel."""
    z = 2j * x
    p1 = specfun.kummer_phi(1 + alpha + beta, 1 + 2 * alpha, z)
    p2 = specfun.kummer_phi(1 + alpha - beta, 1 + 2 * alpha, -z)
    d1 = specfun.kummer_phi_prime(1 + alpha + beta, 1 + 2 * alpha, z)
    d2 = specfun.kummer_phi_prime(1 + alpha - beta, 1 + 2 * alpha, -z)
    em, ep = np.exp(-1j * x), np.exp(1j * x)
    a_val = em * p1
    b_val = ep * p2
    a_der = 1j * em * (2.0 * d1 - p1)
    b_der = 1j * ep * (p2 - 2.0 * d2)
    return a_val, b_val, a_der, b_der


def _ch_sqm2(alpha, beta, x):
    """g_beta(x) |2x|^{2 alpha}: the squared singular prefactor."""
    jump = np.exp(-1j * np.pi * beta) if x > 0 else np.exp(1j * np.pi * beta)
    return jump * np.abs(2.0 * x) ** (2.0 * alpha)


def kernel_eval(spec, x, y):
    """Kernel value at (x, y); x = y returns the analytic diagonal limit."""
    if not (_in_domain(spec, x) and _in_domain(spec, y)):
        raise DomainError(f"({x}, {y}) outside the {spec.variant} kernel domain")
    if spec.variant == "sine":
        if x == y:
            return 1.0 / np.pi
        return np.sin(x - y) / (np.pi * (x - y))
    if spec.variant == "airy":
        ai_x, aip_x = specfun.airy_ai(x)
        if x == y:
            return aip_x**2 - x * ai_x**2
        ai_y, aip_y = specfun.airy_ai(y)
        return (ai_x * aip_y - ai_y * aip_x) / (x - y)
    if spec.variant == "bessel":
        a = spec.a
        tx, ty = np.sqrt(x), np.sqrt(y)
        jx, jy = specfun.bessel_j(a, tx), specfun.bessel_j(a, ty)
        dx, dy = specfun.bessel_j_prime(a, tx), specfun.bessel_j_prime(a, ty)
        if x == y:
            return (dx**2 + (1.0 - a**2 / x) * jx**2) / 4.0 if x > 0 else np.nan
        return (ty * jx * dy - tx * jy * dx) / (2.0 * (x - y))
    # ch
    alpha, beta = spec.alpha, spec.beta
    pre = _ch_pre(alpha, beta)
    ax, bx, dax, dbx = _ch_ab(alpha, beta, x)
    if x == y:
        h = pre * (dax * bx - ax * dbx)
        return _ch_sqm2(alpha, beta, x) * h
    ay, by, _, _ = _ch_ab(alpha, beta, y)
    h = pre * (ax * by - ay * bx) / (x - y)
    sq = np.sqrt(_ch_sqm2(alpha, beta, x)) * np.sqrt(_ch_sqm2(alpha, beta, y))
    return sq * h


def _default_m(spec):
    if spec.variant in ("sine", "ch"):
        return max(60, min(260, int(12 * spec.s) + 40))
    if spec.variant == "bessel":
        return max(80, min(260, int(1.2 * np.sqrt(spec.s)) + 100))
    return 100


def _airy_upper(s):
    t = max(s + 10.0, 10.0)
    ai, _ = specfun.airy_ai(t)
    while ai * ai > 1e-18:
        t += 2.0
        ai, _ = specfun.airy_ai(t)
    return t


def _nystrom_matrix(spec, m):
    """I - (weighted kernel) as a dense matrix."""
    if spec.variant == "sine":
        x, w = gauss_legendre(m)
        x = spec.s * x
        w = spec.s * w
        diff = x[:, None] - x[None, :]
        with np.errstate(invalid="ignore", divide="ignore"):
            k = np.sin(diff) / (np.pi * diff)
        np.fill_diagonal(k, 1.0 / np.pi)
        sw = np.sqrt(w)
        return np.eye(m) - sw[:, None] * k * sw[None, :]
    if spec.variant == "airy":
        lo, hi = spec.s, _airy_upper(spec.s)
        x, w = gauss_legendre(m)
        x = 0.5 * (lo + hi) + 0.5 * (hi - lo) * x
        w = 0.5 * (hi - lo) * w
        ai, aip = specfun.airy_ai(x)
        diff = x[:, None] - x[None, :]
        with np.errstate(invalid="ignore", divide="ignore"):
            k = (ai[:, None] * aip[None, :] - ai[None, :] * aip[:, None]) / diff
        np.fill_diagonal(k, aip**2 - x * ai**2)
        sw = np.sqrt(w)
        return np.eye(m) - sw[:, None] * k * sw[None, :]
    if spec.variant == "bessel":
        a = complex(spec.a)
        if abs(a.imag) > 0:
            raise ParameterError("fredholm_det(bessel) supports real order only")
        a = a.real
        xj, wj = gauss_jacobi(m, a)  # weight (1+t)^a on [-1,1]
        x = 0.5 * spec.s * (xj + 1.0)
        w = wj * (0.5 * spec.s) ** (1.0 + a)
        t = np.sqrt(x)
        jv = np.asarray(specfun.bessel_j(a, t), dtype=float)
        jd = np.asarray(specfun.bessel_j_prime(a, t), dtype=float)
        # H = K / (x y)^{a/2}
        xa = np.power(x, -0.5 * a)
        diff = x[:, None] - x[None, :]
        with np.errstate(invalid="ignore", divide="ignore"):
            num = t[None, :] * jv[:, None] * jd[None, :] - t[:, None] * jv[None, :] * jd[:, None]
            h = num / (2.0 * diff)
        np.fill_diagonal(h, (jd**2 + (1.0 - a**2 / x) * jv**2) / 4.0)
        h = h * xa[:, None] * xa[None, :]
        sw = np.sqrt(w)
        return np.eye(m) - sw[:, None] * h * sw[None, :]
    # ch kernel: Gauss-Jacobi on (0, s) with weight x^{2 alpha}, mirrored
    alpha, beta = spec.alpha, spec.beta
    if abs(complex(alpha).imag) > 0:
        raise ParameterError("fredholm_det(ch) supports real alpha only")
    al = complex(alpha).real
    half = max(10, m // 2)
    xj, wj = gauss_jacobi(half, 2.0 * al)
    xp = 0.5 * spec.s * (xj + 1.0)
    wp = wj * (0.5 * spec.s) ** (1.0 + 2.0 * al) * 4.0**al  # |2x|^{2a} = 4^a x^{2a}
    nodes = np.concatenate([-xp[::-1], xp])
    jump = np.concatenate(
        [np.full(half, np.exp(1j * np.pi * beta)), np.full(half, np.exp(-1j * np.pi * beta))]
    )
    dvals = np.concatenate([wp[::-1], wp]) * jump
    pre = _ch_pre(alpha, beta)
    avals = np.empty(2 * half, dtype=complex)
    bvals = np.empty(2 * half, dtype=complex)
    adirs = np.empty(2 * half, dtype=complex)
    bdirs = np.empty(2 * half, dtype=complex)
    for i, xx in enumerate(nodes):
        avals[i], bvals[i], adirs[i], bdirs[i] = _ch_ab(alpha, beta, xx)
    diff = nodes[:, None] - nodes[None, :]
    with np.errstate(invalid="ignore", divide="ignore"):
        h = pre * (avals[:, None] * bvals[None, :] - avals[None, :] * bvals[:, None]) / diff
    np.fill_diagonal(h, pre * (adirs * bvals - avals * bdirs))
    sq = np.sqrt(dvals.astype(complex))
    return np.eye(2 * half) - sq[:, None] * h * sq[None, :]


def fredholm_det(spec, m=None, tol=None):
    """det(I - K) over the Nystrom discretization with m nodes.

    With ``tol`` set, the result at 2m nodes must agree within tol, else
    ConvergenceError.  The ch determinant is real for real alpha and purely
    imaginary beta; the real part is returned.
    """
    if m is None:
        m = _default_m(spec)
    if m < 10:
        raise ParameterError("need at least 10 quadrature nodes")
    mat = _nystrom_matrix(spec, m)
    det = detcore.dense_logdet(mat).value
    if tol is not None:
        det2 = detcore.dense_logdet(_nystrom_matrix(spec, 2 * m)).value
        if abs(det2 - det) > tol * max(1.0, abs(det2)):
            raise ConvergenceError(
                f"m={m} -> 2m changed det(I-K) by {abs(det2 - det):.2e} (> {tol})"
            )
    return float(det.real)


# -- arc symbols ---------------------------------------------------------------


def arc_indicator_coeffs(s, n, k_min, k_max):
    """Fourier coefficients of the indicator of the arc 2s/n <= theta <= 2pi - 2s/n:
    f_0 = 1 - 2s/(n pi), f_j = -sin(2 s j / n)/(pi j)."""
    if not 0 < s < n:
        raise ParameterError("need 0 < s < n")
    js = np.arange(k_min, k_max + 1)
    with np.errstate(invalid="ignore", divide="ignore"):
        vals = -np.sin(2.0 * s * js / n) / (np.pi * js)
    vals[js == 0] = 1.0 - 2.0 * s / (n * np.pi)
    return CoeffTable.from_array(vals.astype(complex), k_min)


def arc_fh_coeffs(alpha, beta, s, n, k_min, k_max, order=24):
    """Coefficients of F(z; n) = |z-1|^{2 alpha} z^beta e^{-i pi beta} restricted
    to the arc 2s/n <= theta <= 2pi - 2s/n (zero outside)."""
    if not 0 < s < n:
        raise ParameterError("need 0 < s < n")
    th0 = 2.0 * s / n
    k_abs = max(abs(k_min), abs(k_max))
    # endpoints are regular but the integrand steepens on the scale th0: grade
    nodes, weights = interval_rule(th0, 2.0 * np.pi - th0, 0.0, 0.0, order, k_abs)
    vals = (
        np.abs(2.0 * np.sin(0.5 * nodes)) ** (2.0 * complex(alpha).real)
        * np.exp(2j * complex(alpha).imag * np.log(np.abs(2.0 * np.sin(0.5 * nodes))))
        * np.exp(1j * complex(beta) * nodes)
        * np.exp(-1j * np.pi * complex(beta))
    )
    coeffs = project_fourier(vals, nodes, weights, k_min, k_max)
    return CoeffTable.from_array(coeffs, k_min)


# -- limits -------------------------------------------------------------------


def limit_check_sine(s, n_list, m=None):
    """D_n(arc indicator) against det(I - K_sine); one row per n."""
    det = fredholm_det(KernelSpec.sine(s), m)
    rows = []
    for n in n_list:
        coeffs = arc_indicator_coeffs(s, n, -(n - 1), n - 1)
        dn = float(toeplitz_det(coeffs, n).value.real)
        rows.append({"n": n, "toeplitz": dn, "fredholm": det, "residual": abs(dn - det)})
    return rows


def limit_check_ch(alpha, beta, s, n_list, m=None):
    """D_n(F(z; n))/D_n(F(z; infinity)) against det(I - K_ch)."""
    det = fredholm_det(KernelSpec.ch(alpha, beta, s), m)
    sym_inf = FHSymbol({}, [FHSingularity(0.0, alpha, beta)])
    rows = []
    for n in n_list:
        arc = arc_fh_coeffs(alpha, beta, s, n, -(n - 1), n - 1)
        full = sym_inf.fourier_coeffs(-(n - 1), n - 1)
        ratio = (toeplitz_det(arc, n) / toeplitz_det(full, n)).value
        rows.append(
            {"n": n, "ratio": float(ratio.real), "fredholm": det,
             "residual": abs(ratio - det)}
        )
    return rows


def limit_check_airy(s, n_list, m=None, dps=80):
    """Hankel determinant ratio for w = e^{-4xn} on [0, 1 + s (2n)^{-2/3}]
    against det(I - K_Airy); the ratio normalizes by the half-line determinant."""
    det = fredholm_det(KernelSpec.airy(s), m)
    rows = []
    for n in n_list:
        upper = 1.0 + s * (2.0 * n) ** (-2.0 / 3.0)
        if upper <= 0:
            raise ParameterError(f"arc endpoint 1 + s(2n)^(-2/3) <= 0 at n={n}")
        cut = MomentTable.from_exponential(4.0 * n, upper, 2 * n - 1, dps=dps)
        full = MomentTable.from_exponential(4.0 * n, None, 2 * n - 1, dps=dps)
        ratio = (hankel_det(cut, n) / hankel_det(full, n)).value
        rows.append(
            {"n": n, "ratio": float(ratio.real), "fredholm": det,
             "residual": abs(float(ratio.real) - det)}
        )
    return rows
