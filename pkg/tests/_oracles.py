"""Independent closed forms used as oracles by the tests.

Everything here is derived from textbook special-function identities and
elementary geometry, not from the code under test. Where a value is
transcribed as a literal, the derivation is stated next to it.
"""

from __future__ import annotations

import numpy as np
from scipy.integrate import dblquad, quad
from scipy.special import polygamma, sici


def sinc2_lattice_sum(y: float, half_width: int) -> float:
    """Sum of sinc^2(y - n) over integers |n| <= N, exactly.

    The full sum over all integers is 1 (the integer lattice is a Parseval
    frame for the unit band). The two tails are trigamma values:
    sum_{n>N} sinc^2(y-n) = sin^2(pi y)/pi^2 * psi_1(N+1-y), and the
    mirror image with y -> -y. Subtracting both tails from 1 gives the
    partial sum to machine precision.
    """
    n = int(half_width)
    s = np.sin(np.pi * y) ** 2 / np.pi ** 2
    return 1.0 - s * (polygamma(1, n + 1 - y) + polygamma(1, n + 1 + y))


def sinc2_integral(x: float) -> float:
    """Integral of sinc^2(t) = (sin(pi t)/(pi t))^2 over [0, x].

    By parts: pi * integral = Si(2 pi x) - sin^2(pi x)/(pi x).
    """
    if x == 0.0:
        return 0.0
    si, _ = sici(2.0 * np.pi * x)
    return (si - np.sin(np.pi * x) ** 2 / (np.pi * x)) / np.pi


def pw_l2_tail(r: float) -> float:
    """Exact L2 tail of the unit-band sinc kernel outside a radius-r ball.

    The kernel section at any x has unit L2 norm and the tail only
    depends on r by translation invariance: 1 - 2 * integral_0^r sinc^2.
    """
    return 1.0 - 2.0 * sinc2_integral(r)


def gaussian_l2_tail(r: float) -> float:
    """L2 tail of the one-mode Gaussian state kernel outside radius r.

    |k(z, w)|^2 integrated against the weighted measure is a Gaussian in
    the distance; the tail outside radius r is (2/pi) exp(-r^2).
    """
    return (2.0 / np.pi) * np.exp(-r * r)


def poly_profile_tail(r: float, sigma: float) -> float:
    """Tail integral of (1 + t^2)^(-2 sigma) against shell length in 1d.

    In one dimension the shell derivative is the constant 2, so the tail
    is 2 * I_n(r) with I_n(r) = integral_r^inf (1+t^2)^(-n) dt and
    n = 2 sigma. For integer n the standard reduction
    I_{m+1}(r) = -r / (2m (1+r^2)^m) + (2m-1)/(2m) * I_m(r),
    I_1(r) = pi/2 - arctan(r), gives an elementary closed form that is
    independent of any quadrature routine.
    """
    n = 2.0 * sigma
    if abs(n - round(n)) > 1e-12 or n < 1:
        val, _ = quad(lambda t: 2.0 * (1.0 + t * t) ** (-n), r, np.inf)
        return val
    val = np.pi / 2.0 - np.arctan(r)
    for m in range(1, int(round(n))):
        val = -r / (2.0 * m * (1.0 + r * r) ** m) + (2.0 * m - 1.0) \
            / (2.0 * m) * val
    return 2.0 * val


def poly_envelope_tail(r: float, sigma: float) -> float:
    """Tail of the decay envelope (1 + t)^(-2 sigma) against shell length
    in 1d: 2 (1+r)^(1 - 2 sigma) / (2 sigma - 1), for 2 sigma > 1.
    """
    assert 2.0 * sigma > 1.0
    return 2.0 * (1.0 + r) ** (1.0 - 2.0 * sigma) / (2.0 * sigma - 1.0)


def toeplitz_symbol_extrema(alpha: float):
    """Eigenvalue range of the sinc Gram on the lattice alpha * Z.

    G_{jk} = sinc(alpha (j - k)) is Toeplitz; its symbol is the
    2pi-periodization of (1/alpha) * indicator(|xi| <= pi alpha). A fine
    grid over one period gives the essential infimum and supremum, which
    bound (and in the infinite-lattice limit equal) the extreme
    eigenvalues. For 1 < alpha < 2: min = (2 - alpha)/alpha, max = 2/alpha.
    """
    xi = np.linspace(-np.pi, np.pi, 20001)
    total = np.zeros_like(xi)
    m_max = int(np.ceil(alpha)) + 2
    for m in range(-m_max, m_max + 1):
        total += (np.abs(xi + 2.0 * np.pi * m) <= np.pi * alpha).astype(float)
    total /= alpha
    return float(total.min()), float(total.max())


def euclidean_ball_measure(d: int, r: float) -> float:
    """Volume of the d-dimensional Euclidean ball of radius r."""
    from scipy.special import gamma
    return np.pi ** (d / 2.0) / gamma(d / 2.0 + 1.0) * r ** d


def hyperbolic_ball_measure(r: float) -> float:
    """Measure of a hyperbolic disc under dA / (pi y^2): 4 sinh^2(r/2).

    The classical hyperbolic area is 4 pi sinh^2(r/2); the library works
    with the measure divided by pi so that unit discs have measure of
    order one, hence no pi here.
    """
    return 4.0 * np.sinh(r / 2.0) ** 2


def hyperbolic_ball_measure_quad(r: float) -> float:
    """Same measure by direct double integration in the upper half-plane,
    centered at i, using the distance formula
    d((x1,y1),(x2,y2)) = arccosh(1 + ((x1-x2)^2 + (y1-y2)^2)/(2 y1 y2)).
    """
    def inside(y, x):
        c = 1.0 + (x * x + (y - 1.0) ** 2) / (2.0 * y)
        return 1.0 / (np.pi * y ** 2) if np.arccosh(max(c, 1.0)) < r else 0.0

    xr = np.sinh(r) * 1.1 + 0.1
    val, err = dblquad(inside, -xr, xr,
                       lambda x: np.exp(-r) * 0.5, lambda x: np.exp(r) * 2.0,
                       epsabs=1e-6)
    return val


def lattice_count_in_interval(step: float, center: float, r: float) -> int:
    """Number of points of step*Z strictly inside (center-r, center+r)."""
    lo = np.ceil((center - r) / step + 1e-12)
    hi = np.floor((center + r) / step - 1e-12)
    return max(int(hi - lo + 1), 0)


def gaussian_trace_density() -> float:
    """Diagonal of the normalized one-mode Gaussian state kernel: 2/pi."""
    return 2.0 / np.pi


def log_line_shell_ratio(r: float) -> float:
    """Outward unit-shell to ball ratio for the exponential-length line.

    Ball measure around 0 at radius r is 2(e^r - 1); the shell from r to
    r+1 has measure 2(e^(r+1) - e^r), so the ratio tends to e - 1 from
    above and never decays to zero.
    """
    return (np.exp(r + 1.0) - np.exp(r)) / (np.exp(r) - 1.0)
