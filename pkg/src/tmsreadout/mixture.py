"""Gaussian fits of projected readout shots and threshold classification."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares

from .errors import DomainError, FitError

MIN_POINTS = 100
HIST_BINS = 200


@dataclass(frozen=True)
class DoubleGaussianFit:
    """Two Gaussian components along one projected axis.

    By convention the ``g`` component is the one with the larger mean when the
    fit is unlabeled.  ``residual`` is the histogram least-squares cost (0 for
    labeled maximum-likelihood fits).
    """

    mu_g: float
    mu_e: float
    sigma_g: float
    sigma_e: float
    w_g: float = 0.5
    w_e: float = 0.5
    residual: float = 0.0
    labeled: bool = True

    @property
    def unresolved(self) -> bool:
        """Components overlap too much (or one is empty) to be told apart."""
        if abs(self.mu_g - self.mu_e) < (self.sigma_g + self.sigma_e) / 4:
            return True
        return min(self.w_g, self.w_e) < 0.02

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.mu_g + self.mu_e)


def normpdf(x, mu=0.0, sigma=1.0):
    u = (np.asarray(x) - mu) / sigma
    return np.exp(-0.5 * u * u) / (math.sqrt(2 * math.pi) * sigma)


def two_gauss_pdf(x, w, mu1, s1, mu2, s2):
    return w * normpdf(x, mu1, s1) + (1 - w) * normpdf(x, mu2, s2)


def _labeled_fit(x: np.ndarray, labels: np.ndarray) -> DoubleGaussianFit:
    labels = np.asarray(labels)
    xg, xe = x[labels == "g"], x[labels == "e"]
    if xg.size < 2 or xe.size < 2:
        raise DomainError("labeled fit needs at least two shots of each state")
    n = xg.size + xe.size
    return DoubleGaussianFit(
        float(xg.mean()), float(xe.mean()), float(xg.std()), float(xe.std()),
        xg.size / n, xe.size / n, 0.0, True,
    )


def _moment_init(x: np.ndarray):
    m = x.mean()
    lo, hi = x[x < m], x[x >= m]
    if lo.size < 2 or hi.size < 2:
        s = x.std() or 1.0
        return [0.5, m + s, s, m - s, s]
    return [hi.size / x.size, hi.mean(), hi.std() or x.std(), lo.mean(), lo.std() or x.std()]


def fit_double_gaussian(values, labels=None, init=None, bins: int = HIST_BINS,
                        max_nfev: int = 2000) -> DoubleGaussianFit:
    """Fit two Gaussians to 1-D projected shots.

    With ``labels`` (``'g'``/``'e'`` per shot) each state gets its own
    maximum-likelihood Gaussian.  Without labels a two-component mixture is
    fitted to a ``bins``-bin density histogram by nonlinear least squares,
    starting from a split at the sample mean unless ``init`` =
    ``(w_g, mu_g, sigma_g, mu_e, sigma_e)`` is given.
    """
    x = np.asarray(values, dtype=float).ravel()
    if x.size < MIN_POINTS:
        raise DomainError(f"need at least {MIN_POINTS} points, got {x.size}")
    if labels is not None:
        return _labeled_fit(x, labels)

    density, edges = np.histogram(x, bins=bins, density=True)
    centers = 0.5 * (edges[1:] + edges[:-1])
    span = edges[-1] - edges[0]
    p0 = list(init) if init is not None else _moment_init(x)
    smin = span / bins / 10
    p0[2], p0[4] = max(p0[2], 2 * smin), max(p0[4], 2 * smin)
    lower = [0.0, edges[0], smin, edges[0], smin]
    upper = [1.0, edges[-1], span, edges[-1], span]
    p0 = np.clip(p0, lower, upper)

    def resid(p):
        return two_gauss_pdf(centers, *p) - density

    res = least_squares(resid, p0, bounds=(lower, upper), max_nfev=max_nfev)
    w, m1, s1, m2, s2 = res.x
    if m1 < m2:
        w, m1, s1, m2, s2 = 1 - w, m2, s2, m1, s1
    fit = DoubleGaussianFit(float(m1), float(m2), float(s1), float(s2), float(w), float(1 - w),
                            float(2 * res.cost), False)
    if res.status <= 0:
        raise FitError(f"double-Gaussian fit did not converge: {res.message}", best=fit,
                       residual=fit.residual)
    return fit


def empirical_R(fit: DoubleGaussianFit) -> float:
    """Power SNR ``((mu_g - mu_e) / ((sigma_g + sigma_e)/2))**2``."""
    s = 0.5 * (fit.sigma_g + fit.sigma_e)
    if s <= 0:
        raise DomainError("sum of widths must be > 0")
    return ((fit.mu_g - fit.mu_e) / s) ** 2


def likelihood_threshold(fit: DoubleGaussianFit) -> float:
    """Crossing of the two weighted Gaussian densities between the means."""
    mg, me, sg, se = fit.mu_g, fit.mu_e, fit.sigma_g, fit.sigma_e
    wg, we = max(fit.w_g, 1e-300), max(fit.w_e, 1e-300)
    # log(wg N(x;mg,sg)) = log(we N(x;me,se)) -> a x^2 + b x + c = 0
    a = 1 / (2 * se**2) - 1 / (2 * sg**2)
    b = mg / sg**2 - me / se**2
    c = me**2 / (2 * se**2) - mg**2 / (2 * sg**2) + math.log(wg * se / (we * sg))
    if abs(a) < 1e-14 * max(abs(b), 1e-300):
        return -c / b
    disc = b * b - 4 * a * c
    if disc < 0:
        return fit.midpoint
    roots = [(-b + s * math.sqrt(disc)) / (2 * a) for s in (1, -1)]
    lo, hi = sorted((mg, me))
    inside = [t for t in roots if lo <= t <= hi]
    if inside:
        return inside[0]
    return min(roots, key=lambda t: abs(t - fit.midpoint))


def assignment_errors(values, labels, threshold: float, g_above: bool = True) -> tuple[float, float]:
    """``(P(e|g), P(g|e))`` for a hard threshold.

    Shots above ``threshold`` are assigned ``g`` when ``g_above``.
    """
    x = np.asarray(values, dtype=float).ravel()
    labels = np.asarray(labels).ravel()
    xg, xe = x[labels == "g"], x[labels == "e"]
    if xg.size == 0 or xe.size == 0:
        raise DomainError("fidelity needs shots prepared in both states")
    if g_above:
        return float(np.mean(xg <= threshold)), float(np.mean(xe > threshold))
    return float(np.mean(xg > threshold)), float(np.mean(xe <= threshold))


def empirical_fidelity(values, labels, threshold: float | None = None,
                       method: str = "midpoint", fit: DoubleGaussianFit | None = None) -> float:
    """``F = 1 - [P(g|e) + P(e|g)]/2`` from labeled projected shots.

    The threshold defaults to the midpoint of the per-state fitted means;
    ``method="likelihood"`` uses the density crossing instead.
    """
    x = np.asarray(values, dtype=float).ravel()
    labels = np.asarray(labels).ravel()
    if np.unique(labels).size < 2:
        raise DomainError("fidelity needs shots prepared in both states")
    if fit is None:
        fit = _labeled_fit(x, labels)
    if threshold is None:
        if method == "midpoint":
            threshold = fit.midpoint
        elif method == "likelihood":
            threshold = likelihood_threshold(fit)
        else:
            raise ValueError(f"unknown threshold method {method!r}")
    p_eg, p_ge = assignment_errors(x, labels, threshold, g_above=fit.mu_g >= fit.mu_e)
    return 1.0 - 0.5 * (p_eg + p_ge)


def fidelity_stderr(F: float, n_per_state: int) -> float:
    """Binomial standard error of F for equal counts per state (pooled)."""
    err = 1.0 - F
    return math.sqrt(max(err * (1 - err), 0.0) / (2 * n_per_state))
