"""Power-law fits of peak extractable work versus chain size."""

from dataclasses import dataclass

import numpy as np

from .errors import NoConvergence, NonPositivePeak, SingularJacobian

REL_PARAM_TOL = 1e-10
MAX_HALVINGS = 60
MAX_STAGNANT = 8
RSS_TIE = 1.0 + 64 * np.finfo(float).eps


@dataclass(frozen=True)
class PeakSeries:
    sizes: np.ndarray
    peaks: np.ndarray

    def __post_init__(self):
        sizes = np.asarray(self.sizes, dtype=int)
        peaks = np.asarray(self.peaks, dtype=float)
        object.__setattr__(self, "sizes", sizes)
        object.__setattr__(self, "peaks", peaks)
        if sizes.ndim != 1 or sizes.size < 3 or sizes.size != peaks.size:
            raise ValueError("need at least 3 (size, peak) pairs of equal count")
        if not np.all(np.diff(sizes) > 0):
            raise ValueError("sizes must be strictly ascending")
        if not np.all(peaks > 0):
            raise NonPositivePeak("all peaks must be > 0 for a power-law fit")


@dataclass(frozen=True)
class PowerLawFit:
    a: float
    alpha: float
    sigma_a: float
    sigma_alpha: float
    rss: float


def _jacobian(n, a, alpha):
    col_a = n**alpha
    return np.column_stack([col_a, a * col_a * np.log(n)])


def _gn_step(n, a, alpha, r):
    # solved as a least-squares problem on the Jacobian itself rather than
    # through the normal equations: squaring the condition number turns the
    # Jt r cancellation noise into phantom steps orders of magnitude larger
    jac = _jacobian(n, a, alpha)
    if not np.all(np.isfinite(jac)):
        raise SingularJacobian("non-finite Jacobian")
    step, _, rank, _ = np.linalg.lstsq(jac, r, rcond=None)
    if rank < 2:
        raise SingularJacobian("rank-deficient Jacobian: collinear data")
    if not np.all(np.isfinite(step)):
        raise SingularJacobian("non-finite Gauss-Newton step")
    return step


def _rel_size(step, a, alpha):
    return max(
        abs(step[0]) / max(abs(a + step[0]), 1e-300),
        abs(step[1]) / max(abs(alpha + step[1]), 1e-300),
    )


def fit_power_law(series: PeakSeries, max_iterations=200) -> PowerLawFit:
    """Nonlinear least squares for E(N) = A * N^alpha, fit in linear space.

    Initialized from the log-log linear regression, then Gauss-Newton with
    step halving whenever a step would genuinely increase the residual;
    converges when the full proposed step falls below 1e-10 relative, then
    takes a few ungated steps to settle on the fixed point itself. The tie
    tolerance in the halving gate, the stagnation exit and the final polish
    all exist to keep the answer scale-equivariant: near the residual floor
    rss comparisons are ulp luck, and a purely gated loop parks a
    path-dependent ~1e-10 short of the minimizer.
    """
    n = series.sizes.astype(float)
    y = series.peaks

    ln_n = np.log(n)
    design = np.column_stack([ln_n, np.ones_like(ln_n)])
    (slope, intercept), *_ = np.linalg.lstsq(design, np.log(y), rcond=None)
    a, alpha = float(np.exp(intercept)), float(slope)

    r = y - a * n**alpha
    rss = float(r @ r)
    converged = False
    stagnant = 0
    for _ in range(max_iterations):
        step = _gn_step(n, a, alpha, r)

        # convergence is judged on the full proposed step: a halved step can
        # be tiny while the fixed point is still far away
        if _rel_size(step, a, alpha) < REL_PARAM_TOL:
            a, alpha = a + float(step[0]), alpha + float(step[1])
            converged = True
            break

        scale = 1.0
        improved = False
        for _ in range(MAX_HALVINGS):
            cand_a = a + scale * step[0]
            cand_alpha = alpha + scale * step[1]
            cand_r = y - cand_a * n**cand_alpha
            cand_rss = float(cand_r @ cand_r)
            # sub-noise increases count as ties: near the residual floor the
            # rss comparison is ulp luck, and rejecting there stalls the
            # iteration short of the fixed point
            if np.isfinite(cand_rss) and cand_rss <= rss * RSS_TIE:
                improved = True
                break
            scale /= 2
        if not improved:
            converged = True  # no descent direction left: at a local minimum
            break
        made_progress = cand_rss < rss * (1.0 - 1e-12)
        a, alpha, r, rss = cand_a, cand_alpha, cand_r, cand_rss
        if made_progress:
            stagnant = 0
        else:
            stagnant += 1
            if stagnant >= MAX_STAGNANT:
                converged = True  # rattling at the residual floor
                break
    if not converged:
        raise NoConvergence(f"no convergence after {max_iterations} iterations")

    # ungated finishing steps, applied only while strictly shrinking: they
    # contract onto the Gauss-Newton fixed point and stop at the noise floor
    prev_rel = 1e-6  # terminal basin only
    for _ in range(3):
        r = y - a * n**alpha
        if not np.any(r):
            break  # exact interpolation, nothing left to polish
        try:
            step = _gn_step(n, a, alpha, r)
        except SingularJacobian:
            break
        rel = _rel_size(step, a, alpha)
        if rel >= prev_rel:
            break
        a, alpha = a + float(step[0]), alpha + float(step[1])
        prev_rel = rel
    r = y - a * n**alpha
    rss = float(r @ r)

    jac = _jacobian(n, a, alpha)
    jtj = jac.T @ jac
    dof = n.size - 2
    s2 = rss / dof if dof > 0 else 0.0
    try:
        cov = s2 * np.linalg.inv(jtj)
    except np.linalg.LinAlgError as exc:
        raise SingularJacobian(str(exc)) from exc
    sigma = np.sqrt(np.clip(np.diag(cov), 0.0, None))
    return PowerLawFit(a=a, alpha=alpha, sigma_a=float(sigma[0]), sigma_alpha=float(sigma[1]), rss=rss)


def classify_scaling(fit: PowerLawFit, margin=0.02):
    """super_extensive / extensive / sub_extensive by distance of alpha from 1."""
    if not margin > 0:
        raise ValueError("margin must be > 0")
    if fit.alpha > 1 + margin:
        return "super_extensive"
    if fit.alpha < 1 - margin:
        return "sub_extensive"
    return "extensive"
