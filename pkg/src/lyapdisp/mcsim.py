"""Monte Carlo estimates of the Lyapunov exponent and dispersion.

This is the stochastic cross-check on the series machinery: draw words of
fixed length k with i.i.d. uniform digits, track ln of the infinity norm of
the matrix product (renormalizing whenever it exceeds 2^100 so nothing
overflows), and report mean/k and variance/k with standard errors.  Digits
come from a counter-based Philox stream keyed by the seed; trial i always
consumes the same fixed slice of the stream, so results are reproducible
and independent of how trials would be partitioned across workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import catalog
from .catalog import MatrixFamily

__all__ = [
    "SimConfig",
    "SimResult",
    "simulate",
    "simulate_moment",
    "log_product_norms",
    "DegenerateProduct",
]

RENORM_THRESHOLD = 2.0**100
BOOTSTRAP_RESAMPLES = 200


class DegenerateProduct(ArithmeticError):
    """A product collapsed to exactly zero, so ln of its norm is -inf."""


@dataclass(frozen=True)
class SimConfig:
    family: str | MatrixFamily
    k: int
    trials: int
    seed: int = 20080318

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("word length k must be >= 1")
        if self.trials < 2:
            raise ValueError("need at least 2 trials")

    def resolve_family(self) -> MatrixFamily:
        if isinstance(self.family, MatrixFamily):
            return self.family
        return catalog.get_family(self.family)


@dataclass(frozen=True)
class SimResult:
    family: str
    k: int
    trials: int
    seed: int
    mean_log_norm: float
    var_log_norm: float
    lyap_hat: float
    sigma2_hat: float
    stderr_lyap: float
    stderr_sigma2: float
    degenerate_trials: int
    t: float | None = None
    moment_rate: float | None = None
    moment_stderr: float | None = None

    def to_json_dict(self) -> dict:
        out = {
            "schema_version": 1,
            "family": self.family,
            "k": self.k,
            "trials": self.trials,
            "seed": self.seed,
            "mean_log_norm": self.mean_log_norm,
            "var_log_norm": self.var_log_norm,
            "lyap_hat": self.lyap_hat,
            "sigma2_hat": self.sigma2_hat,
            "stderr_lyap": self.stderr_lyap,
            "stderr_sigma2": self.stderr_sigma2,
            "degenerate_trials": self.degenerate_trials,
        }
        if self.t is not None:
            out["t"] = self.t
            out["moment_rate"] = self.moment_rate
            out["moment_stderr"] = self.moment_stderr
        return out


def _digit_matrix(seed: int, trials: int, k: int) -> np.ndarray:
    """(trials, k) uint8 digits; trial i owns stream words [i*wpt, (i+1)*wpt)."""
    wpt = (k + 63) // 64
    raw = np.random.Philox(key=seed).random_raw(trials * wpt)
    raw = raw.reshape(trials, wpt)
    digits = np.empty((trials, k), dtype=np.uint8)
    for j in range(k):
        digits[:, j] = (raw[:, j >> 6] >> np.uint64(j & 63)) & np.uint64(1)
    return digits


def log_product_norms(config: SimConfig) -> tuple[np.ndarray, int]:
    """Per-trial ln of the infinity norm of D_{z_0} ... D_{z_{k-1}}.

    Returns (log norms over non-degenerate trials, number of degenerate
    trials whose product was exactly zero).
    """
    fam = config.resolve_family()
    stack = np.stack([fam.d0.to_float(), fam.d1.to_float()])
    digits = _digit_matrix(config.seed, config.trials, config.k)
    m = fam.dim
    prod = np.broadcast_to(np.eye(m), (config.trials, m, m)).copy()
    log_acc = np.zeros(config.trials)
    for j in range(config.k):
        prod = prod @ stack[digits[:, j]]
        norms = np.abs(prod).sum(axis=2).max(axis=1)
        big = norms > RENORM_THRESHOLD
        if big.any():
            prod[big] /= norms[big, None, None]
            log_acc[big] += np.log(norms[big])
    norms = np.abs(prod).sum(axis=2).max(axis=1)
    alive = norms > 0.0
    degenerate = int(config.trials - alive.sum())
    if degenerate == config.trials:
        raise DegenerateProduct("every trial product collapsed to zero")
    log_norms = log_acc[alive] + np.log(norms[alive])
    return log_norms, degenerate


def _base_result(config: SimConfig, log_norms: np.ndarray, degenerate: int) -> SimResult:
    n = log_norms.size
    mean = float(log_norms.mean())
    var = float(log_norms.var(ddof=1))
    centered = log_norms - mean
    m4 = float((centered**4).mean())
    var_of_var = max(m4 - var * var, 0.0) / n
    k = config.k
    return SimResult(
        family=config.resolve_family().name,
        k=k,
        trials=config.trials,
        seed=config.seed,
        mean_log_norm=mean,
        var_log_norm=var,
        lyap_hat=mean / k,
        sigma2_hat=var / k,
        stderr_lyap=math.sqrt(var / n) / k,
        stderr_sigma2=math.sqrt(var_of_var) / k,
        degenerate_trials=degenerate,
    )


def simulate(config: SimConfig) -> SimResult:
    """Estimate lambda and sigma^2 from independent random words."""
    log_norms, degenerate = log_product_norms(config)
    return _base_result(config, log_norms, degenerate)


def simulate_moment(config: SimConfig, t: float) -> SimResult:
    """Estimate the moment growth rate (1/k) ln E(norm^t).

    Moment estimates are heavy-tailed as |t| grows, so t is capped at 4 in
    magnitude, the sample mean of norm^t is taken in log space, and the
    standard error is a bootstrap over trials rather than a CLT formula.
    """
    if abs(t) > 4:
        raise ValueError("simulate_moment is limited to |t| <= 4")
    log_norms, degenerate = log_product_norms(config)
    base = _base_result(config, log_norms, degenerate)
    n = log_norms.size
    k = config.k

    def rate(values: np.ndarray) -> float:
        scaled = t * values
        peak = scaled.max()
        return float(
            (peak + np.log(np.exp(scaled - peak).sum()) - math.log(values.size))
            / k
        )

    estimate = rate(log_norms)
    rng = np.random.Generator(np.random.Philox(key=[config.seed, 0xB007]))
    resampled = np.empty(BOOTSTRAP_RESAMPLES)
    for b in range(BOOTSTRAP_RESAMPLES):
        resampled[b] = rate(log_norms[rng.integers(0, n, n)])
    stderr = float(resampled.std(ddof=1))
    return SimResult(
        family=base.family,
        k=base.k,
        trials=base.trials,
        seed=base.seed,
        mean_log_norm=base.mean_log_norm,
        var_log_norm=base.var_log_norm,
        lyap_hat=base.lyap_hat,
        sigma2_hat=base.sigma2_hat,
        stderr_lyap=base.stderr_lyap,
        stderr_sigma2=base.stderr_sigma2,
        degenerate_trials=base.degenerate_trials,
        t=t,
        moment_rate=estimate,
        moment_stderr=stderr,
    )
