"""Configuration schemes for linear arrays.

Three schemes: random binary phase shifting with closed-form statistics,
continuous phase compensation with grating-lobe and anomalous-reflection
predictors, and least-squares beam reshaping through simultaneous area and
phase weights.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ObservationPoint, sampling_sa_linear
from .linear import LinearRis, MimoSystem, TWO_PI, linear_field_multi


class ReshapeConditioningError(RuntimeError):
    """Raised when truncation discards too much of the desired pattern."""


# ---------------------------------------------------------------------------
# Random binary phase shifting
# ---------------------------------------------------------------------------

# The phase support is {0, pi} with probability 1/2 each, the zero-mean
# binary law: E[e^{j Omega}] = 0, which every statistical closed form below
# relies on.

def random_phase_draw(n: int, seed) -> np.ndarray:
    """n i.i.d. draws from {0, pi}, deterministic given the seed."""
    if n < 1:
        raise ValueError("need at least one draw")
    rng = np.random.default_rng(seed)
    return rng.integers(0, 2, size=n) * np.pi


def trial_rng(seed, trial_index: int) -> np.random.Generator:
    """Per-trial generator derived from (seed, index).

    Trials are independent of execution order and thread count.
    """
    return np.random.default_rng((seed, trial_index))


def random_phase_expected_power(ris: LinearRis, theta_i: float, theta_s: float,
                                r_s: float, amplitude: float = 1.0) -> float:
    """Expected |E^s|^2 over the random phase law at range r_s."""
    lam = ris.ctx.wavelength
    sa = sampling_sa_linear(ris.widths, theta_s, theta_i, lam)
    return float(abs(ris.ctx.coupling) ** 2 / r_s ** 2
                 * (amplitude * np.cos(theta_i)) ** 2
                 * np.sum((ris.areas / lam) ** 2 * np.asarray(sa) ** 2))


def random_phase_expected_rcs(ris: LinearRis, theta_i: float, theta_s: float) -> float:
    """Expected bistatic RCS; independent of theta_s for point-source cells."""
    lam = ris.ctx.wavelength
    sa = sampling_sa_linear(ris.widths, theta_s, theta_i, lam)
    return float(4.0 * np.pi * abs(ris.ctx.coupling) ** 2 * np.cos(theta_i) ** 2
                 * np.sum((ris.areas / lam) ** 2 * np.asarray(sa) ** 2))


def random_phase_miso_expected_power(ris: LinearRis, waves, r_s: float) -> float:
    """Expected |E^s|^2 under several incident waves (small-cell regime).

    Aggregates the waves into the per-cell excitation through the incident
    steering matrix, then applies the single-wave second-moment form.
    """
    lam = ris.ctx.wavelength
    n = np.arange(ris.n)
    e_hat = np.zeros(ris.n, dtype=complex)
    for w in waves:
        theta = w.direction.theta
        e_hat += (np.exp(1j * TWO_PI * n * ris.spacing * np.sin(theta) / lam)
                  * np.cos(theta) * w.amplitude)
    return float(abs(ris.ctx.coupling) ** 2 / r_s ** 2
                 * np.sum((ris.areas / lam) ** 2 * np.abs(e_hat) ** 2))


def monte_carlo_power(ris: LinearRis, waves, obs: ObservationPoint,
                      trials: int, seed) -> float:
    """Sample mean of |E^s|^2 over independent random phase draws."""
    total = 0.0
    for t in range(trials):
        phases = trial_rng(seed, t).integers(0, 2, size=ris.n) * np.pi
        total += abs(linear_field_multi(ris.with_phases(phases), waves, obs)) ** 2
    return total / trials


def monte_carlo_power_grid(ris: LinearRis, waves, r_s: float,
                           thetas, trials: int, seed,
                           return_stderr: bool = False):
    """Vectorized Monte Carlo mean of |E^s|^2 on a scatter-angle grid.

    With return_stderr=True also returns the standard error of the mean.
    """
    lam = ris.ctx.wavelength
    thetas = np.asarray(thetas, dtype=float)
    n = np.arange(ris.n)
    # per-cell complex gain before the configured phase, per scatter angle
    gains = np.zeros((ris.n, thetas.size), dtype=complex)
    for w in waves:
        theta_i = w.direction.theta
        sa = sampling_sa_linear(ris.widths[:, None], thetas[None, :], theta_i, lam)
        geom = np.exp(1j * TWO_PI * n[:, None] * ris.spacing
                      * (np.sin(theta_i) + np.sin(thetas)[None, :]) / lam)
        gains += (w.amplitude * np.cos(theta_i)
                  * (ris.areas[:, None] / lam) * sa * geom)
    gains *= ris.ctx.coupling * np.exp(-2j * np.pi * r_s / lam) / r_s
    acc = np.zeros(thetas.size)
    acc_sq = np.zeros(thetas.size)
    for t in range(trials):
        signs = 1.0 - 2.0 * trial_rng(seed, t).integers(0, 2, size=ris.n)
        sample = np.abs(signs @ gains) ** 2
        acc += sample
        acc_sq += sample ** 2
    mean = acc / trials
    if not return_stderr:
        return mean
    var = np.maximum(acc_sq / trials - mean ** 2, 0.0)
    stderr = np.sqrt(var / max(trials - 1, 1))
    return mean, stderr


# ---------------------------------------------------------------------------
# Phase compensation
# ---------------------------------------------------------------------------

def compensation_delta(theta_i: float, theta_s: float) -> float:
    return float(np.sin(theta_i) + np.sin(theta_s))


def phase_compensation(theta_i: float, theta_s: float, ris: LinearRis) -> np.ndarray:
    """Per-cell phases -2 pi (n-1) d Delta / wavelength (mod 2 pi).

    With these phases the steering-function magnitude at the design pair
    attains its global maximum |C| sum(A_n / wavelength).
    """
    delta = compensation_delta(theta_i, theta_s)
    n = np.arange(ris.n)
    return (-TWO_PI * n * ris.spacing * delta / ris.ctx.wavelength) % TWO_PI


def grating_lobes(delta: float, spacing: float, wavelength: float,
                  theta_i: float) -> list[float]:
    """Secondary coherent-sum angles for a compensated array, sorted ascending.

    Empty whenever spacing/wavelength <= 1/2: the sine shift per congruence
    index is then at least 2, which cannot stay inside the visible region
    alongside a principal lobe.
    """
    if spacing <= 0:
        raise ValueError("spacing must be positive")
    if spacing / wavelength <= 0.5:
        return []
    base = delta - np.sin(theta_i)
    k_max = int(np.ceil(4.0 * spacing / wavelength))
    lobes = []
    for k in range(-k_max, k_max + 1):
        if k == 0:
            continue
        s = base + k * wavelength / spacing
        if abs(s) <= 1.0:
            lobes.append(float(np.arcsin(s)))
    return sorted(lobes)


def anomalous_pairs(delta: float, spacing: float, wavelength: float,
                    theta_i_tilde: float) -> list[float]:
    """All scatter angles a compensated array steers theta_i_tilde towards.

    Includes the congruence index k = 0, so the design pair maps to itself;
    a fixed Delta acts as a generalized reflection law on every incident
    angle, not only the designed one.
    """
    if spacing <= 0:
        raise ValueError("spacing must be positive")
    base = delta - np.sin(theta_i_tilde)
    k_max = int(np.ceil(4.0 * spacing / wavelength))
    out = []
    for k in range(-k_max, k_max + 1):
        s = base + k * wavelength / spacing
        if abs(s) <= 1.0:
            out.append(float(np.arcsin(s)))
    return sorted(out)


def compensated_steering(ris: LinearRis, delta: float, theta_i: float,
                         theta_s: float) -> complex:
    """Steering function under compensation phases for a given Delta.

    Uses the geometric-series closed form when all areas are equal.
    """
    lam = ris.ctx.wavelength
    phi = TWO_PI * ris.spacing * (np.sin(theta_i) + np.sin(theta_s) - delta) / lam
    n = ris.n
    if np.all(ris.areas == ris.areas[0]):
        half = 0.5 * phi
        if abs(np.sin(half)) < 1e-15:
            series = n * np.exp(1j * (n - 1) * half)
        else:
            series = np.exp(1j * (n - 1) * half) * np.sin(n * half) / np.sin(half)
        return complex(ris.ctx.coupling * (ris.areas[0] / lam) * series)
    terms = (ris.areas / lam) * np.exp(1j * phi * np.arange(n))
    return complex(ris.ctx.coupling * np.sum(terms))


def compensated_rcs(ris: LinearRis, delta: float, theta_i: float,
                    theta_s: float) -> float:
    t = compensated_steering(ris, delta, theta_i, theta_s)
    return float(4.0 * np.pi * np.cos(theta_i) ** 2 * abs(t) ** 2)


# ---------------------------------------------------------------------------
# Beam reshaping
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ReshapeSolution:
    """Complex per-cell weights A_n e^{j Omega_n} plus solver diagnostics."""

    weights: np.ndarray
    residual: float
    rank: int
    discarded_fraction: float
    truncation_tol: float

    @property
    def areas(self) -> np.ndarray:
        return np.abs(self.weights)

    @property
    def phases(self) -> np.ndarray:
        return np.angle(self.weights)


def beam_reshape(sys: MimoSystem, incident_amplitudes, desired,
                 truncation_tol: float = 1e-8,
                 max_discard_fraction: float = 0.5) -> ReshapeSolution:
    """Least-squares weights making the scattered field approximate `desired`.

    Solves min_W || (beta/N) V_s (W o E_hat) - desired || through a truncated
    SVD of the scatter steering matrix; singular directions below
    truncation_tol * sigma_max are dropped. Cells whose aggregated incident
    excitation is numerically zero get zero weight.

    All observation points must share one reference radius. Raises
    ReshapeConditioningError when the dropped directions carry more than
    max_discard_fraction of ||desired||.
    """
    desired = np.asarray(desired, dtype=complex)
    if desired.shape != (sys.n_outputs,):
        raise ValueError(f"expected {sys.n_outputs} desired values, got {desired.shape}")
    if not np.allclose(sys.radii, sys.radii[0]):
        raise ValueError("beam reshaping needs a single reference radius")

    e_hat = sys.incident_projection(incident_amplitudes)
    n = sys.n_cells
    r_ref = sys.radii[0]
    beta = (n * sys.prefactor
            * np.exp(-2j * np.pi * r_ref / sys.wavelength) / r_ref)

    v_s = sys.v_scatter
    u, sing, vh = np.linalg.svd(v_s, full_matrices=False)
    keep = sing >= truncation_tol * sing[0]
    rank = int(np.count_nonzero(keep))

    proj = u.conj().T @ desired
    desired_norm = float(np.linalg.norm(desired))
    kept_norm = float(np.linalg.norm(proj[keep]))
    if desired_norm > 0.0:
        discarded = float(np.sqrt(max(desired_norm ** 2 - kept_norm ** 2, 0.0))
                          / desired_norm)
    else:
        discarded = 0.0
    if discarded > max_discard_fraction:
        raise ReshapeConditioningError(
            f"truncation discards {discarded:.3f} of the desired pattern "
            f"(limit {max_discard_fraction})")

    # minimizing coefficients c with V_s c ~= desired, c = (beta/N) W o E_hat
    coeff = vh.conj().T[:, keep] @ (proj[keep] / sing[keep])

    guard = 1e-12 * np.max(np.abs(e_hat), initial=0.0)
    weights = np.zeros(n, dtype=complex)
    live = np.abs(e_hat) > guard
    weights[live] = (n / beta) * coeff[live] / e_hat[live]

    achieved = (beta / n) * (v_s @ (weights * e_hat))
    residual = float(np.linalg.norm(achieved - desired))
    return ReshapeSolution(weights=weights, residual=residual, rank=rank,
                           discarded_fraction=discarded,
                           truncation_tol=truncation_tol)
