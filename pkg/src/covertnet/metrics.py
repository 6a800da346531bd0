"""Closed-form covertness and capacity math.

Every link carries a figure of merit ``gamma`` with the property that a
link granted a per-symbol covertness share ``delta_i`` achieves
(linearized) capacity ``sqrt(delta_i * gamma)``.  The surrogate
covertness constraint on a link is quadratic in the per-mode powers:

    sum_m  c_m * P_m**2  <=  delta_i

where ``c_m`` is an adversary-side pressure coefficient.  Maximizing the
linear rate objective under that constraint gives

    gamma   = sum_m q_m**2 / c_m
    P_m     = sqrt(delta_i / gamma) * q_m / c_m
            = sqrt(delta_i) * kappa_m

with ``q_m`` the destination-side SNR per unit power.  Three variants of
``c_m`` are supported:

* ``known`` - exact adversary amplitudes; with several adversaries the
  per-mode pressures add coherently before squaring (fused detectors);
* ``linear-tau`` - statistically-uncertain adversary amplitudes enforced
  on average: the fourth moment ``tau`` replaces the fourth power of the
  amplitude (this variant reduces exactly to ``known`` when the
  uncertainty is zero and is the default for uncertain CSI);
* ``squared-tau`` - a reproduction variant that squares ``tau`` instead;
  it does not reduce to ``known`` at zero uncertainty.

Capacities are reported in nats per symbol.  A mode invisible to every
active adversary (``c_m == 0``) would be granted unbounded power by the
linearized model; such modes are excluded from ``gamma``, flagged as
"free", and capped at a configurable power when powers are materialized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .channels import fourth_moment_tau
from .errors import NonPositiveBudget, UnusableLink
from .model import NetworkInstance, distance

CSI_VARIANTS = ("known", "linear-tau", "squared-tau")

#: Default power cap for modes invisible to all active adversaries.
DEFAULT_FREE_MODE_POWER = 1.0


@dataclass(frozen=True)
class CovertBudget:
    """End-to-end covertness budget ``epsilon`` over blocklength ``n``."""

    epsilon: float
    n: int

    def __post_init__(self) -> None:
        if not (math.isfinite(self.epsilon) and self.epsilon > 0.0):
            raise NonPositiveBudget(f"epsilon {self.epsilon!r} must be finite and > 0")
        if int(self.n) != self.n or self.n < 1:
            raise NonPositiveBudget(f"blocklength {self.n!r} must be a positive integer")

    @property
    def delta(self) -> float:
        """Per-symbol budget, the exact quotient epsilon / n."""
        return self.epsilon / self.n


def per_symbol_delta(epsilon: float, n: int) -> float:
    """Per-symbol covertness budget: epsilon / n."""
    return CovertBudget(epsilon, n).delta


@dataclass(frozen=True)
class LinkMetric:
    """A link's figure of merit plus what is needed to rebuild its powers.

    ``per_mode_coeff`` holds the budget-free power factors: the optimal
    power on mode ``m`` under share ``delta_i`` is
    ``sqrt(delta_i) * per_mode_coeff[m]``.  ``gamma == 0`` iff every
    coefficient is 0 (the link is unusable for planning).  ``free_modes``
    lists modes invisible to all active adversaries but usable toward the
    destination; they carry no planned capacity and get a capped power.
    """

    src: int
    dst: int
    gamma: float
    per_mode_coeff: tuple[float, ...]
    free_modes: tuple[int, ...] = ()


def _resolve_willies(net: NetworkInstance, willies) -> list[int]:
    if willies is None:
        return [a.id for a in net.adversaries]
    ids = [willies] if isinstance(willies, int) else list(willies)
    for w in ids:
        if w not in net.adversary_by_id:
            raise ValueError(f"unknown adversary id {w}")
    if not ids:
        raise ValueError("at least one adversary is required")
    return ids


def _dest_snr_coeffs(net: NetworkInstance, src: int, dst: int) -> list[float]:
    """q_m: received SNR at the destination per unit transmit power."""
    if src == dst:
        raise ValueError("src and dst must differ")
    d = distance(net.node_by_id[src].pos, net.node_by_id[dst].pos)
    d_a = d**net.alpha
    dst_node = net.node_by_id[dst]
    out = []
    for m in range(net.num_modes):
        g = net.gains.friendly_gain(src, dst, m)
        out.append((g * g) / (dst_node.noise_var[m] * d_a))
    return out


def _pressure_coeffs(
    net: NetworkInstance,
    src: int,
    willies: Sequence[int],
    csi_variant: str,
    extended: bool,
) -> list[float]:
    """c_m: quadratic pressure of the covertness surrogate per mode."""
    if csi_variant not in CSI_VARIANTS:
        raise ValueError(f"unknown csi variant {csi_variant!r}; expected one of {CSI_VARIANTS}")
    multi = len(willies) > 1
    if multi and csi_variant != "known" and not extended:
        raise ValueError(
            "combining several adversaries with uncertain CSI requires extended=True"
        )
    if multi and csi_variant == "squared-tau":
        raise ValueError("the extended multi-adversary form is only defined for linear-tau")

    src_pos = net.node_by_id[src].pos
    out = []
    for m in range(net.num_modes):
        if csi_variant == "known" or (csi_variant == "linear-tau" and multi):
            # Fused detectors: per-adversary pressures add before squaring.
            # Under linear-tau the squared amplitude is replaced by the
            # square root of the fourth moment.
            acc = 0.0
            for w in willies:
                adv = net.adversary_by_id[w]
                entry = net.gains.adversary_csi(src, w, m)
                denom = adv.noise_var[m] * distance(src_pos, adv.pos) ** net.alpha
                if csi_variant == "known" or entry.sigma_err == 0.0:
                    amp_sq = entry.v * entry.v
                else:
                    amp_sq = math.sqrt(fourth_moment_tau(entry.v, entry.sigma_err))
                acc += amp_sq / denom
            out.append(acc * acc)
        else:
            (w,) = willies
            adv = net.adversary_by_id[w]
            entry = net.gains.adversary_csi(src, w, m)
            denom = adv.noise_var[m] * distance(src_pos, adv.pos) ** net.alpha
            if csi_variant == "linear-tau":
                if entry.sigma_err == 0.0:
                    a = (entry.v * entry.v) / denom
                    out.append(a * a)
                else:
                    tau = fourth_moment_tau(entry.v, entry.sigma_err)
                    out.append(tau / (denom * denom))
            else:  # squared-tau
                tau = fourth_moment_tau(entry.v, entry.sigma_err)
                a = tau / denom
                out.append(a * a)
    return out


def _metric_from_coeffs(
    src: int, dst: int, q: Sequence[float], c: Sequence[float]
) -> LinkMetric:
    terms = [(qm * qm) / cm if cm > 0.0 else 0.0 for qm, cm in zip(q, c)]
    gamma = 0.0
    for t in terms:
        gamma += t
    free = tuple(m for m, (qm, cm) in enumerate(zip(q, c)) if cm == 0.0 and qm > 0.0)
    if gamma > 0.0:
        root = math.sqrt(gamma)
        coeff = tuple(qm / (root * cm) if cm > 0.0 else 0.0 for qm, cm in zip(q, c))
    else:
        coeff = tuple(0.0 for _ in q)
    return LinkMetric(src=src, dst=dst, gamma=gamma, per_mode_coeff=coeff, free_modes=free)


def link_gamma_single(net: NetworkInstance, src: int, dst: int, willie: int) -> LinkMetric:
    """Figure of merit of one link against one exactly-known adversary.

    A mode the adversary cannot hear at all is excluded from the sum and
    flagged free; a mode the destination cannot hear contributes nothing.
    A link with no constrained usable mode gets ``gamma == 0`` (this is
    not an error; routing simply excludes the link).
    """
    q = _dest_snr_coeffs(net, src, dst)
    c = _pressure_coeffs(net, src, [willie], "known", extended=False)
    return _metric_from_coeffs(src, dst, q, c)


def link_gamma_multi(
    net: NetworkInstance, src: int, dst: int, willies: Iterable[int] | None = None
) -> LinkMetric:
    """Figure of merit against a set of fused adversaries (default: all).

    With a single adversary this is numerically identical to
    :func:`link_gamma_single`.
    """
    ids = _resolve_willies(net, willies)
    q = _dest_snr_coeffs(net, src, dst)
    c = _pressure_coeffs(net, src, ids, "known", extended=False)
    return _metric_from_coeffs(src, dst, q, c)


def link_metric_general(
    net: NetworkInstance,
    src: int,
    dst: int,
    willies: Iterable[int] | None = None,
    csi_variant: str = "known",
    extended: bool = False,
    modes: Iterable[int] | None = None,
) -> LinkMetric:
    """Per-link metric for any adversary-set / CSI-variant combination.

    ``modes`` restricts the link to a subset of modes (others are treated
    as unavailable), matching single-mode planning.
    """
    ids = _resolve_willies(net, willies)
    q = _dest_snr_coeffs(net, src, dst)
    c = _pressure_coeffs(net, src, ids, csi_variant, extended)
    if modes is not None:
        keep = set(int(m) for m in modes)
        q = [qm if m in keep else 0.0 for m, qm in enumerate(q)]
    return _metric_from_coeffs(src, dst, q, c)


def link_gamma_uncertain(
    net: NetworkInstance, src: int, dst: int, willie: int, variant: str = "linear-tau"
) -> LinkMetric:
    """Figure of merit when the adversary's gain is known only statistically.

    ``linear-tau`` (default) enforces the surrogate on average by
    substituting the amplitude fourth moment for the fourth power; at
    zero uncertainty it reduces exactly to :func:`link_gamma_single`.
    ``squared-tau`` squares the fourth moment instead (a reproduction
    variant without that reduction).
    """
    if variant not in ("linear-tau", "squared-tau"):
        raise ValueError(f"variant must be 'linear-tau' or 'squared-tau', got {variant!r}")
    q = _dest_snr_coeffs(net, src, dst)
    c = _pressure_coeffs(net, src, [willie], variant, extended=False)
    return _metric_from_coeffs(src, dst, q, c)


def optimal_mode_powers(
    metric: LinkMetric, delta_i: float, p_max: float = DEFAULT_FREE_MODE_POWER
) -> np.ndarray:
    """Materialize the optimal per-mode powers for a covertness share.

    ``P_m = sqrt(delta_i) * per_mode_coeff[m]``; substituting them into
    the link's surrogate yields exactly ``delta_i``.  Free modes get the
    cap ``p_max`` (they do not load the surrogate).
    """
    if metric.gamma <= 0.0:
        raise UnusableLink(f"link ({metric.src}, {metric.dst}) has gamma == 0")
    if not (math.isfinite(delta_i) and delta_i > 0.0):
        raise NonPositiveBudget(f"delta_i {delta_i!r} must be finite and > 0")
    root = math.sqrt(delta_i)
    powers = np.array([root * k for k in metric.per_mode_coeff], dtype=float)
    for m in metric.free_modes:
        powers[m] = p_max
    return powers


def link_capacity(delta_i: float, gamma: float) -> float:
    """Planned link capacity sqrt(delta_i * gamma), nats per symbol."""
    if delta_i < 0.0 or gamma < 0.0:
        raise ValueError("delta_i and gamma must be >= 0")
    return math.sqrt(delta_i * gamma)


def path_capacity(delta: float, gammas: Sequence[float]) -> float:
    """Capacity of a path under optimal budget splitting.

    Equals ``sqrt(delta / sum_i 1/gamma_i)``; for a single link this
    reduces to :func:`link_capacity`.
    """
    if not (math.isfinite(delta) and delta > 0.0):
        raise NonPositiveBudget(f"delta {delta!r} must be finite and > 0")
    if not gammas:
        raise ValueError("at least one link is required")
    inv = 0.0
    for g in gammas:
        if g <= 0.0:
            raise UnusableLink("every link on a path must have gamma > 0")
        inv += 1.0 / g
    return math.sqrt(delta / inv)


def allocate_delta(path_cap: float, gamma_i: float) -> float:
    """Covertness share that gives one link exactly the path capacity.

    ``delta_i = path_cap**2 / gamma_i``; summed along a route these shares
    reproduce the end-to-end budget, and every link's capacity equals the
    path capacity.
    """
    if gamma_i <= 0.0:
        raise UnusableLink("gamma_i must be > 0")
    return (path_cap * path_cap) / gamma_i


def covert_surrogate(
    net: NetworkInstance,
    src: int,
    powers: Sequence[float],
    willies: Iterable[int] | None = None,
    csi_variant: str = "known",
    extended: bool = False,
) -> float:
    """Left-hand side of the link covertness constraint for given powers.

    For the optimal powers of a share ``delta_i`` this evaluates to
    ``delta_i`` (up to rounding).  Quadratic in the powers.
    """
    ids = _resolve_willies(net, willies)
    c = _pressure_coeffs(net, src, ids, csi_variant, extended)
    if len(powers) != net.num_modes:
        raise ValueError(f"expected {net.num_modes} powers, got {len(powers)}")
    total = 0.0
    for cm, p in zip(c, powers):
        total += cm * (p * p)
    return total


def linearized_capacity(
    net: NetworkInstance, src: int, dst: int, powers: Sequence[float]
) -> float:
    """Small-signal rate objective sum_m q_m * P_m / 2, nats per symbol.

    Note the 1/2 in the objective: at the optimal powers this equals
    ``sqrt(delta_i * gamma) / 2``, i.e. half of :func:`link_capacity`,
    which follows the headline capacity convention without the factor.
    """
    q = _dest_snr_coeffs(net, src, dst)
    if len(powers) != net.num_modes:
        raise ValueError(f"expected {net.num_modes} powers, got {len(powers)}")
    total = 0.0
    for qm, p in zip(q, powers):
        total += qm * p / 2.0
    return total


def exact_gaussian_kl(x: float) -> float:
    """Exact per-sample divergence between noise-only and signal Gaussians.

    ``x`` is the received SNR at the detector.  Returns
    ``(1/2) * (1/(1+x) - 1 + ln(1+x))``.  For small ``x`` this behaves as
    ``x**2/4 - x**3/3 + ...``; a short series is used below 1e-3 so the
    quadratic approximation error stays within ``x**3`` for all inputs.
    Below 1e-10 the cubic correction is dropped entirely: there the
    series' own rounding noise would exceed ``x**3``, while the verbatim
    quadratic keeps the error at x**3/3 mathematically and at zero
    against the same-precision quadratic.
    """
    if x < 0.0:
        raise ValueError("received SNR must be >= 0")
    if x < 1e-10:
        return x * x / 4.0
    if x < 1e-3:
        # 0.5 * sum_{k>=2} (-1)^k x^k (k-1)/k, truncated
        return x * x * (0.25 + x * (-1.0 / 3.0 + x * (0.375 - x * 0.4)))
    return 0.5 * (math.log1p(x) - x / (1.0 + x))


def pinsker_bound(divergence: float) -> float:
    """Detector error-probability floor implied by a divergence bound.

    ``max(0, 1/2 - (1/2) * sqrt(D/2))`` for equally likely hypotheses.
    """
    if divergence < 0.0:
        raise ValueError("divergence must be >= 0")
    return max(0.0, 0.5 - 0.5 * math.sqrt(divergence / 2.0))


# ---------------------------------------------------------------------------
# Vectorized all-pairs tables (used by the routing algorithms and harness)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GammaTable:
    """All-pairs link coefficients for one adversary/CSI configuration.

    ``lin``   - (N, N, M) destination-side SNR per unit power (q);
    ``quad``  - (N, M) adversary-side pressure coefficients (c), which do
                not depend on the receiving node;
    ``terms`` - (N, N, M) per-mode contributions q**2/c (0 where c == 0);
    ``usable_to_dest`` - (N, N, M) bool, friendly amplitude > 0.
    """

    node_ids: tuple[int, ...]
    lin: np.ndarray
    quad: np.ndarray
    terms: np.ndarray
    usable_to_dest: np.ndarray

    @property
    def num_modes(self) -> int:
        return self.lin.shape[2]

    def _mode_list(self, modes) -> list[int]:
        if modes is None:
            return list(range(self.num_modes))
        out = sorted(int(m) for m in modes)
        if not out or out[0] < 0 or out[-1] >= self.num_modes:
            raise ValueError(f"mode subset {modes!r} out of range")
        return out

    def gamma_matrix(self, modes=None) -> np.ndarray:
        """(N, N) figure-of-merit matrix over a mode subset (default all)."""
        return self.terms[:, :, self._mode_list(modes)].sum(axis=2)

    def link_metric(self, src: int, dst: int, modes=None) -> LinkMetric:
        """Per-link metric consistent with the scalar constructors."""
        i = self.node_ids.index(src)
        j = self.node_ids.index(dst)
        active = self._mode_list(modes)
        gamma = 0.0
        for m in active:
            gamma += float(self.terms[i, j, m])
        coeff = [0.0] * self.num_modes
        free = []
        if gamma > 0.0:
            root = math.sqrt(gamma)
            for m in active:
                cm = float(self.quad[i, m])
                if cm > 0.0:
                    coeff[m] = float(self.lin[i, j, m]) / (root * cm)
        for m in active:
            if self.quad[i, m] == 0.0 and self.usable_to_dest[i, j, m]:
                free.append(m)
        return LinkMetric(
            src=src, dst=dst, gamma=gamma, per_mode_coeff=tuple(coeff), free_modes=tuple(free)
        )


def gamma_table(
    net: NetworkInstance,
    willies: Iterable[int] | None = None,
    csi_variant: str = "known",
    extended: bool = False,
) -> GammaTable:
    """Vectorized all-pairs version of the per-link metric constructors."""
    if csi_variant not in CSI_VARIANTS:
        raise ValueError(f"unknown csi variant {csi_variant!r}; expected one of {CSI_VARIANTS}")
    ids = _resolve_willies(net, willies)
    multi = len(ids) > 1
    if multi and csi_variant != "known" and not extended:
        raise ValueError(
            "combining several adversaries with uncertain CSI requires extended=True"
        )
    if multi and csi_variant == "squared-tau":
        raise ValueError("the extended multi-adversary form is only defined for linear-tau")

    arr = net.arrays
    widx = [arr.adv_index[w] for w in ids]

    d_alpha = arr.dist**net.alpha
    np.fill_diagonal(d_alpha, np.inf)
    # q[s, d, m] = fg**2 / (noise_dest * d_sd**alpha)
    lin = (arr.fg**2) / (arr.noise[None, :, :] * d_alpha[:, :, None])

    # denom[s, k, m] = noise_adv * d_sw**alpha for the selected adversaries
    e_alpha = arr.adv_dist[:, widx] ** net.alpha
    denom = arr.adv_noise[None, widx, :] * e_alpha[:, :, None]
    v = arr.adv_v[:, widx, :]
    sig = arr.adv_sig[:, widx, :]

    if csi_variant == "known" or multi:
        if csi_variant == "known":
            amp_sq = v**2
        else:  # extended linear-tau fusion: sqrt of the fourth moment
            amp_sq = np.where(sig == 0.0, v**2, np.sqrt(fourth_moment_tau(v, sig)))
        acc = (amp_sq / denom).sum(axis=1)
        quad = acc * acc
    elif csi_variant == "linear-tau":
        tau = fourth_moment_tau(v, sig)
        a = (v**2) / denom
        quad = np.where(sig == 0.0, a * a, tau / (denom * denom))[:, 0, :]
    else:  # squared-tau
        tau = fourth_moment_tau(v, sig)
        a = tau / denom
        quad = (a * a)[:, 0, :]

    terms = np.zeros_like(lin)
    np.divide(lin * lin, quad[:, None, :], out=terms, where=quad[:, None, :] > 0.0)
    return GammaTable(
        node_ids=arr.node_ids,
        lin=lin,
        quad=quad,
        terms=terms,
        usable_to_dest=arr.fg > 0.0,
    )
