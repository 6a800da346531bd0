"""Random channel generation and the uncertain-gain fourth moment.

Two per-mode channel kinds are supported:

* ``constant`` - a fixed amplitude for every pair (a steady line-of-sight
  style mode);
* ``rayleigh`` - the amplitude of a circularly-symmetric unit-variance
  complex Gaussian, so the squared amplitude is exponential with mean 1.

Friendly receiver noise is drawn once per node per mode from a uniform
range (receiver quality is a node property); adversary noise is a fixed
per-mode value.

All sampling takes an explicit :class:`numpy.random.Generator`.  Callers
that need scheduling-independent reproducibility should back it with a
counter-based bit generator (``numpy.random.Philox``); the experiment
harness does exactly that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_KINDS = ("constant", "rayleigh")


@dataclass(frozen=True)
class ModeChannel:
    """Statistics of a single mode.

    ``gain`` is only used by the ``constant`` kind.  ``friendly_noise``
    is the (low, high) range of the uniform per-node noise variance;
    ``adversary_noise`` is the fixed adversary noise variance.
    """

    kind: str
    gain: float = 1.0
    friendly_noise: tuple[float, float] = (1.0, 4.0)
    adversary_noise: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown channel kind {self.kind!r}; expected one of {_KINDS}")
        if not (math.isfinite(self.gain) and self.gain >= 0.0):
            raise ValueError("constant gain must be finite and >= 0")
        low, high = self.friendly_noise
        if not (0.0 < low <= high):
            raise ValueError("friendly noise range must satisfy 0 < low <= high")
        if not self.adversary_noise > 0.0:
            raise ValueError("adversary noise variance must be > 0")


@dataclass(frozen=True)
class ChannelSpec:
    """Per-mode channel statistics for a generated network."""

    modes: tuple[ModeChannel, ...]

    def __post_init__(self) -> None:
        if not self.modes:
            raise ValueError("a channel spec needs at least one mode")

    @property
    def num_modes(self) -> int:
        return len(self.modes)

    @classmethod
    def two_mode_default(cls) -> "ChannelSpec":
        """Steady unit-gain mode plus a normalized scattering mode."""
        return cls(
            modes=(
                ModeChannel(kind="constant", gain=1.0),
                ModeChannel(kind="rayleigh"),
            )
        )


def rayleigh_amplitudes(rng: np.random.Generator, size=None) -> np.ndarray | float:
    """Amplitudes with unit mean-square: |CN(0, 1)| draws."""
    shape = (size, 2) if size is not None else 2
    parts = rng.normal(0.0, math.sqrt(0.5), size=shape)
    out = np.hypot(parts[..., 0], parts[..., 1])
    return out if size is not None else float(out)


def sample_gain(spec: ChannelSpec, mode: int, rng: np.random.Generator, size=None):
    """Draw amplitude gain(s) for one mode of ``spec``.

    The ``constant`` kind returns the configured amplitude exactly and
    consumes no randomness; ``rayleigh`` returns unit-mean-square draws.
    """
    mc = spec.modes[mode]
    if mc.kind == "constant":
        return np.full(size, mc.gain) if size is not None else mc.gain
    return rayleigh_amplitudes(rng, size)


def sample_uncertain_gain(
    v: float, sigma_err: float, rng: np.random.Generator, size=None
) -> np.ndarray | float:
    """Amplitude draws from the Rician uncertainty model.

    The complex gain has a known component ``v`` on one axis and
    independent zero-mean Gaussian error of std ``sigma_err`` on each
    axis; the returned value is its magnitude.
    """
    shape = (size, 2) if size is not None else 2
    err = rng.normal(0.0, 1.0, size=shape)
    out = np.hypot(v + sigma_err * err[..., 0], sigma_err * err[..., 1])
    return out if size is not None else float(out)


def fourth_moment_tau(v, sigma_err):
    """Fourth moment of the uncertain-gain amplitude.

    Returns ``8*sigma_err**4 + 8*sigma_err**2*v**2 + v**4``, which equals
    E[g**4] under the Rician uncertainty model.  With ``sigma_err == 0``
    this is exactly ``v**4`` (the perfect-knowledge limit).  Accepts
    scalars or numpy arrays.
    """
    return 8.0 * sigma_err**4 + 8.0 * (sigma_err**2 * v**2) + v**4
