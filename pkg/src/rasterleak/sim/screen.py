"""Screen parameterization: nominal profiles and per-instance fingerprints.

A profile holds the nominal geometry/timing shared by all screens of a model;
a fingerprint holds the small per-instance perturbations (gain shape over the
refresh cycle, carrier detune, refresh-rate offset) that make two physical
screens of the same model sound slightly different.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from ..errors import ParamError

GAIN_POINTS = 8


@dataclass(frozen=True)
class ScreenProfile:
    width_px: int
    height_px: int
    refresh_rate_hz: float
    carrier_hz: float
    blanking_fraction: float = 0.05

    def __post_init__(self):
        if self.height_px < 2:
            raise ParamError("screen needs at least 2 pixel rows")
        if self.width_px < 1:
            raise ParamError("screen width must be positive")
        if self.refresh_rate_hz <= 0 or self.carrier_hz <= 0:
            raise ParamError("refresh rate and carrier must be positive")
        if not 0 <= self.blanking_fraction < 0.2:
            raise ParamError("blanking_fraction must be in [0, 0.2)")


@dataclass(frozen=True)
class ScreenFingerprint:
    """Deterministic per-instance traits, derived entirely from ``seed``.

    ``gain_points`` are control points of a smooth positive gain over cycle
    phase [0, 1), interpolated piecewise-linearly and periodically.
    """

    seed: int
    gain_points: np.ndarray
    carrier_detune_hz: float
    refresh_offset_hz: float

    def __post_init__(self):
        pts = np.asarray(self.gain_points, dtype=np.float64)
        object.__setattr__(self, "gain_points", pts)
        if np.any(pts < 0.5) or np.any(pts > 2.0):
            raise ParamError("gain curve must stay within [0.5, 2.0]")
        if not -0.2 <= self.refresh_offset_hz <= 0.2:
            raise ParamError("refresh offset must be within [-0.2, 0.2] Hz")

    def gain(self, phase: np.ndarray) -> np.ndarray:
        """Evaluate the gain curve at cycle phases in [0, 1)."""
        k = len(self.gain_points)
        pts = np.append(self.gain_points, self.gain_points[0])
        return np.interp(np.asarray(phase) % 1.0 * k, np.arange(k + 1), pts)


def make_fingerprint(seed: int) -> ScreenFingerprint:
    """Derive a fingerprint from a seed: gain control points uniform in
    [0.8, 1.25] normalized to mean 1, detune in [-200, 200] Hz, refresh
    offset in [-0.05, 0.05] Hz."""
    rng = np.random.default_rng(seed)
    pts = rng.uniform(0.8, 1.25, GAIN_POINTS)
    pts = pts / pts.mean()
    detune = rng.uniform(-200.0, 200.0)
    offset = rng.uniform(-0.05, 0.05)
    return ScreenFingerprint(seed, pts, float(detune), float(offset))


def null_fingerprint() -> ScreenFingerprint:
    """Unit gain, no detune, no offset: the idealized nominal screen."""
    return ScreenFingerprint(-1, np.ones(GAIN_POINTS), 0.0, 0.0)


# Named presets standing in for the lab's screen inventory.  "ideal" variants
# zero the blanking interval so pattern frequencies land exactly on the
# rows-per-second arithmetic.
PROFILES = {
    "desk20": ScreenProfile(1440, 900, 60.0, 32000.0),
    "desk22": ScreenProfile(1680, 1050, 60.0, 32000.0),
    "desk22-ideal": ScreenProfile(1680, 1050, 60.0, 32000.0, blanking_fraction=0.0),
    "portrait22": ScreenProfile(1050, 1680, 60.0, 32000.0),
}


def get_profile(name: str) -> ScreenProfile:
    try:
        return PROFILES[name]
    except KeyError:
        raise ParamError(f"unknown profile {name!r}; choices: {sorted(PROFILES)}") from None


def with_blanking(profile: ScreenProfile, blanking_fraction: float) -> ScreenProfile:
    return replace(profile, blanking_fraction=blanking_fraction)
