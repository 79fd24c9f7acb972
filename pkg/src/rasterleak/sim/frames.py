"""Test-pattern frames and the per-row brightness profile that drives leakage."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ParamError
from ..traceio import FrameImage
from .screen import ScreenProfile


@dataclass(frozen=True)
class RowIntensityProfile:
    """Mean brightness per pixel row, in [0, 1], row 0 = top."""

    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=np.float64))


def row_profile(frame: FrameImage) -> RowIntensityProfile:
    """values[i] = mean(pixels of row i) / 255."""
    return RowIntensityProfile(frame.pixels.mean(axis=1) / 255.0)


def gen_zebra_frame(profile: ScreenProfile, period_px: int, kind: str = "square",
                    punctured: bool = False) -> FrameImage:
    """Horizontal stripe pattern with the given pixel period.

    ``square`` alternates full-black/full-white bands of period/2 rows;
    ``sinusoidal`` smooths the transition (row intensity
    round(127.5*(1+sin(2*pi*row/period)))).  Puncturing forces the middle
    third of the rows to black.
    """
    h, w = profile.height_px, profile.width_px
    if not 2 <= period_px <= h:
        raise ParamError(f"period {period_px} outside [2, {h}]")
    rows = np.arange(h) % period_px  # keeps the sine exactly periodic in floats
    if kind == "square":
        col = np.where(rows < period_px / 2, 0, 255).astype(np.uint8)
    elif kind == "sinusoidal":
        col = np.round(127.5 * (1 + np.sin(2 * np.pi * rows / period_px))).astype(np.uint8)
    else:
        raise ParamError(f"unknown zebra kind {kind!r}")
    if punctured:
        col = col.copy()
        col[h // 3:2 * h // 3] = 0
    return FrameImage(h, w, np.repeat(col[:, None], w, axis=1))


def solid_frame(profile: ScreenProfile, intensity: int = 255) -> FrameImage:
    if not 0 <= intensity <= 255:
        raise ParamError("intensity must be an 8-bit value")
    return FrameImage(profile.height_px, profile.width_px,
                      np.full((profile.height_px, profile.width_px), intensity, np.uint8))


def step_frame(profile: ScreenProfile, step_row: int) -> FrameImage:
    """White above step_row, black from it on; used to localize render times."""
    if not 0 <= step_row <= profile.height_px:
        raise ParamError("step_row outside the screen")
    px = np.full((profile.height_px, profile.width_px), 255, np.uint8)
    px[step_row:, :] = 0
    return FrameImage(profile.height_px, profile.width_px, px)


def blend_frames(a: FrameImage, b: FrameImage, alpha: float) -> FrameImage:
    """Pixelwise alpha*a + (1-alpha)*b, rounded back to 8 bits."""
    if a.pixels.shape != b.pixels.shape:
        raise ParamError("frames must share dimensions")
    mix = alpha * a.pixels.astype(np.float64) + (1 - alpha) * b.pixels.astype(np.float64)
    return FrameImage(a.height_px, a.width_px, np.round(mix).astype(np.uint8))
