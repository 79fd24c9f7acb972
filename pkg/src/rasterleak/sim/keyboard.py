"""On-screen keyboard geometry and rendering.

The portrait layout mimics a phone-style keyboard on a rotated screen: each
QWERTY row runs as a vertical column of keys, so a top-row key and the
home-row key at the same index occupy identical pixel-row spans.  The bottom
letter column (z..m) is offset by half a key, giving it unique row spans, and
the space bar sits alone below everything.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ParamError
from ..traceio import FrameImage
from .screen import ScreenProfile

KEY_ROWS = ("qwertyuiop", "asdfghjkl", "zxcvbnm")
BORDER_PX = 2


@dataclass(frozen=True)
class KeyboardLayout:
    orientation: str  # "portrait" or "landscape"
    keys: dict        # char -> (row_start, row_end, col_start, col_end)
    screen: ScreenProfile

    def __post_init__(self):
        if self.orientation not in ("portrait", "landscape"):
            raise ParamError("orientation must be portrait or landscape")
        expected = set("abcdefghijklmnopqrstuvwxyz ")
        if set(self.keys) != expected:
            raise ParamError("layout must define 26 letters plus space")
        for ch, (r0, r1, c0, c1) in self.keys.items():
            if not (0 <= r0 < r1 <= self.screen.height_px and 0 <= c0 < c1 <= self.screen.width_px):
                raise ParamError(f"key {ch!r} rectangle outside the screen")


def make_portrait_layout(profile: ScreenProfile) -> KeyboardLayout:
    h, w = profile.height_px, profile.width_px
    kh = h // 14
    y0 = kh
    kw = w // 4
    gap = max(4, kh // 12)
    keys = {}
    for col, letters in enumerate(KEY_ROWS):
        x0 = w // 16 + col * kw
        y_off = y0 + (kh // 2 if col == 2 else 0)
        for i, ch in enumerate(letters):
            r0 = y_off + i * kh
            keys[ch] = (r0, r0 + kh - gap, x0, x0 + kw - gap)
    r0 = y0 + 11 * kh
    keys[" "] = (r0, r0 + kh - gap, w // 16, w // 16 + 3 * kw - gap)
    return KeyboardLayout("portrait", keys, profile)


def make_landscape_layout(profile: ScreenProfile) -> KeyboardLayout:
    h, w = profile.height_px, profile.width_px
    kw = w // 12
    kh = h // 10
    y0 = h - 5 * kh
    gap = max(4, kh // 12)
    keys = {}
    for row, letters in enumerate(KEY_ROWS):
        x0 = w // 16 + row * (kw // 2)
        r0 = y0 + row * kh
        for i, ch in enumerate(letters):
            c0 = x0 + i * kw
            keys[ch] = (r0, r0 + kh - gap, c0, c0 + kw - gap)
    r0 = y0 + 3 * kh
    keys[" "] = (r0, r0 + kh - gap, w // 4, w // 4 + 5 * kw - gap)
    return KeyboardLayout("landscape", keys, profile)


def render_keyboard_frame(layout: KeyboardLayout, pressed: str | None = None) -> FrameImage:
    """White background, white keys with 2-px black borders; the pressed key
    is filled solid black."""
    if pressed is not None and pressed not in layout.keys:
        raise ParamError(f"unknown key {pressed!r}")
    px = np.full((layout.screen.height_px, layout.screen.width_px), 255, np.uint8)
    b = BORDER_PX
    for ch, (r0, r1, c0, c1) in layout.keys.items():
        if ch == pressed:
            px[r0:r1, c0:c1] = 0
        else:
            px[r0:r1, c0:c1] = 0
            px[r0 + b:r1 - b, c0 + b:c1 - b] = 255
    return FrameImage(layout.screen.height_px, layout.screen.width_px, px)
