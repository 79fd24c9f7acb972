"""Large-font text frames: fixed 5x7 glyph masks scaled by nearest neighbor,
stacked vertically (one character per slot) on a portrait screen."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ParamError
from ..traceio import FrameImage
from .screen import ScreenProfile

# Classic 5x7 uppercase set.  Every letter has a distinct per-row lit-pixel
# count vector (asserted in the tests), which is what the row-mean leakage
# model can actually distinguish.
FONT_5X7 = {
    "A": (".###.", "#...#", "#...#", "#####", "#...#", "#...#", "#...#"),
    "B": ("####.", "#...#", "#...#", "####.", "#...#", "#...#", "####."),
    "C": (".###.", "#...#", "#....", "#....", "#....", "#...#", ".###."),
    "D": ("####.", "#...#", "#...#", "#...#", "#...#", "#...#", "####."),
    "E": ("#####", "#....", "#....", "####.", "#....", "#....", "#####"),
    "F": ("#####", "#....", "#....", "####.", "#....", "#....", "#...."),
    "G": (".###.", "#...#", "#....", "#.###", "#...#", "#...#", ".####"),
    "H": ("#...#", "#...#", "#...#", "#####", "#...#", "#...#", "#...#"),
    "I": (".###.", "..#..", "..#..", "..#..", "..#..", "..#..", ".###."),
    "J": ("..###", "...#.", "...#.", "...#.", "...#.", "#..#.", ".##.."),
    "K": ("#...#", "#..#.", "#.#..", "##...", "#.#..", "#..#.", "#...#"),
    "L": ("#....", "#....", "#....", "#....", "#....", "#....", "#####"),
    "M": ("#...#", "##.##", "#.#.#", "#.#.#", "#...#", "#...#", "#...#"),
    "N": ("#...#", "#...#", "##..#", "#.#.#", "#..##", "#...#", "#...#"),
    "O": (".###.", "#...#", "#...#", "#...#", "#...#", "#...#", ".###."),
    "P": ("####.", "#...#", "#...#", "####.", "#....", "#....", "#...."),
    "Q": (".###.", "#...#", "#...#", "#...#", "#.#.#", "#..#.", ".##.#"),
    "R": ("####.", "#...#", "#...#", "####.", "#.#..", "#..#.", "#...#"),
    "S": (".####", "#....", "#....", ".###.", "....#", "....#", "####."),
    "T": ("#####", "..#..", "..#..", "..#..", "..#..", "..#..", "..#.."),
    "U": ("#...#", "#...#", "#...#", "#...#", "#...#", "#...#", ".###."),
    "V": ("#...#", "#...#", "#...#", "#...#", "#...#", ".#.#.", "..#.."),
    "W": ("#...#", "#...#", "#...#", "#.#.#", "#.#.#", "##.##", "#...#"),
    "X": ("#...#", "#...#", ".#.#.", "..#..", ".#.#.", "#...#", "#...#"),
    "Y": ("#...#", "#...#", ".#.#.", "..#..", "..#..", "..#..", "..#.."),
    "Z": ("#####", "....#", "...#.", "..#..", ".#...", "#....", "#####"),
}

GLYPH_COLS = 5
GLYPH_ROWS = 7


@dataclass(frozen=True)
class CharLayout:
    """Vertical character slots on a portrait screen."""

    slot_count: int
    slot_row_ranges: list  # list of (row_start, row_end), disjoint, ascending
    char_width_px: int

    def __post_init__(self):
        prev_end = -1
        for r0, r1 in self.slot_row_ranges:
            if r0 < prev_end or r1 <= r0:
                raise ParamError("slot ranges must be disjoint and ascending")
            prev_end = r1
        if len(self.slot_row_ranges) != self.slot_count:
            raise ParamError("slot_count does not match slot_row_ranges")


def make_char_layout(profile: ScreenProfile, slots: int = 6,
                     char_width_px: int = 175) -> CharLayout:
    scale = char_width_px // GLYPH_COLS
    glyph_h = GLYPH_ROWS * scale
    margin = profile.height_px // 20
    step = (profile.height_px - 2 * margin) // slots
    if step < glyph_h:
        raise ParamError("character slots do not fit on this screen")
    ranges = [(margin + i * step, margin + i * step + glyph_h) for i in range(slots)]
    return CharLayout(slots, ranges, char_width_px)


def glyph_mask(ch: str) -> np.ndarray:
    """Boolean 7x5 mask, True where ink is drawn."""
    try:
        rows = FONT_5X7[ch]
    except KeyError:
        raise ParamError(f"unsupported character {ch!r}") from None
    return np.array([[c == "#" for c in row] for row in rows], dtype=bool)


def render_text_frame(text: str, layout: CharLayout, profile: ScreenProfile) -> FrameImage:
    """Black-on-white uppercase text, one character per slot, starting at
    slot 0.  The empty string yields an all-white frame."""
    if len(text) > layout.slot_count:
        raise ParamError(f"text longer than {layout.slot_count} slots")
    scale = layout.char_width_px // GLYPH_COLS
    px = np.full((profile.height_px, profile.width_px), 255, np.uint8)
    x0 = (profile.width_px - layout.char_width_px) // 2
    if x0 < 0:
        raise ParamError("char_width_px wider than the screen")
    for i, ch in enumerate(text):
        mask = glyph_mask(ch)
        big = np.kron(mask, np.ones((scale, scale), dtype=bool))
        r0, _ = layout.slot_row_ranges[i]
        px[r0:r0 + big.shape[0], x0:x0 + big.shape[1]][big] = 0
    return FrameImage(profile.height_px, profile.width_px, px)
