"""Screen rendering and acoustic leakage simulation."""

from .channel import ChannelParams, apply_channel
from .frames import (RowIntensityProfile, blend_frames, gen_zebra_frame, row_profile,
                     solid_frame, step_frame)
from .keyboard import (KeyboardLayout, make_landscape_layout, make_portrait_layout,
                       render_keyboard_frame)
from .screen import (PROFILES, ScreenFingerprint, ScreenProfile, get_profile,
                     make_fingerprint, null_fingerprint, with_blanking)
from .synth import SimOutput, SimParams, predicted_cycle_envelope, simulate_trace
from .text import FONT_5X7, CharLayout, glyph_mask, make_char_layout, render_text_frame

__all__ = [
    "ChannelParams", "apply_channel",
    "RowIntensityProfile", "blend_frames", "gen_zebra_frame", "row_profile",
    "solid_frame", "step_frame",
    "KeyboardLayout", "make_landscape_layout", "make_portrait_layout",
    "render_keyboard_frame",
    "PROFILES", "ScreenFingerprint", "ScreenProfile", "get_profile",
    "make_fingerprint", "null_fingerprint", "with_blanking",
    "SimOutput", "SimParams", "predicted_cycle_envelope", "simulate_trace",
    "FONT_5X7", "CharLayout", "glyph_mask", "make_char_layout", "render_text_frame",
]
