"""Synthetic web-page frames for the distinguishing attacks.

Each class is a fixed seeded arrangement of grayscale blocks on a white
page; each trace perturbs one block's intensity, standing in for ads and
other dynamically-changing content.  The videochat frame is a distinct
full-bleed layout with a centered face-like blob.
"""

from __future__ import annotations

import numpy as np

from ..traceio import FrameImage
from ..sim.screen import ScreenProfile


def make_website_frame(profile: ScreenProfile, class_seed: int,
                       variant_seed: int = 0) -> FrameImage:
    h, w = profile.height_px, profile.width_px
    layout_rng = np.random.default_rng(class_seed)
    px = np.full((h, w), 255, np.uint8)
    n_rects = int(layout_rng.integers(8, 21))
    rects = []
    for _ in range(n_rects):
        rh = int(layout_rng.integers(h // 30, h // 4))
        r0 = int(layout_rng.integers(0, h - rh))
        cw = int(layout_rng.integers(w // 8, w // 2))
        c0 = int(layout_rng.integers(0, w - cw))
        shade = int(layout_rng.integers(0, 200))
        rects.append((r0, rh, c0, cw, shade))

    variant_rng = np.random.default_rng(variant_seed)
    dynamic = int(variant_rng.integers(0, n_rects))
    delta = int(variant_rng.integers(-60, 61))
    for i, (r0, rh, c0, cw, shade) in enumerate(rects):
        if i == dynamic:
            shade = int(np.clip(shade + delta, 0, 255))
        px[r0:r0 + rh, c0:c0 + cw] = shade
    return FrameImage(h, w, px)


def make_videochat_frame(profile: ScreenProfile, variant_seed: int = 0) -> FrameImage:
    h, w = profile.height_px, profile.width_px
    variant_rng = np.random.default_rng(variant_seed)
    px = np.full((h, w), 35, np.uint8)
    face = int(np.clip(185 + variant_rng.integers(-15, 16), 0, 255))
    fh, fw = h // 3, w // 4
    r0, c0 = (h - fh) // 2, (w - fw) // 2
    px[r0:r0 + fh, c0:c0 + fw] = face
    px[r0:r0 + fh // 4, c0:c0 + fw] = face - 60      # hair line
    px[h - h // 10:, :] = 70                         # control strip
    return FrameImage(h, w, px)
