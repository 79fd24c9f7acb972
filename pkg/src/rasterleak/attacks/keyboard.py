"""Key-class grouping for on-screen keyboard snooping.

Row-mean leakage cannot separate keys that span identical pixel rows, so in
portrait orientation such keys merge into one class (labelled home-row letter
first, e.g. "aq").  Landscape keeps every key its own class: whether
within-row structure is separable at all is the experiment's question, not
the grouping's.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ParamError
from ..sim.keyboard import KeyboardLayout


@dataclass(frozen=True)
class ClassGrouping:
    groups: list        # ordered group labels
    key_to_group: dict  # key char -> index into groups

    def __post_init__(self):
        if set(self.key_to_group.values()) != set(range(len(self.groups))):
            raise ParamError("every group needs at least one key")


def _label(members, layout: KeyboardLayout) -> str:
    if members == [" "]:
        return "space"
    ordered = sorted(members, key=lambda ch: -layout.keys[ch][2])
    return "".join(ordered)


def build_grouping(layout: KeyboardLayout) -> ClassGrouping:
    """Merge keys with identical row spans (portrait only); deterministic
    label order."""
    if layout.orientation == "portrait":
        spans = {}
        for ch, (r0, r1, _c0, _c1) in layout.keys.items():
            spans.setdefault((r0, r1), []).append(ch)
        labelled = [(_label(sorted(chs), layout), chs) for chs in spans.values()]
    else:
        labelled = [(_label([ch], layout), [ch]) for ch in layout.keys]
    labelled.sort(key=lambda item: item[0])
    groups = [label for label, _ in labelled]
    key_to_group = {}
    for idx, (_, members) in enumerate(labelled):
        for ch in members:
            key_to_group[ch] = idx
    return ClassGrouping(groups, key_to_group)
