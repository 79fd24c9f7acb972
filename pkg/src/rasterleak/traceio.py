"""Deterministic, bit-exact I/O: WAV traces, PGM frames, word lists, manifests.

Formats are intentionally minimal so outputs are diff-able and parseable from
any language:

* WAV: RIFF/WAVE, mono, little-endian; PCM 16-bit on write, PCM 16-bit or
  IEEE float 32-bit on read.
* PGM: binary ``P5``, maxval 255.
* Manifest: UTF-8 tab-separated lines ``path<TAB>label<TAB>screen_id`` followed
  by ``key=value`` columns; ``#`` starts a comment line.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyDictionaryError, FormatError, IoError, ParamError, UnsupportedError
from .signal import SampledSignal

_PCM = 1
_IEEE_FLOAT = 3


@dataclass(frozen=True)
class FrameImage:
    """Row-major 8-bit grayscale screen content (0 = black, 255 = white)."""

    height_px: int
    width_px: int
    pixels: np.ndarray  # shape (height_px, width_px), dtype uint8

    def __post_init__(self):
        px = np.asarray(self.pixels, dtype=np.uint8).reshape(self.height_px, self.width_px)
        object.__setattr__(self, "pixels", px)
        if self.height_px <= 0 or self.width_px <= 0:
            raise ParamError("frame dimensions must be positive")


@dataclass(frozen=True)
class ManifestEntry:
    trace_path: str
    label: str
    screen_id: str
    meta: dict = field(default_factory=dict)


@dataclass(frozen=True)
class DatasetManifest:
    entries: list

    def __post_init__(self):
        paths = [e.trace_path for e in self.entries]
        if len(set(paths)) != len(paths):
            raise ParamError("manifest trace paths must be unique")


def read_wav(path) -> SampledSignal:
    """Read a mono RIFF/WAVE file into a [-1, 1]-scaled signal.

    Raises FormatError on anything that is not a valid RIFF/WAVE container and
    UnsupportedError for multichannel files or sample formats other than
    16-bit PCM / 32-bit float.
    """
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc

    if len(data) < 12 or data[:4] != b"RIFF" or data[8:12] != b"WAVE":
        raise FormatError(f"{path}: not a RIFF/WAVE file")

    fmt = None
    frames = None
    pos = 12
    while pos + 8 <= len(data):
        cid = data[pos:pos + 4]
        (size,) = struct.unpack_from("<I", data, pos + 4)
        body = data[pos + 8:pos + 8 + size]
        if cid == b"fmt ":
            if size < 16:
                raise FormatError(f"{path}: truncated fmt chunk")
            fmt = struct.unpack_from("<HHIIHH", body, 0)
        elif cid == b"data":
            frames = body
        pos += 8 + size + (size & 1)  # chunks are word-aligned
    if fmt is None or frames is None:
        raise FormatError(f"{path}: missing fmt or data chunk")

    audio_format, channels, rate, _byte_rate, _block_align, bits = fmt
    if channels != 1:
        raise UnsupportedError(f"{path}: {channels} channels, only mono is supported")
    if audio_format == _PCM and bits == 16:
        raw = np.frombuffer(frames[:len(frames) // 2 * 2], dtype="<i2")
        # same scale factor as write_wav, so a round trip stays within half a
        # quantization step; -32768 (never produced by write_wav) clips to -1
        samples = np.clip(raw.astype(np.float64) / 32767.0, -1.0, 1.0)
    elif audio_format == _IEEE_FLOAT and bits == 32:
        raw = np.frombuffer(frames[:len(frames) // 4 * 4], dtype="<f4")
        samples = raw.astype(np.float64)
    else:
        raise UnsupportedError(f"{path}: format={audio_format} bits={bits} not supported")
    return SampledSignal(samples, float(rate))


def write_wav(signal: SampledSignal, path) -> None:
    """Write a signal as mono 16-bit PCM; out-of-range samples are clipped."""
    if len(signal.samples) == 0:
        raise IoError("refusing to write an empty signal")
    clipped = np.clip(signal.samples, -1.0, 1.0)
    pcm = np.round(clipped * 32767.0).astype("<i2")
    rate = int(round(signal.sample_rate_hz))
    data = pcm.tobytes()
    header = b"RIFF" + struct.pack("<I", 36 + len(data)) + b"WAVE"
    header += b"fmt " + struct.pack("<IHHIIHH", 16, _PCM, 1, rate, rate * 2, 2, 16)
    header += b"data" + struct.pack("<I", len(data))
    try:
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(data)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def read_pgm(path) -> FrameImage:
    """Read a binary PGM (``P5``, maxval 255) frame."""
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc

    if not data.startswith(b"P5"):
        raise FormatError(f"{path}: bad magic number, expected P5")
    # Header tokens may be separated by whitespace and '#' comments.
    tokens = []
    pos = 2
    while len(tokens) < 3 and pos < len(data):
        ch = data[pos:pos + 1]
        if ch == b"#":
            nl = data.find(b"\n", pos)
            pos = len(data) if nl < 0 else nl + 1
        elif ch.isspace():
            pos += 1
        else:
            end = pos
            while end < len(data) and not data[end:end + 1].isspace():
                end += 1
            tokens.append(data[pos:end])
            pos = end
    if len(tokens) < 3:
        raise FormatError(f"{path}: truncated PGM header")
    try:
        width, height, maxval = (int(t) for t in tokens)
    except ValueError as exc:
        raise FormatError(f"{path}: non-numeric PGM header") from exc
    if maxval != 255:
        raise UnsupportedError(f"{path}: maxval {maxval}, only 255 supported")
    pos += 1  # single whitespace after maxval
    body = data[pos:pos + width * height]
    if len(body) != width * height:
        raise FormatError(f"{path}: pixel data truncated")
    pixels = np.frombuffer(body, dtype=np.uint8).reshape(height, width)
    return FrameImage(height, width, pixels)


def write_pgm(image: FrameImage, path) -> None:
    header = f"P5\n{image.width_px} {image.height_px}\n255\n".encode("ascii")
    try:
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(image.pixels.tobytes())
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def read_wordlist(path) -> list:
    """Read one word per line: lowercased, deduplicated, order preserved."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    words = []
    seen = set()
    for line in lines:
        word = line.strip().lower()
        if word and word not in seen:
            seen.add(word)
            words.append(word)
    if not words:
        raise EmptyDictionaryError(f"{path}: no words")
    return words


def _escape(value: str) -> str:
    return value.replace("\\", "\\\\").replace("\t", "\\t").replace("\n", "\\n")


def _unescape(value: str) -> str:
    out = []
    it = iter(range(len(value)))
    i = 0
    while i < len(value):
        ch = value[i]
        if ch == "\\" and i + 1 < len(value):
            nxt = value[i + 1]
            out.append({"\\": "\\", "t": "\t", "n": "\n"}.get(nxt, nxt))
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def write_manifest(manifest: DatasetManifest, path) -> None:
    lines = ["# rasterleak dataset manifest: path\tlabel\tscreen_id\tkey=value..."]
    for e in manifest.entries:
        cols = [_escape(e.trace_path), _escape(e.label), _escape(e.screen_id)]
        cols += [f"{_escape(k)}={_escape(v)}" for k, v in e.meta.items()]
        lines.append("\t".join(cols))
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def read_manifest(path) -> DatasetManifest:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    entries = []
    for lineno, line in enumerate(lines, 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) < 3:
            raise FormatError(f"{path}:{lineno}: expected at least 3 columns")
        meta = {}
        for col in cols[3:]:
            if "=" not in col:
                raise FormatError(f"{path}:{lineno}: bad key=value column {col!r}")
            key, value = col.split("=", 1)
            meta[_unescape(key)] = _unescape(value)
        entries.append(ManifestEntry(_unescape(cols[0]), _unescape(cols[1]),
                                     _unescape(cols[2]), meta))
    return DatasetManifest(entries)
