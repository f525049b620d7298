"""Escape-time pictures of dynamical and parameter planes.

The escape test is a half-plane test: an orbit point whose real part
exceeds the threshold has left for good (the next image would be
astronomically far right).  Pixels are retired from the iteration the
moment they pass the test, which also keeps every exponential evaluated
below overflow.  Counts record the first passing iterate, so refining
``max_iter`` never changes an already escaped pixel.

Images are 8 bit grayscale PNGs; a plain text sidecar next to the image
records every input that influenced the pixels.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from PIL import Image

from .errors import PreconditionError


class OverlayOutOfWindow(UserWarning):
    """An overlay polyline lies entirely outside the render window."""


@dataclass(frozen=True)
class Window:
    """Axis-aligned view rectangle bound to a pixel raster.

    The aspect ratios of the rectangle and the raster must agree, so one
    complex unit spans the same number of pixels in both directions.
    """

    re_min: float
    re_max: float
    im_min: float
    im_max: float
    px: int
    py: int

    def __post_init__(self) -> None:
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise PreconditionError("window rectangle is empty")
        if self.px <= 0 or self.py <= 0:
            raise PreconditionError("raster must have positive size")
        width = self.re_max - self.re_min
        height = self.im_max - self.im_min
        if abs(width / height - self.px / self.py) > 1e-9 * (self.px / self.py):
            raise PreconditionError(
                f"window aspect {width / height:.6g} does not match raster "
                f"aspect {self.px / self.py:.6g}; pixels would be anisotropic"
            )

    @classmethod
    def from_width(
        cls, center: complex, width: float, px: int, py: int
    ) -> "Window":
        """Window of the given width centered at a point, height chosen to
        keep pixels square."""
        if width <= 0:
            raise PreconditionError("width must be positive")
        height = width * py / px
        return cls(
            center.real - width / 2.0,
            center.real + width / 2.0,
            center.imag - height / 2.0,
            center.imag + height / 2.0,
            px,
            py,
        )

    def grid(self) -> np.ndarray:
        """Complex pixel centers, row 0 at the top of the window."""
        re = self.re_min + (self.re_max - self.re_min) * (
            (np.arange(self.px) + 0.5) / self.px
        )
        im = self.im_max - (self.im_max - self.im_min) * (
            (np.arange(self.py) + 0.5) / self.py
        )
        return re[np.newaxis, :] + 1j * im[:, np.newaxis]


@dataclass(frozen=True)
class RenderJob:
    """Everything that determines the pixels of one picture."""

    window: Window
    kind: str  # "dynamic" or "parameter"
    c: Optional[complex] = None
    max_iter: int = 60
    escape_real: float = 50.0

    def __post_init__(self) -> None:
        if self.kind not in ("dynamic", "parameter"):
            raise PreconditionError(f"unknown render kind {self.kind!r}")
        if self.kind == "dynamic" and self.c is None:
            raise PreconditionError("dynamic renders need a parameter c")
        if self.max_iter < 1:
            raise PreconditionError("max_iter must be at least one")
        if self.escape_real <= self.window.re_max:
            raise PreconditionError(
                "the escape half-plane must lie beyond the right window "
                "edge, or visible pixels would sit past the test"
            )


def escape_counts(job: RenderJob) -> np.ndarray:
    """First iterate at which each pixel's orbit passes the escape test,
    0 for orbits that never pass within max_iter.  Shape (py, px)."""
    grid = job.window.grid()
    if job.kind == "dynamic":
        z = grid.copy()
        cvals = np.full_like(grid, complex(job.c))
    else:
        z = grid.copy()
        cvals = grid
    counts = np.zeros(grid.shape, dtype=np.int32)
    active = np.ones(grid.shape, dtype=bool)
    for n in range(1, job.max_iter + 1):
        za = np.exp(z[active]) + cvals[active]
        z[active] = za
        esc = np.zeros_like(active)
        esc[active] = za.real > job.escape_real
        counts[esc] = n
        active &= ~esc
        if not active.any():
            break
    return counts


def shade(counts: np.ndarray, max_iter: int) -> np.ndarray:
    """Grayscale image from counts: unescaped black, fast escape bright."""
    out = np.zeros(counts.shape, dtype=np.uint8)
    esc = counts > 0
    scaled = 255 - (254 * (counts[esc].astype(np.int64) - 1)) // max_iter
    out[esc] = scaled.astype(np.uint8)
    return out


def _rasterize_overlays(
    window: Window,
    overlays: Sequence[Sequence[complex]],
    supersample: int,
) -> np.ndarray:
    """Coverage in [0, 1] per pixel for all overlay polylines."""
    w, h = window.px * supersample, window.py * supersample
    acc = np.zeros((h, w), dtype=np.float32)
    dre = window.re_max - window.re_min
    dim = window.im_max - window.im_min
    for path in overlays:
        pts = [complex(p) for p in path]
        if not pts:
            continue
        visible = any(
            window.re_min <= p.real <= window.re_max
            and window.im_min <= p.imag <= window.im_max
            for p in pts
        )
        if not visible:
            warnings.warn(
                OverlayOutOfWindow(
                    f"overlay with {len(pts)} points lies outside the window"
                )
            )
            continue
        for a, b in zip(pts, pts[1:] or pts):
            ax = (a.real - window.re_min) / dre * w
            ay = (window.im_max - a.imag) / dim * h
            bx = (b.real - window.re_min) / dre * w
            by = (window.im_max - b.imag) / dim * h
            steps = int(max(abs(bx - ax), abs(by - ay))) + 1
            for k in range(steps + 1):
                t = k / steps
                x = int(ax + (bx - ax) * t)
                y = int(ay + (by - ay) * t)
                if 0 <= x < w and 0 <= y < h:
                    acc[y, x] = 1.0
    ss = supersample
    return acc.reshape(window.py, ss, window.px, ss).mean(axis=(1, 3))


def compose(
    base: np.ndarray,
    window: Window,
    overlays: Sequence[Sequence[complex]],
    *,
    supersample: int = 3,
) -> np.ndarray:
    """Alpha-blend white overlay curves onto a grayscale image."""
    alpha = _rasterize_overlays(window, overlays, supersample)
    blended = (1.0 - alpha) * base.astype(np.float64) + alpha * 255.0
    return np.clip(np.rint(blended), 0, 255).astype(np.uint8)


def _sidecar_lines(job: RenderJob, overlays: Sequence[Sequence[complex]]):
    w = job.window
    lines = [
        f"kind={job.kind}",
        f"re_min={w.re_min:.17g}",
        f"re_max={w.re_max:.17g}",
        f"im_min={w.im_min:.17g}",
        f"im_max={w.im_max:.17g}",
        f"px={w.px}",
        f"py={w.py}",
        f"max_iter={job.max_iter}",
        f"escape_real={job.escape_real:.17g}",
        f"overlays={len(overlays)}",
    ]
    if job.c is not None:
        lines.insert(1, f"c={job.c.real:.17g}{job.c.imag:+.17g}i")
    return lines


def render(
    job: RenderJob,
    path: str,
    *,
    overlays: Sequence[Sequence[complex]] = (),
    supersample: int = 3,
) -> np.ndarray:
    """Write the PNG for the job plus a key=value sidecar at path + ".txt".

    Returns the raw escape counts so callers can inspect what was drawn.
    """
    counts = escape_counts(job)
    img = shade(counts, job.max_iter)
    if overlays:
        img = compose(img, job.window, overlays, supersample=supersample)
    Image.fromarray(img, mode="L").save(path, format="PNG")
    with open(path + ".txt", "w", encoding="utf-8") as fh:
        fh.write("\n".join(_sidecar_lines(job, overlays)) + "\n")
    return counts
