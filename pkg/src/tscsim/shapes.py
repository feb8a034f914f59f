"""Parametric shape kernels and additive insertion into series.

Every simulator builds its class structure from the same five shapes. Each
shape is rendered on the grid ``t = i / (L - 1)`` for ``i = 0 .. L - 1`` and
then scaled so that its largest absolute sample equals the amplitude:

===================  ==========================================================
Triangle             ``1 - |2t - 1|``
Sine                 ``sin(2 pi t)``
Step                 ``-1`` for ``t < 0.5``, ``+1`` otherwise
Spike                ``-(1 - |2t - 1|)`` (the triangle flipped downwards)
HeadAndShoulders     three adjacent triangles over the thirds of ``L`` with
                     peaks ``1/2, 1, 1/2``; leftover samples go to the middle
===================  ==========================================================

The peak rescaling is a no-op whenever the grid hits the apex (odd-length
triangles, sines with ``L = 4k + 1``, ...). Shapes that are numerically zero
on the grid (a length 2 triangle, a length 3 sine) are returned as zeros.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from tscsim.errors import InvalidShapeError, PlacementError

__all__ = [
    "ShapeKind",
    "ShapeSpec",
    "render_shape",
    "insert_shape",
]

# sin(pi) and sin(2 pi) come out near 1e-16; snap those to exact zeros
_SNAP = 1e-12


class ShapeKind(Enum):
    """The five shape kernels, in their fixed enumeration order."""

    TRIANGLE = "triangle"
    SINE = "sine"
    STEP = "step"
    SPIKE = "spike"
    HEAD_AND_SHOULDERS = "head_and_shoulders"

    @classmethod
    def ordered(cls):
        return list(cls)


@dataclass(frozen=True)
class ShapeSpec:
    kind: ShapeKind
    length: int
    amplitude: float = 1.0


def _grid(length):
    if length == 1:
        return np.array([0.5])
    return np.arange(length) / (length - 1)


def _triangle(length, peak=1.0):
    t = _grid(length)
    return peak * (1.0 - np.abs(2.0 * t - 1.0))


def _head_and_shoulders(length):
    side = length // 3
    middle = length - 2 * side
    parts = [_triangle(side, 0.5), _triangle(middle, 1.0), _triangle(side, 0.5)]
    return np.concatenate([p for p in parts if p.size])


def _unit_shape(kind, length):
    if kind is ShapeKind.TRIANGLE:
        raw = _triangle(length)
    elif kind is ShapeKind.SPIKE:
        raw = -_triangle(length)
    elif kind is ShapeKind.SINE:
        raw = np.sin(2.0 * np.pi * _grid(length))
    elif kind is ShapeKind.STEP:
        raw = np.where(_grid(length) < 0.5, -1.0, 1.0)
    elif kind is ShapeKind.HEAD_AND_SHOULDERS:
        raw = _head_and_shoulders(length)
    else:
        raise InvalidShapeError(f"unknown shape kind {kind!r}")
    raw[np.abs(raw) < _SNAP] = 0.0
    peak = np.max(np.abs(raw))
    if peak > 0.0 and peak != 1.0:
        raw = raw / peak
    return raw


def render_shape(spec):
    """Render a shape as a float array of ``spec.length`` samples.

    Parameters
    ----------
    spec : ShapeSpec
        Kind, length (>= 2) and amplitude (> 0).

    Returns
    -------
    numpy.ndarray
        The rendered waveform.

    Raises
    ------
    InvalidShapeError
        If the length is below 2 or the amplitude is not positive.
    """
    length = int(spec.length)
    if length != spec.length or length < 2:
        raise InvalidShapeError(f"shape length must be an integer >= 2, got {spec.length}")
    if not spec.amplitude > 0 or not np.isfinite(spec.amplitude):
        raise InvalidShapeError(f"amplitude must be finite and > 0, got {spec.amplitude}")
    kind = ShapeKind(spec.kind)
    return spec.amplitude * _unit_shape(kind, length)


def insert_shape(series, shape, start):
    """Add ``shape`` onto a copy of ``series`` beginning at index ``start``.

    Raises
    ------
    PlacementError
        If the shape would run past either end of the series.
    """
    series = np.asarray(series, dtype=float)
    shape = np.asarray(shape, dtype=float)
    start = int(start)
    end = start + shape.shape[0]
    if start < 0 or end > series.shape[0]:
        raise PlacementError(
            f"shape of length {shape.shape[0]} at {start} does not fit in series "
            f"of length {series.shape[0]}"
        )
    out = series.copy()
    out[start:end] += shape
    return out
