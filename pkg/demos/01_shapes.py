"""The five shape kernels and additive insertion.

Run: python demos/01_shapes.py
"""

import numpy as np

from tscsim.shapes import ShapeKind, ShapeSpec, insert_shape, render_shape

np.set_printoptions(precision=2, suppress=True, linewidth=100)

# Every kernel is drawn on t = i / (L - 1) and peaks at the amplitude.
for kind in ShapeKind.ordered():
    print(f"{kind.value:>20}: {render_shape(ShapeSpec(kind, 9, 1.0))}")

# Shapes are added onto a series, so the noise stays visible on top.
rng = np.random.default_rng(0)
noise = rng.normal(0.0, 0.1, 30)
series = insert_shape(noise, render_shape(ShapeSpec(ShapeKind.STEP, 10, 2.0)), start=12)
print("\nstep inserted at 12 on low noise:")
print(series)
