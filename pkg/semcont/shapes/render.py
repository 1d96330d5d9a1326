"""
Anti-aliased rasterization of centred triangles, circles and their morphs.

Each pixel is sampled on a 4x4 sub-grid; its value is the coverage-weighted
blend of fill and background levels.

The morph at parameter t is an equilateral triangle with rounded corners:
the Minkowski sum of a sharp triangle of circumradius t*R and a disk of radius
(1-t)*R. Its outer circumradius stays R, t=0 is exactly the circle and t=1
exactly the sharp triangle.
"""

import numpy as np

from semcont.config import settings
from semcont.errors import DataError
from semcont.schemas.shapes import ShapeKind, ShapeSpec

SUPERSAMPLE = 4
TRIANGLE_SYMMETRY_DEG = 120.0


def _sample_grid(size: int) -> tuple[np.ndarray, np.ndarray]:
    coords = (np.arange(size * SUPERSAMPLE, dtype=np.float64) + 0.5) / SUPERSAMPLE
    return np.meshgrid(coords, coords)  # (x, y), y grows downward


def triangle_vertices(spec: ShapeSpec, circumradius: float) -> np.ndarray:
    """(3, 2) vertex coordinates; rotation is reduced modulo the 120 degree symmetry."""
    rotation = spec.rotation_deg % TRIANGLE_SYMMETRY_DEG
    angles = np.radians(-90.0 + rotation + TRIANGLE_SYMMETRY_DEG * np.arange(3))
    cx, cy = spec.center
    return np.stack([cx + circumradius * np.cos(angles), cy + circumradius * np.sin(angles)], axis=1)


def _inside_triangle(x: np.ndarray, y: np.ndarray, vertices: np.ndarray) -> np.ndarray:
    centroid = vertices.mean(axis=0)
    inside = np.ones(x.shape, dtype=bool)
    for k in range(3):
        ax, ay = vertices[k]
        bx, by = vertices[(k + 1) % 3]
        side = (bx - ax) * (y - ay) - (by - ay) * (x - ax)
        orientation = (bx - ax) * (centroid[1] - ay) - (by - ay) * (centroid[0] - ax)
        inside &= side * np.sign(orientation) >= 0
    return inside


def _distance_to_triangle(x: np.ndarray, y: np.ndarray, vertices: np.ndarray) -> np.ndarray:
    """Euclidean distance to the filled triangle (0 inside)."""
    best = np.full(x.shape, np.inf)
    for k in range(3):
        a = vertices[k]
        b = vertices[(k + 1) % 3]
        edge = b - a
        t = ((x - a[0]) * edge[0] + (y - a[1]) * edge[1]) / float(edge @ edge)
        t = np.clip(t, 0.0, 1.0)
        best = np.minimum(best, np.hypot(x - (a[0] + t * edge[0]), y - (a[1] + t * edge[1])))
    return np.where(_inside_triangle(x, y, vertices), 0.0, best)


def shape_mask(spec: ShapeSpec, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Boolean membership of sample points (x, y) in the shape."""
    radius = spec.circumradius_px
    cx, cy = spec.center
    kind = spec.kind
    t = spec.morph_t
    if kind == ShapeKind.MORPH and t == 0.0:
        kind = ShapeKind.CIRCLE
    elif kind == ShapeKind.MORPH and t == 1.0:
        kind = ShapeKind.TRIANGLE

    if kind == ShapeKind.CIRCLE:
        return (x - cx) ** 2 + (y - cy) ** 2 <= radius ** 2
    if kind == ShapeKind.TRIANGLE:
        return _inside_triangle(x, y, triangle_vertices(spec, radius))
    corner = (1.0 - t) * radius
    core = triangle_vertices(spec, t * radius)
    return _distance_to_triangle(x, y, core) <= corner


def render(spec: ShapeSpec, size: int = settings.IMAGE_SIZE) -> np.ndarray:
    """
    Rasterize one shape.

    Args:
        spec: Shape, levels and geometry
        size: Canvas width and height in pixels

    Returns:
        (size, size) float32 image in [0, 1]

    Raises:
        DataError: the shape's circumscribed circle leaves the canvas

    Example:
        >>> img = render(ShapeSpec(kind=ShapeKind.CIRCLE, circumradius_px=16))
        >>> img.shape
        (64, 64)
    """
    cx, cy = spec.center
    r = spec.circumradius_px
    if cx - r < 0 or cy - r < 0 or cx + r > size or cy + r > size:
        raise DataError(f"shape with circumradius {r} at {spec.center} exceeds the {size}x{size} canvas")
    x, y = _sample_grid(size)
    mask = shape_mask(spec, x, y)
    coverage = mask.reshape(size, SUPERSAMPLE, size, SUPERSAMPLE).mean(axis=(1, 3))
    image = spec.background_level + (spec.fill_level - spec.background_level) * coverage
    return np.clip(image, 0.0, 1.0).astype(np.float32)
