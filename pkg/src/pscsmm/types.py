"""Domain types for polarimetric scattering data.

A PolSAR pixel is a 2x2 complex scattering matrix; after coding it becomes a
sparse 4x4 real matrix. Everything here is an immutable value object, safe to
share read-only across workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple


@dataclass(frozen=True)
class ComplexValue:
    """One complex scattering coefficient, split into real/imaginary parts."""

    re: float
    im: float

    def __post_init__(self):
        object.__setattr__(self, "re", float(self.re))
        object.__setattr__(self, "im", float(self.im))

    def is_finite(self) -> bool:
        return math.isfinite(self.re) and math.isfinite(self.im)

    def l1_mass(self) -> float:
        """|re| + |im|; the total magnitude the coding must preserve."""
        return abs(self.re) + abs(self.im)


@dataclass(frozen=True)
class ScatteringMatrix:
    """2x2 complex scattering matrix [[hh, hv], [vh, vv]] for one pixel."""

    hh: ComplexValue
    hv: ComplexValue
    vh: ComplexValue
    vv: ComplexValue

    def entries(self) -> Tuple[Tuple[str, ComplexValue], ...]:
        """Entries in matrix layout order, tagged with their channel name."""
        return (("HH", self.hh), ("HV", self.hv), ("VH", self.vh), ("VV", self.vv))

    def is_finite(self) -> bool:
        return all(v.is_finite() for _, v in self.entries())

    def l1_mass(self) -> float:
        return sum(v.l1_mass() for _, v in self.entries())


#: Positions a 2x2 block may fill, one set per sign quadrant of (re, im).
_BLOCK_PATTERNS = (
    frozenset({(0, 0), (0, 1)}),  # re >= 0, im >= 0
    frozenset({(1, 0), (1, 1)}),  # re <  0, im <  0
    frozenset({(0, 0), (1, 1)}),  # re >= 0, im <  0
    frozenset({(0, 1), (1, 0)}),  # re <  0, im >= 0
)


@dataclass(frozen=True)
class PscMatrix:
    """Coded 4x4 real matrix, stored as a row-major tuple of 4 rows.

    Each 2x2 block holds the absolute real/imaginary parts of one scattering
    coefficient at sign-determined positions, so at most 2 entries per block
    (8 per matrix) are nonzero, every entry is >= 0, and each block's nonzero
    positions fit one of the four quadrant patterns. The constructor enforces
    all of that.
    """

    rows: Tuple[Tuple[float, float, float, float], ...]

    def __post_init__(self):
        if len(self.rows) != 4 or any(len(r) != 4 for r in self.rows):
            raise ValueError("PscMatrix requires exactly 4 rows of 4 entries")
        rows = tuple(tuple(float(v) for v in r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        for i in range(4):
            for j in range(4):
                v = rows[i][j]
                if not (math.isfinite(v) and v >= 0.0):
                    raise ValueError(f"entry ({i},{j}) must be finite and >= 0, got {v!r}")
        for bi in range(2):
            for bj in range(2):
                nz = {
                    (di, dj)
                    for di in range(2) for dj in range(2)
                    if rows[2 * bi + di][2 * bj + dj] != 0.0
                }
                if not any(nz <= pattern for pattern in _BLOCK_PATTERNS):
                    raise ValueError(
                        f"block ({bi},{bj}) does not match any quadrant pattern"
                    )

    def entry(self, i: int, j: int) -> float:
        return self.rows[i][j]

    def flat(self) -> Tuple[float, ...]:
        """All 16 entries, row-major."""
        return tuple(v for row in self.rows for v in row)

    def block(self, bi: int, bj: int) -> Tuple[Tuple[float, float], Tuple[float, float]]:
        """2x2 block at block-coordinates (bi, bj), each in {0, 1}."""
        r, c = 2 * bi, 2 * bj
        return (
            (self.rows[r][c], self.rows[r][c + 1]),
            (self.rows[r + 1][c], self.rows[r + 1][c + 1]),
        )

    def l1_mass(self) -> float:
        return sum(abs(v) for v in self.flat())

    def nonzero_count(self) -> int:
        return sum(1 for v in self.flat() if v != 0.0)


@dataclass(frozen=True)
class Sample:
    """One labeled pixel: scattering matrix, 0-based class index, optional (row, col)."""

    s: ScatteringMatrix
    label: int
    pixel: Optional[Tuple[int, int]] = None


@dataclass(frozen=True)
class Dataset:
    """Ordered labeled samples plus the class-name table they index.

    Labels are 0-based in memory; the on-disk format uses the 1-based class
    codes and shifts at the I/O boundary. `image_dims` is (height, width) of
    the scene grid when samples carry pixel positions.
    """

    samples: Tuple[Sample, ...]
    class_names: Tuple[str, ...]
    image_dims: Optional[Tuple[int, int]] = None

    @property
    def num_classes(self) -> int:
        return len(self.class_names)

    def __len__(self) -> int:
        return len(self.samples)


def validate_dataset(d: Dataset) -> list[str]:
    """Collect invariant violations; an empty list means the dataset is valid.

    Checks, per sample: all eight scattering components finite, label inside
    [0, K), and pixel position inside `image_dims` when both are present.
    Diagnostic only; never raises.
    """
    violations: list[str] = []
    if len(d.class_names) == 0:
        violations.append("class_names is empty")
    k = len(d.class_names)
    dims = d.image_dims
    if dims is not None and (dims[0] <= 0 or dims[1] <= 0):
        violations.append(f"image_dims {dims} is not a positive grid")
    for i, sample in enumerate(d.samples):
        for name, v in sample.s.entries():
            if not math.isfinite(v.re):
                violations.append(f"sample {i}: non-finite entry {name}.re")
            if not math.isfinite(v.im):
                violations.append(f"sample {i}: non-finite entry {name}.im")
        if not (0 <= sample.label < k):
            violations.append(f"sample {i}: label {sample.label} out of range for K={k}")
        if dims is not None and sample.pixel is not None:
            r, c = sample.pixel
            if not (0 <= r < dims[0] and 0 <= c < dims[1]):
                violations.append(f"sample {i}: pixel {sample.pixel} outside grid {dims}")
    return violations
