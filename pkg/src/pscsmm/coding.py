"""Polarimetric scattering coding: complex scattering data to sparse real matrices.

A complex value x+yi is placed into a 2x2 real block at positions decided by
the sign quadrant of (x, y); stored magnitudes are |x| and |y|, so every block
entry is nonnegative and each block carries at most two nonzeros. A full 2x2
scattering matrix codes block-wise into a 4x4 real matrix:

    quadrant of (x, y)      block
    x >= 0, y >= 0          [[x, y], [0, 0]]
    x <  0, y <  0          [[0, 0], [|x|, |y|]]
    x >= 0, y <  0          [[x, 0], [0, |y|]]
    x <  0, y >= 0          [[0, y], [|x|, 0]]

Zero components sit on the nonnegative side of each sign test; they produce
zero entries either way, so only the pattern label of an exact zero depends
on the convention. No scaling is applied: coding is a pure rearrangement, and
the sum of the 16 coded entries equals the sum of |re|+|im| over the four
coefficients.
"""

from __future__ import annotations

import math
from typing import List, Tuple

from .types import ComplexValue, Dataset, PscMatrix, ScatteringMatrix, validate_dataset

Block = Tuple[Tuple[float, float], Tuple[float, float]]


def encode_complex(z: ComplexValue) -> Block:
    """Code one complex value into its quadrant-patterned 2x2 block."""
    x, y = z.re, z.im
    if not math.isfinite(x):
        raise ValueError(f"non-finite real part {x!r}")
    if not math.isfinite(y):
        raise ValueError(f"non-finite imaginary part {y!r}")
    if x >= 0.0 and y >= 0.0:
        return ((x, y), (0.0, 0.0))
    if x < 0.0 and y < 0.0:
        return ((0.0, 0.0), (abs(x), abs(y)))
    if x >= 0.0:  # y < 0
        return ((x, 0.0), (0.0, abs(y)))
    return ((0.0, y), (abs(x), 0.0))  # x < 0, y >= 0


def encode_scattering(s: ScatteringMatrix) -> PscMatrix:
    """Code a full scattering matrix block-wise into a 4x4 PscMatrix.

    Block layout mirrors the scattering matrix: HH top-left, HV top-right,
    VH bottom-left, VV bottom-right.
    """
    blocks = {}
    for name, z in s.entries():
        try:
            blocks[name] = encode_complex(z)
        except ValueError as exc:
            raise ValueError(f"{name}: {exc}") from None
    hh, hv, vh, vv = blocks["HH"], blocks["HV"], blocks["VH"], blocks["VV"]
    return PscMatrix(rows=(
        hh[0] + hv[0],
        hh[1] + hv[1],
        vh[0] + vv[0],
        vh[1] + vv[1],
    ))


def encode_dataset(d: Dataset) -> List[Tuple[PscMatrix, int]]:
    """Code every sample of a valid dataset, preserving order.

    The dataset must pass `validate_dataset` first; the first violation is
    raised as the error so the offending sample index is named.
    """
    violations = validate_dataset(d)
    if violations:
        raise ValueError(f"invalid dataset: {violations[0]}")
    out: List[Tuple[PscMatrix, int]] = []
    for i, sample in enumerate(d.samples):
        try:
            out.append((encode_scattering(sample.s), sample.label))
        except ValueError as exc:  # unreachable after validation; belt and braces
            raise ValueError(f"sample {i}: {exc}") from None
    return out
