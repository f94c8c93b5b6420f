"""Reproducible synthetic PolSAR datasets shaped like the 15-class field scene.

Samples for a class are its template mean plus independent Gaussian noise on
each of the eight real components, so `noise_sigma` against the fixed
template spread is the single separability knob. Template means are spread
over all four sign quadrants in every matrix entry (all coding branches get
exercised), and the three wheat classes share quadrant patterns on purpose
so they stay mutually confusable, like the real crops.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .types import ComplexValue, Dataset, Sample, ScatteringMatrix

DEFAULT_SEED = 1234
DEFAULT_NOISE_SIGMA = 0.25

#: name, (hh_re, hh_im, hv_re, hv_im, vh_re, vh_im, vv_re, vv_im)
FLEVOLAND_TEMPLATES: Tuple[Tuple[str, Tuple[float, ...]], ...] = (
    ("Water",      ( 1.8,  0.6, -0.4, -0.3, -0.4,  0.3,  1.5, -0.8)),
    ("Barely",     ( 1.2, -0.9,  0.5,  0.4, -0.7, -0.5, -1.1,  0.6)),
    ("Peas",       (-1.0,  0.8,  0.6, -0.5,  0.5,  0.7, -1.3, -0.7)),
    ("Stem beans", (-1.4, -0.6, -0.6,  0.5,  0.8, -0.6,  1.0,  0.9)),
    ("Beet",       ( 0.9,  1.1,  0.8,  0.6,  0.6,  0.4,  0.8, -1.2)),
    ("Forest",     (-0.8, -1.2, -0.9, -0.6, -0.6,  0.8, -0.9,  1.0)),
    ("Bare soil",  ( 1.5,  0.4,  0.4, -0.7, -0.9, -0.4,  1.2,  0.7)),
    ("Grasses",    ( 0.6, -1.3, -0.5,  0.6,  0.9,  0.5, -0.8, -0.9)),
    ("Rapeseed",   (-1.1,  0.5,  0.7,  0.7, -0.5, -0.8,  0.9, -1.0)),
    ("Lucerne",    (-0.7, -0.9,  0.9, -0.4,  0.4, -0.9, -1.2,  0.8)),
    ("Wheat2",     ( 1.0,  0.7, -0.7, -0.8,  0.7,  0.9,  1.1,  1.2)),
    ("Wheat1",     ( 1.4,  1.0, -1.0, -0.5,  1.0,  1.2,  1.5,  0.9)),
    ("Buildings",  ( 2.0, -1.5, -1.2,  1.0, -1.3, -1.1,  2.0,  1.5)),
    ("Potatoes",   ( 0.5,  0.9,  1.0, -0.9, -0.8,  0.6, -0.6, -1.4)),
    ("Wheat3",     ( 0.8,  0.85, -0.85, -0.65, 0.85, 1.05,  1.3,  1.05)),
)

#: per-class test pixel counts of the 15-class field scene
FLEVOLAND_TEST_COUNTS: Tuple[int, ...] = (
    12732, 7095, 9082, 5838, 9533, 17544, 4609, 6558,
    13363, 9681, 10659, 15886, 535, 15656, 21741,
)


@dataclass(frozen=True)
class ClassTemplate:
    """Class center scattering matrix plus per-component noise sigma."""

    name: str
    mean: ScatteringMatrix
    noise_sigma: float

    def __post_init__(self):
        if not (self.noise_sigma > 0 and math.isfinite(self.noise_sigma)):
            raise ValueError(f"noise_sigma must be > 0, got {self.noise_sigma}")
        if not self.mean.is_finite():
            raise ValueError(f"template {self.name!r} has a non-finite mean")


@dataclass(frozen=True)
class SynthConfig:
    """Shape of one generated experiment: class templates and sample counts."""

    templates: Tuple[ClassTemplate, ...]
    train_per_class: int
    test_counts: Tuple[int, ...]
    seed: int = DEFAULT_SEED
    image_dims: Optional[Tuple[int, int]] = None

    def __post_init__(self):
        if len(self.templates) == 0:
            raise ValueError("need at least one class template")
        if len(self.test_counts) != len(self.templates):
            raise ValueError(
                f"{len(self.test_counts)} test counts for {len(self.templates)} templates"
            )
        if self.train_per_class < 1:
            raise ValueError(f"train_per_class must be >= 1, got {self.train_per_class}")
        if any(n < 1 for n in self.test_counts):
            raise ValueError("every test count must be >= 1")


def _template_mean(values: Sequence[float]) -> ScatteringMatrix:
    hr, hi, xr, xi, vr, vi, wr, wi = values
    return ScatteringMatrix(
        hh=ComplexValue(hr, hi),
        hv=ComplexValue(xr, xi),
        vh=ComplexValue(vr, vi),
        vv=ComplexValue(wr, wi),
    )


def default_flevoland_shape(
    noise_sigma: float = DEFAULT_NOISE_SIGMA, seed: int = DEFAULT_SEED
) -> SynthConfig:
    """The 15-class experiment shape: 500 training samples per class and the
    per-class test counts of the reference field scene; test pixels are laid
    out in class bands on a 426x384 grid."""
    templates = tuple(
        ClassTemplate(name=name, mean=_template_mean(vals), noise_sigma=noise_sigma)
        for name, vals in FLEVOLAND_TEMPLATES
    )
    return SynthConfig(
        templates=templates,
        train_per_class=500,
        test_counts=FLEVOLAND_TEST_COUNTS,
        seed=seed,
        image_dims=(426, 384),
    )


def default_demo_shape(
    noise_sigma: float = DEFAULT_NOISE_SIGMA, seed: int = DEFAULT_SEED
) -> SynthConfig:
    """Compact 5-class shape for smoke tests and quick pipeline runs."""
    templates = tuple(
        ClassTemplate(name=name, mean=_template_mean(vals), noise_sigma=noise_sigma)
        for name, vals in FLEVOLAND_TEMPLATES[:5]
    )
    return SynthConfig(
        templates=templates,
        train_per_class=60,
        test_counts=(240,) * 5,
        seed=seed,
        image_dims=(20, 60),
    )


def _band_positions(counts: Sequence[int], dims: Tuple[int, int]) -> List[List[Tuple[int, int]]]:
    """Assign each class a full-width band of rows, filled row-major.

    Leftover cells in a class's final row stay unassigned (rendered as
    unlabeled). Raises when the bands cannot fit the grid.
    """
    height, width = dims
    rows_needed = sum(-(-n // width) for n in counts)
    if rows_needed > height:
        raise ValueError(
            f"patch layout impossible: {rows_needed} rows of width {width} "
            f"needed, grid is {height}x{width}"
        )
    out: List[List[Tuple[int, int]]] = []
    row = 0
    for n in counts:
        out.append([(row + i // width, i % width) for i in range(n)])
        row += -(-n // width)
    return out


def _draw_class(rng: np.random.Generator, template: ClassTemplate, count: int,
                positions: Optional[List[Tuple[int, int]]], label: int) -> List[Sample]:
    mean = np.array([
        template.mean.hh.re, template.mean.hh.im,
        template.mean.hv.re, template.mean.hv.im,
        template.mean.vh.re, template.mean.vh.im,
        template.mean.vv.re, template.mean.vv.im,
    ])
    comps = mean + template.noise_sigma * rng.standard_normal((count, 8))
    samples = []
    for i in range(count):
        c = comps[i]
        s = ScatteringMatrix(
            hh=ComplexValue(float(c[0]), float(c[1])),
            hv=ComplexValue(float(c[2]), float(c[3])),
            vh=ComplexValue(float(c[4]), float(c[5])),
            vv=ComplexValue(float(c[6]), float(c[7])),
        )
        pixel = positions[i] if positions is not None else None
        samples.append(Sample(s=s, label=label, pixel=pixel))
    return samples


def generate(cfg: SynthConfig) -> Tuple[Dataset, Dataset]:
    """Draw the (train, test) pair; byte-identical for identical configs.

    Training samples carry no pixel positions. When `image_dims` is present
    the test samples are laid out in per-class bands of that grid, so a
    predicted classification map can be rendered.
    """
    rng = np.random.default_rng(cfg.seed)
    names = tuple(t.name for t in cfg.templates)

    train: List[Sample] = []
    for label, template in enumerate(cfg.templates):
        train.extend(_draw_class(rng, template, cfg.train_per_class, None, label))

    positions = None
    if cfg.image_dims is not None:
        positions = _band_positions(cfg.test_counts, cfg.image_dims)
    test: List[Sample] = []
    for label, template in enumerate(cfg.templates):
        pos = positions[label] if positions is not None else None
        test.extend(_draw_class(rng, template, cfg.test_counts[label], pos, label))

    train_ds = Dataset(samples=tuple(train), class_names=names, image_dims=None)
    test_ds = Dataset(samples=tuple(test), class_names=names, image_dims=cfg.image_dims)
    return train_ds, test_ds
