"""Plain-text file formats and the PPM map renderer.

All formats are line-oriented text. Floats are written with Python's repr,
which round-trips bit-exactly; class labels are 1-based on disk and 0-based
in memory, shifted here and only here.

    psc-dataset v1 <n> <K> [<H> <W>]   dataset header, then K class-name
                                       lines, then n records of 9 or 11
                                       fields (8 components, label, row col)
    psc-encoded v1                     then records of 16 entries + label
    psc-labels v1 <n>                  then n predicted labels, one per line
    psc-smm-model v1 <m> <d>           then m*d W entries row-major, b, and
                                       the objective fields on one line
    psc-smm-ovr v1 <K>                 then K binary model blocks, then K
                                       class names, one per line
"""

from __future__ import annotations

from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .machine import BinaryModel, ObjectiveSpec
from .multiclass import MulticlassModel
from .types import ComplexValue, Dataset, PscMatrix, Sample, ScatteringMatrix

PathLike = Union[str, Path]


class FormatError(ValueError):
    """Malformed file content; message carries the offending line number."""


def _fmt(x: float) -> str:
    return repr(float(x))


def _parse_float(token: str, lineno: int, what: str) -> float:
    try:
        return float(token)
    except ValueError:
        raise FormatError(f"line {lineno}: {what} is not a number: {token!r}") from None


def _parse_int(token: str, lineno: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise FormatError(f"line {lineno}: {what} is not an integer: {token!r}") from None


# ---------------------------------------------------------------------------
# dataset files

def write_dataset(d: Dataset, path: PathLike) -> None:
    lines = []
    header = f"psc-dataset v1 {len(d.samples)} {len(d.class_names)}"
    if d.image_dims is not None:
        header += f" {d.image_dims[0]} {d.image_dims[1]}"
    lines.append(header)
    lines.extend(d.class_names)
    for sample in d.samples:
        s = sample.s
        fields = [
            _fmt(s.hh.re), _fmt(s.hh.im), _fmt(s.hv.re), _fmt(s.hv.im),
            _fmt(s.vh.re), _fmt(s.vh.im), _fmt(s.vv.re), _fmt(s.vv.im),
            str(sample.label + 1),
        ]
        if sample.pixel is not None:
            fields.extend([str(sample.pixel[0]), str(sample.pixel[1])])
        lines.append(" ".join(fields))
    Path(path).write_text("\n".join(lines) + "\n", newline="\n")


def read_dataset(path: PathLike) -> Dataset:
    text = Path(path).read_text()
    lines = text.splitlines()
    if not lines:
        raise FormatError("line 1: empty file")
    header = lines[0].split()
    if len(header) not in (4, 6) or header[0] != "psc-dataset" or header[1] != "v1":
        raise FormatError(f"line 1: malformed header: {lines[0]!r}")
    n = _parse_int(header[2], 1, "sample count")
    k = _parse_int(header[3], 1, "class count")
    dims: Optional[Tuple[int, int]] = None
    if len(header) == 6:
        dims = (_parse_int(header[4], 1, "height"), _parse_int(header[5], 1, "width"))
    if n < 0 or k < 1:
        raise FormatError(f"line 1: invalid counts n={n} K={k}")
    if len(lines) < 1 + k + n:
        raise FormatError(f"line {len(lines)}: file ends early, expected {1 + k + n} lines")
    class_names = tuple(lines[1 : 1 + k])
    samples = []
    for i in range(n):
        lineno = 1 + k + i + 1
        fields = lines[1 + k + i].split()
        if len(fields) not in (9, 11):
            raise FormatError(
                f"line {lineno}: expected 9 or 11 fields, got {len(fields)}"
            )
        vals = [_parse_float(t, lineno, f"field {j + 1}") for j, t in enumerate(fields[:8])]
        label = _parse_int(fields[8], lineno, "label")
        if not (1 <= label <= k):
            raise FormatError(f"line {lineno}: label {label} out of range 1..{k}")
        pixel = None
        if len(fields) == 11:
            pixel = (
                _parse_int(fields[9], lineno, "row"),
                _parse_int(fields[10], lineno, "col"),
            )
        s = ScatteringMatrix(
            hh=ComplexValue(vals[0], vals[1]),
            hv=ComplexValue(vals[2], vals[3]),
            vh=ComplexValue(vals[4], vals[5]),
            vv=ComplexValue(vals[6], vals[7]),
        )
        samples.append(Sample(s=s, label=label - 1, pixel=pixel))
    return Dataset(samples=tuple(samples), class_names=class_names, image_dims=dims)


# ---------------------------------------------------------------------------
# encoded-matrix files

def write_encoded(encoded: Sequence[Tuple[PscMatrix, int]], path: PathLike) -> None:
    lines = ["psc-encoded v1"]
    for mat, label in encoded:
        fields = [_fmt(v) for v in mat.flat()]
        fields.append(str(label + 1))
        lines.append(" ".join(fields))
    Path(path).write_text("\n".join(lines) + "\n", newline="\n")


def read_encoded(path: PathLike) -> List[Tuple[PscMatrix, int]]:
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0].split() != ["psc-encoded", "v1"]:
        got = lines[0] if lines else ""
        raise FormatError(f"line 1: malformed header: {got!r}")
    out = []
    for i, line in enumerate(lines[1:], start=2):
        fields = line.split()
        if len(fields) != 17:
            raise FormatError(f"line {i}: expected 17 fields, got {len(fields)}")
        vals = [_parse_float(t, i, f"entry {j + 1}") for j, t in enumerate(fields[:16])]
        label = _parse_int(fields[16], i, "label")
        if label < 1:
            raise FormatError(f"line {i}: label {label} out of range (1-based on disk)")
        rows = tuple(tuple(vals[r * 4 : r * 4 + 4]) for r in range(4))
        try:
            mat = PscMatrix(rows=rows)
        except ValueError as exc:
            raise FormatError(f"line {i}: {exc}") from None
        out.append((mat, label - 1))
    return out


# ---------------------------------------------------------------------------
# predicted-label files

def write_labels(labels: Sequence[int], path: PathLike, method: Optional[str] = None) -> None:
    """One 1-based label per line; the optional method tag names the classifier."""
    header = f"psc-labels v1 {len(labels)}"
    if method:
        if any(ch.isspace() for ch in method):
            raise ValueError(f"method tag must be a single token, got {method!r}")
        header += f" {method}"
    lines = [header]
    lines.extend(str(int(label) + 1) for label in labels)
    Path(path).write_text("\n".join(lines) + "\n", newline="\n")


def read_labels(path: PathLike) -> Tuple[List[int], Optional[str]]:
    lines = Path(path).read_text().splitlines()
    if not lines:
        raise FormatError("line 1: empty file")
    header = lines[0].split()
    if len(header) not in (3, 4) or header[0] != "psc-labels" or header[1] != "v1":
        raise FormatError(f"line 1: malformed header: {lines[0]!r}")
    n = _parse_int(header[2], 1, "label count")
    method = header[3] if len(header) == 4 else None
    if len(lines) - 1 != n:
        raise FormatError(f"line {len(lines)}: expected {n} labels, found {len(lines) - 1}")
    out = []
    for i, line in enumerate(lines[1:], start=2):
        label = _parse_int(line.strip(), i, "label")
        if label < 1:
            raise FormatError(f"line {i}: label {label} out of range (1-based on disk)")
        out.append(label - 1)
    return out, method


# ---------------------------------------------------------------------------
# model files

def _binary_model_lines(model: BinaryModel, spec: ObjectiveSpec) -> List[str]:
    m, d = model.shape
    lines = [f"psc-smm-model v1 {m} {d}"]
    lines.extend(_fmt(v) for v in model.w.ravel())
    lines.append(_fmt(model.b))
    lines.append(f"{spec.variant} {_fmt(spec.gamma)} {_fmt(spec.tau)} {_fmt(spec.c)}")
    return lines


def _parse_binary_model(lines: List[str], start: int) -> Tuple[BinaryModel, ObjectiveSpec, int]:
    """Parse one model block beginning at `start` (0-based); returns the next index."""
    lineno = start + 1
    if start >= len(lines):
        raise FormatError(f"line {lineno}: missing model header")
    header = lines[start].split()
    if len(header) != 4 or header[0] != "psc-smm-model" or header[1] != "v1":
        raise FormatError(f"line {lineno}: malformed model header: {lines[start]!r}")
    m = _parse_int(header[2], lineno, "row count")
    d = _parse_int(header[3], lineno, "column count")
    if m < 1 or d < 1:
        raise FormatError(f"line {lineno}: invalid shape {m}x{d}")
    need = m * d + 2
    if start + 1 + need > len(lines):
        raise FormatError(f"line {len(lines)}: model block ends early")
    entries = [
        _parse_float(lines[start + 1 + i].strip(), start + 2 + i, "W entry")
        for i in range(m * d)
    ]
    b = _parse_float(lines[start + 1 + m * d].strip(), start + 2 + m * d, "bias")
    spec_line = start + 3 + m * d  # 1-based
    spec_fields = lines[spec_line - 1].split()
    if len(spec_fields) != 4:
        raise FormatError(f"line {spec_line}: expected 'variant gamma tau c'")
    spec = ObjectiveSpec(
        variant=spec_fields[0],
        gamma=_parse_float(spec_fields[1], spec_line, "gamma"),
        tau=_parse_float(spec_fields[2], spec_line, "tau"),
        c=_parse_float(spec_fields[3], spec_line, "c"),
    )
    model = BinaryModel(w=np.array(entries).reshape(m, d), b=b)
    return model, spec, start + 1 + need


def write_binary_model(model: BinaryModel, spec: ObjectiveSpec, path: PathLike) -> None:
    Path(path).write_text("\n".join(_binary_model_lines(model, spec)) + "\n", newline="\n")


def read_binary_model(path: PathLike) -> Tuple[BinaryModel, ObjectiveSpec]:
    lines = Path(path).read_text().splitlines()
    model, spec, end = _parse_binary_model(lines, 0)
    if end != len(lines):
        raise FormatError(f"line {end + 1}: trailing content after model block")
    return model, spec


def write_multiclass_model(mc: MulticlassModel, path: PathLike) -> None:
    lines = [f"psc-smm-ovr v1 {mc.num_classes}"]
    for model in mc.models:
        lines.extend(_binary_model_lines(model, mc.spec))
    lines.extend(mc.class_names)
    Path(path).write_text("\n".join(lines) + "\n", newline="\n")


def read_multiclass_model(path: PathLike) -> MulticlassModel:
    lines = Path(path).read_text().splitlines()
    if not lines:
        raise FormatError("line 1: empty file")
    header = lines[0].split()
    if len(header) != 3 or header[0] != "psc-smm-ovr" or header[1] != "v1":
        raise FormatError(f"line 1: malformed header: {lines[0]!r}")
    k = _parse_int(header[2], 1, "class count")
    if k < 2:
        raise FormatError(f"line 1: need at least 2 classes, got {k}")
    models = []
    specs = []
    at = 1
    for _ in range(k):
        model, spec, at = _parse_binary_model(lines, at)
        models.append(model)
        specs.append(spec)
    if len(lines) - at != k:
        raise FormatError(f"line {len(lines)}: expected {k} class names, found {len(lines) - at}")
    names = tuple(lines[at : at + k])
    if any(s != specs[0] for s in specs[1:]):
        raise FormatError("line 1: binary models disagree on the objective spec")
    return MulticlassModel(
        models=tuple(models),
        class_names=names,
        spec=specs[0],
        input_shape=models[0].shape,
    )


# ---------------------------------------------------------------------------
# classification-map rendering

#: Fixed 15-class palette (RGB); class index i maps to DEFAULT_PALETTE[i].
DEFAULT_PALETTE: Tuple[Tuple[int, int, int], ...] = (
    (0, 114, 178),    # blue
    (230, 159, 0),    # orange
    (0, 158, 115),    # green
    (204, 121, 167),  # pink
    (213, 94, 0),     # vermillion
    (86, 180, 233),   # sky blue
    (240, 228, 66),   # yellow
    (153, 153, 51),   # olive
    (128, 0, 128),    # purple
    (165, 42, 42),    # brown
    (255, 182, 193),  # light pink
    (60, 179, 113),   # sea green
    (255, 0, 0),      # red
    (0, 206, 209),    # turquoise
    (255, 140, 0),    # dark orange
)

#: Grid value for pixels with no prediction; rendered black.
UNLABELED = -1


def render_map(grid: Sequence[Sequence[int]],
               palette: Sequence[Tuple[int, int, int]] = DEFAULT_PALETTE) -> bytes:
    """Render a grid of class indices as a plain (P3) PPM image.

    One RGB triple per pixel, one pixel row per text line; `UNLABELED`
    renders black. Output is byte-exact for a fixed input.
    """
    rows = [list(r) for r in grid]
    if not rows or not rows[0]:
        raise ValueError("grid must be nonempty")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValueError("grid rows must all have the same width")
    out = [f"P3\n{width} {len(rows)}\n255\n"]
    for r in rows:
        triples = []
        for v in r:
            if v == UNLABELED:
                rgb = (0, 0, 0)
            elif 0 <= v < len(palette):
                rgb = palette[v]
            else:
                raise ValueError(f"class index {v} outside palette of {len(palette)} colors")
            triples.append(f"{rgb[0]} {rgb[1]} {rgb[2]}")
        out.append(" ".join(triples) + "\n")
    return "".join(out).encode("ascii")


def prediction_grid(d: Dataset, labels: Sequence[int]) -> List[List[int]]:
    """Scatter predicted labels onto the dataset's pixel grid.

    Pixels not covered by any sample stay `UNLABELED`. Requires the dataset
    to carry `image_dims`.
    """
    if d.image_dims is None:
        raise ValueError("dataset has no image dimensions; cannot build a map")
    if len(labels) != len(d.samples):
        raise ValueError(f"{len(labels)} labels for {len(d.samples)} samples")
    h, w = d.image_dims
    grid = [[UNLABELED] * w for _ in range(h)]
    for sample, label in zip(d.samples, labels):
        if sample.pixel is not None:
            r, c = sample.pixel
            grid[r][c] = int(label)
    return grid
