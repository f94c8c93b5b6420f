import numpy as np
import pytest

from pscsmm import (
    BinaryModel,
    ComplexValue,
    Dataset,
    MulticlassModel,
    ObjectiveSpec,
    Sample,
    ScatteringMatrix,
    encode_dataset,
    make_spec,
)
from pscsmm.formats import (
    DEFAULT_PALETTE,
    UNLABELED,
    FormatError,
    prediction_grid,
    read_binary_model,
    read_dataset,
    read_encoded,
    read_labels,
    read_multiclass_model,
    render_map,
    write_binary_model,
    write_dataset,
    write_encoded,
    write_labels,
    write_multiclass_model,
)


def _random_dataset(rng, n=12, k=3, dims=None, with_pixels=False):
    samples = []
    for i in range(n):
        vals = rng.normal(0, 10, 8)
        vals[rng.integers(0, 8)] = 0.0  # exercise exact zeros
        s = ScatteringMatrix(
            hh=ComplexValue(vals[0], vals[1]), hv=ComplexValue(vals[2], vals[3]),
            vh=ComplexValue(vals[4], vals[5]), vv=ComplexValue(vals[6], vals[7]))
        pixel = None
        if with_pixels:
            pixel = (int(rng.integers(0, dims[0])), int(rng.integers(0, dims[1])))
        samples.append(Sample(s=s, label=int(rng.integers(0, k)), pixel=pixel))
    names = tuple(f"class {j}" for j in range(k))  # names with spaces
    return Dataset(samples=tuple(samples), class_names=names, image_dims=dims)


# --- dataset files -------------------------------------------------------------

def test_dataset_round_trip(tmp_path):
    rng = np.random.default_rng(70)
    for trial in range(20):
        dims = (8, 9) if trial % 2 else None
        d = _random_dataset(rng, n=10, k=3, dims=dims, with_pixels=dims is not None)
        path = tmp_path / f"ds{trial}.dat"
        write_dataset(d, path)
        assert read_dataset(path) == d


def test_dataset_header_format(tmp_path):
    rng = np.random.default_rng(71)
    d = _random_dataset(rng, n=3, k=2)
    path = tmp_path / "ds.dat"
    write_dataset(d, path)
    first = path.read_text().splitlines()[0]
    assert first == "psc-dataset v1 3 2"


def test_dataset_labels_one_based_on_disk(tmp_path):
    d = Dataset(
        samples=(Sample(s=ScatteringMatrix(
            hh=ComplexValue(1, 0), hv=ComplexValue(0, 0),
            vh=ComplexValue(0, 0), vv=ComplexValue(0, 0)), label=0),),
        class_names=("only",),
    )
    path = tmp_path / "ds.dat"
    write_dataset(d, path)
    record = path.read_text().splitlines()[-1]
    assert record.split()[8] == "1"


def test_malformed_header(tmp_path):
    path = tmp_path / "bad.dat"
    path.write_text("not-a-dataset v9 1 1\nx\n")
    with pytest.raises(FormatError, match="line 1"):
        read_dataset(path)


def test_wrong_field_count_names_line(tmp_path):
    path = tmp_path / "bad.dat"
    path.write_text("psc-dataset v1 1 1\nc1\n1 2 3 4 5 6 7\n")
    with pytest.raises(FormatError, match="line 3"):
        read_dataset(path)


def test_label_out_of_range_names_line(tmp_path):
    path = tmp_path / "bad.dat"
    lines = ["psc-dataset v1 1 15"] + [f"c{i}" for i in range(1, 16)]
    lines.append("1 2 3 4 5 6 7 8 16")
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(FormatError, match="line 17.*16"):
        read_dataset(path)


def test_truncated_file(tmp_path):
    path = tmp_path / "bad.dat"
    path.write_text("psc-dataset v1 5 1\nc1\n1 2 3 4 5 6 7 8 1\n")
    with pytest.raises(FormatError, match="ends early"):
        read_dataset(path)


def test_non_numeric_field(tmp_path):
    path = tmp_path / "bad.dat"
    path.write_text("psc-dataset v1 1 1\nc1\n1 2 x 4 5 6 7 8 1\n")
    with pytest.raises(FormatError, match="line 3"):
        read_dataset(path)


# --- encoded files --------------------------------------------------------------

def test_encoded_round_trip_and_mass(tmp_path):
    rng = np.random.default_rng(72)
    d = _random_dataset(rng, n=8, k=2)
    encoded = encode_dataset(d)
    path = tmp_path / "enc.dat"
    write_encoded(encoded, path)
    back = read_encoded(path)
    assert back == encoded
    # per-record L1 mass equals the dataset's per-record component mass
    for sample, (mat, _) in zip(d.samples, back):
        assert sum(mat.flat()) == pytest.approx(sample.s.l1_mass(), rel=1e-12)


def test_encoded_header(tmp_path):
    path = tmp_path / "enc.dat"
    write_encoded([], path)
    assert path.read_text() == "psc-encoded v1\n"


def test_encoded_bad_record(tmp_path):
    path = tmp_path / "enc.dat"
    path.write_text("psc-encoded v1\n1 2 3\n")
    with pytest.raises(FormatError, match="line 2"):
        read_encoded(path)


def test_encoded_rejects_non_pattern_matrix(tmp_path):
    path = tmp_path / "enc.dat"
    fields = ["1"] * 16  # every block saturated: no quadrant pattern fits
    path.write_text("psc-encoded v1\n" + " ".join(fields) + " 1\n")
    with pytest.raises(FormatError, match="line 2.*quadrant"):
        read_encoded(path)


# --- label files -----------------------------------------------------------------

def test_labels_round_trip(tmp_path):
    path = tmp_path / "labels.dat"
    write_labels([0, 4, 2, 2], path, method="PSC-SMM")
    labels, method = read_labels(path)
    assert labels == [0, 4, 2, 2]
    assert method == "PSC-SMM"
    assert path.read_text().splitlines()[1] == "1"


def test_labels_without_method(tmp_path):
    path = tmp_path / "labels.dat"
    write_labels([1], path)
    labels, method = read_labels(path)
    assert labels == [1] and method is None


def test_labels_count_mismatch(tmp_path):
    path = tmp_path / "labels.dat"
    path.write_text("psc-labels v1 3\n1\n2\n")
    with pytest.raises(FormatError, match="expected 3"):
        read_labels(path)


# --- model files ------------------------------------------------------------------

def test_binary_model_round_trip_bit_exact(tmp_path):
    rng = np.random.default_rng(73)
    w = rng.normal(0, 1, (3, 5))
    w[0, 0] = 1.0 / 3.0
    w[1, 1] = -0.0
    w[2, 2] = 1e-300
    model = BinaryModel(w=w, b=-2.0 / 7.0)
    spec = ObjectiveSpec(variant="ssmm", gamma=0.3, tau=0.1, c=0.7)
    path = tmp_path / "model.dat"
    write_binary_model(model, spec, path)
    back, back_spec = read_binary_model(path)
    assert back.w.shape == (3, 5)
    assert np.array_equal(back.w, model.w)
    assert back.b == model.b
    assert back_spec == spec
    assert path.read_text().splitlines()[0] == "psc-smm-model v1 3 5"


def test_binary_model_trailing_content(tmp_path):
    rng = np.random.default_rng(74)
    model = BinaryModel(w=rng.normal(0, 1, (2, 2)), b=0.1)
    path = tmp_path / "model.dat"
    write_binary_model(model, make_spec("svm", c=1.0), path)
    path.write_text(path.read_text() + "extra\n")
    with pytest.raises(FormatError, match="trailing"):
        read_binary_model(path)


def test_multiclass_model_round_trip(tmp_path):
    rng = np.random.default_rng(75)
    spec = make_spec("ssmm", gamma=0.3, tau=0.1, c=0.7)
    models = tuple(BinaryModel(w=rng.normal(0, 1, (4, 4)), b=float(rng.normal()))
                   for _ in range(3))
    mc = MulticlassModel(models=models, class_names=("Stem beans", "Bare soil", "Wheat2"),
                         spec=spec, input_shape=(4, 4))
    path = tmp_path / "model.ovr"
    write_multiclass_model(mc, path)
    back = read_multiclass_model(path)
    assert back.class_names == mc.class_names
    assert back.spec == spec
    for a, b in zip(back.models, mc.models):
        assert np.array_equal(a.w, b.w)
        assert a.b == b.b
    assert path.read_text().splitlines()[0] == "psc-smm-ovr v1 3"


def test_multiclass_missing_names(tmp_path):
    rng = np.random.default_rng(76)
    spec = make_spec("svm", c=1.0)
    models = tuple(BinaryModel(w=rng.normal(0, 1, (2, 2)), b=0.0) for _ in range(2))
    mc = MulticlassModel(models=models, class_names=("a", "b"), spec=spec,
                         input_shape=(2, 2))
    path = tmp_path / "model.ovr"
    write_multiclass_model(mc, path)
    lines = path.read_text().splitlines()
    path.write_text("\n".join(lines[:-1]) + "\n")
    with pytest.raises(FormatError, match="class names"):
        read_multiclass_model(path)


# --- map rendering -----------------------------------------------------------------

def test_render_single_pixel():
    out = render_map([[0]])
    r, g, b = DEFAULT_PALETTE[0]
    assert out == f"P3\n1 1\n255\n{r} {g} {b}\n".encode()


def test_render_all_unlabeled_is_black():
    out = render_map([[UNLABELED, UNLABELED]])
    assert out == b"P3\n2 1\n255\n0 0 0 0 0 0\n"


def test_render_checkerboard():
    out = render_map([[0, 1], [1, 0]]).decode()
    c0 = "{} {} {}".format(*DEFAULT_PALETTE[0])
    c1 = "{} {} {}".format(*DEFAULT_PALETTE[1])
    assert out == f"P3\n2 2\n255\n{c0} {c1}\n{c1} {c0}\n"


def test_render_rejects_out_of_palette():
    with pytest.raises(ValueError, match="palette"):
        render_map([[len(DEFAULT_PALETTE)]])


def test_render_rejects_empty():
    with pytest.raises(ValueError, match="nonempty"):
        render_map([])


def test_render_byte_stability():
    grid = [[(i + j) % 15 for j in range(7)] for i in range(5)]
    assert render_map(grid) == render_map(grid)


def test_prediction_grid_scatter():
    d = Dataset(
        samples=(
            Sample(s=ScatteringMatrix(
                hh=ComplexValue(1, 1), hv=ComplexValue(1, 1),
                vh=ComplexValue(1, 1), vv=ComplexValue(1, 1)),
                label=0, pixel=(0, 1)),
        ),
        class_names=("a", "b"),
        image_dims=(2, 2),
    )
    grid = prediction_grid(d, [1])
    assert grid == [[UNLABELED, 1], [UNLABELED, UNLABELED]]


def test_prediction_grid_requires_dims():
    d = Dataset(samples=(), class_names=("a",))
    with pytest.raises(ValueError, match="image dimensions"):
        prediction_grid(d, [])


def test_palette_has_fifteen_distinct_colors():
    assert len(DEFAULT_PALETTE) == 15
    assert len(set(DEFAULT_PALETTE)) == 15
    assert (0, 0, 0) not in DEFAULT_PALETTE
