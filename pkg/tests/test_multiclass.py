import numpy as np
import pytest

from pscsmm import (
    BinaryModel,
    MulticlassModel,
    decision_values,
    make_spec,
    predict,
    predict_batch,
    train_multiclass,
)


def _model_with_bias(b, shape=(2, 2)):
    return BinaryModel(w=np.zeros(shape), b=float(b))


def _mc_from_biases(biases, shape=(2, 2)):
    k = len(biases)
    return MulticlassModel(
        models=tuple(_model_with_bias(b, shape) for b in biases),
        class_names=tuple(f"c{i + 1}" for i in range(k)),
        spec=make_spec("svm", c=1.0),
        input_shape=shape,
    )


def _blobs(rng, k, n_per_class, shape=(2, 2), gap=2.0):
    out = []
    for cls in range(k):
        center = np.zeros(shape)
        center.flat[cls % center.size] = gap
        for _ in range(n_per_class):
            out.append((center + rng.normal(0, 0.2, shape), cls))
    return out


def test_two_class_separable_both_perfect():
    rng = np.random.default_rng(50)
    data = _blobs(rng, 2, 12)
    mc, reports = train_multiclass(data, 2, make_spec("svm", c=10.0))
    assert len(reports) == 2
    for cls in range(2):
        model = mc.models[cls]
        for x, label in data:
            y = 1 if label == cls else -1
            assert (float(np.sum(model.w * x)) + model.b) * y > 0


def test_multiclass_shape_and_reports():
    rng = np.random.default_rng(51)
    data = _blobs(rng, 4, 6)
    mc, reports = train_multiclass(data, 4, make_spec("ssmm", gamma=0.3, tau=0.1, c=0.7))
    assert mc.num_classes == 4
    assert len(reports) == 4
    assert mc.input_shape == (2, 2)
    assert all(r.iterations >= 1 for r in reports)


def test_empty_class_is_named():
    rng = np.random.default_rng(52)
    data = [(rng.normal(0, 1, (2, 2)), label) for label in range(7) for _ in range(3)]
    with pytest.raises(ValueError, match="class 7 has no samples"):
        train_multiclass(data, 8, make_spec("svm", c=1.0))


def test_default_class_names():
    rng = np.random.default_rng(53)
    data = _blobs(rng, 3, 4)
    mc, _ = train_multiclass(data, 3, make_spec("svm", c=1.0))
    assert mc.class_names == ("c1", "c2", "c3")


def test_predict_argmax():
    mc = _mc_from_biases([0.1, 0.9, -0.3])
    cls, values = predict(mc, np.zeros((2, 2)))
    assert cls == 1
    assert values == pytest.approx([0.1, 0.9, -0.3])


def test_predict_tie_breaks_low():
    mc = _mc_from_biases([0.5, 0.5])
    cls, _ = predict(mc, np.zeros((2, 2)))
    assert cls == 0


def test_predict_bias_ordering():
    k = 5
    mc = _mc_from_biases(list(range(k)))
    cls, _ = predict(mc, np.zeros((2, 2)))
    assert cls == k - 1


def test_predict_shape_mismatch():
    mc = _mc_from_biases([0.0, 1.0])
    with pytest.raises(ValueError, match="shape mismatch"):
        predict(mc, np.zeros((1, 16)))


def test_prediction_is_stateless():
    rng = np.random.default_rng(54)
    mc = MulticlassModel(
        models=tuple(BinaryModel(w=rng.normal(0, 1, (2, 2)), b=float(rng.normal()))
                     for _ in range(3)),
        class_names=("a", "b", "c"),
        spec=make_spec("svm", c=1.0),
        input_shape=(2, 2),
    )
    xs = [rng.normal(0, 1, (2, 2)) for _ in range(20)]
    forward = [predict(mc, x)[0] for x in xs]
    backward = [predict(mc, x)[0] for x in reversed(xs)]
    assert forward == backward[::-1]


def test_class_permutation_round_trip():
    rng = np.random.default_rng(55)
    models = tuple(BinaryModel(w=rng.normal(0, 1, (2, 2)), b=float(rng.normal()))
                   for _ in range(4))
    names = ("a", "b", "c", "d")
    mc = MulticlassModel(models=models, class_names=names,
                         spec=make_spec("svm", c=1.0), input_shape=(2, 2))
    perm = [2, 0, 3, 1]
    mc_p = MulticlassModel(
        models=tuple(models[j] for j in perm),
        class_names=tuple(names[j] for j in perm),
        spec=mc.spec,
        input_shape=(2, 2),
    )
    for _ in range(50):
        x = rng.normal(0, 1, (2, 2))
        cls, _ = predict(mc, x)
        cls_p, _ = predict(mc_p, x)
        assert perm[cls_p] == cls


def test_bias_shift_invariance():
    rng = np.random.default_rng(56)
    models = tuple(BinaryModel(w=rng.normal(0, 1, (2, 2)), b=float(rng.normal()))
                   for _ in range(3))
    mc = MulticlassModel(models=models, class_names=("a", "b", "c"),
                         spec=make_spec("svm", c=1.0), input_shape=(2, 2))
    shifted = MulticlassModel(
        models=tuple(BinaryModel(w=m.w, b=m.b + 7.5) for m in models),
        class_names=mc.class_names, spec=mc.spec, input_shape=(2, 2),
    )
    for _ in range(50):
        x = rng.normal(0, 1, (2, 2))
        assert predict(mc, x)[0] == predict(shifted, x)[0]


def test_predict_batch_matches_predict():
    rng = np.random.default_rng(57)
    models = tuple(BinaryModel(w=rng.normal(0, 1, (4, 4)), b=float(rng.normal()))
                   for _ in range(5))
    mc = MulticlassModel(models=models, class_names=tuple("abcde"),
                         spec=make_spec("svm", c=1.0), input_shape=(4, 4))
    xs = rng.normal(0, 1, (30, 4, 4))
    labels, scores = predict_batch(mc, xs)
    for i in range(30):
        cls, values = predict(mc, xs[i])
        assert labels[i] == cls
        assert np.allclose(scores[i], values, atol=1e-12)


def test_multiclass_model_invariants():
    with pytest.raises(ValueError, match="at least 2"):
        MulticlassModel(models=(_model_with_bias(0.0),), class_names=("x",),
                        spec=make_spec("svm", c=1.0), input_shape=(2, 2))
    with pytest.raises(ValueError, match="class names"):
        MulticlassModel(models=(_model_with_bias(0.0), _model_with_bias(1.0)),
                        class_names=("x",),
                        spec=make_spec("svm", c=1.0), input_shape=(2, 2))
    with pytest.raises(ValueError, match="shape"):
        MulticlassModel(
            models=(_model_with_bias(0.0, (2, 2)), _model_with_bias(1.0, (1, 4))),
            class_names=("x", "y"),
            spec=make_spec("svm", c=1.0), input_shape=(2, 2),
        )


def test_label_out_of_range_rejected():
    data = [(np.zeros((2, 2)), 0), (np.ones((2, 2)), 3)]
    with pytest.raises(ValueError, match="out of range"):
        train_multiclass(data, 2, make_spec("svm", c=1.0))


def test_decision_values_exposed():
    mc = _mc_from_biases([1.0, -1.0])
    assert decision_values(mc, np.zeros((2, 2))) == pytest.approx([1.0, -1.0])
