"""Command-line pipeline: synth -> encode -> train -> predict -> eval.

Every flag of every subcommand can also be given as a `key = value` line in
a config file passed with --config; explicit flags win over file values.
Exit codes: 0 success, 1 usage error, 2 data error, 3 non-convergence under
--strict.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import formats
from .coding import encode_dataset
from .machine import SolverConfig, make_spec
from .metrics import confusion, format_report
from .multiclass import predict_batch, train_multiclass
from .synth import default_demo_shape, default_flevoland_shape, generate
from .types import Dataset

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NOCONV = 3

VARIANT_CHOICES = ("ssmm", "smm", "svm", "ssvm")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse, but usage problems exit 1 instead of 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class _Opt:
    flag: str
    conv: Optional[Callable]  # None marks a boolean switch
    default: object
    help: str
    required: bool = False
    choices: Optional[Tuple[str, ...]] = None

    @property
    def dest(self) -> str:
        return self.flag.lstrip("-").replace("-", "_")


def _parse_bool(raw: str) -> bool:
    low = raw.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {raw!r}")


_SYNTH_OPTS = (
    _Opt("--out", str, None, "output directory for train.dat/test.dat", required=True),
    _Opt("--seed", int, None, "RNG seed (default: the shape's fixed seed)"),
    _Opt("--sigma", float, None, "noise sigma, the separability knob"),
    _Opt("--flevoland-shape", None, False, "use the 15-class, 500-train-per-class shape"),
)

_ENCODE_OPTS = (
    _Opt("--in", str, None, "input dataset file", required=True),
    _Opt("--out", str, None, "output encoded-matrix file", required=True),
)

_TRAIN_OPTS = (
    _Opt("--train", str, None, "training dataset file", required=True),
    _Opt("--model", str, None, "output model file", required=True),
    _Opt("--variant", str, "ssmm", "classifier variant", choices=VARIANT_CHOICES),
    _Opt("--gamma", float, 0.3, "L1 weight (ssmm/ssvm)"),
    _Opt("--tau", float, 0.1, "nuclear-norm weight (ssmm/smm)"),
    _Opt("--C", float, 0.7, "hinge weight"),
    _Opt("--rho", float, 1.0, "ADMM penalty"),
    _Opt("--max-iters", int, 2000, "ADMM iteration cap"),
    _Opt("--tol", float, 1e-5, "primal and dual residual tolerance"),
    _Opt("--inner-iters", int, 10, "loss-block rounds per ADMM iteration"),
    _Opt("--inner-step", float, 1.0, "trial step size for the loss block"),
    _Opt("--seed", int, 0, "solver seed (training is deterministic regardless)"),
    _Opt("--strict", None, False, "exit 3 when any class fails to converge"),
    _Opt("--figures", str, None, "directory for objective-trace figures"),
)

_PREDICT_OPTS = (
    _Opt("--model", str, None, "trained model file", required=True),
    _Opt("--in", str, None, "dataset file to classify", required=True),
    _Opt("--out", str, None, "output predicted-labels file", required=True),
    _Opt("--map", str, None, "also render a PPM classification map here"),
)

_EVAL_OPTS = (
    _Opt("--true", str, None, "dataset file with reference labels", required=True),
    _Opt("--pred", str, None, "predicted-labels file", required=True),
    _Opt("--out", str, None, "also write the report to this file"),
    _Opt("--figures", str, None, "directory for accuracy/confusion figures"),
    _Opt("--method", str, None, "method name for the report heading"),
)


def _read_config(path: str) -> Dict[str, str]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise _UsageError(f"cannot read config file: {exc}") from None
    mapping: Dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise _UsageError(f"config line {lineno}: expected key = value")
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        value = value.strip()
        if len(value) >= 2 and value[0] == value[-1] and value[0] in "\"'":
            value = value[1:-1]
        if not key:
            raise _UsageError(f"config line {lineno}: empty key")
        mapping[key] = value
    return mapping


def _resolve(ns: argparse.Namespace, opts: Sequence[_Opt]) -> Dict[str, object]:
    config: Dict[str, str] = {}
    if getattr(ns, "config", None) is not None:
        config = _read_config(ns.config)
        known = {o.dest for o in opts}
        for key in config:
            if key not in known:
                raise _UsageError(f"unknown config key {key!r}")
    values: Dict[str, object] = {}
    for opt in opts:
        if hasattr(ns, opt.dest):
            values[opt.dest] = getattr(ns, opt.dest)
        elif opt.dest in config:
            raw = config[opt.dest]
            conv = _parse_bool if opt.conv is None else opt.conv
            try:
                values[opt.dest] = conv(raw)
            except ValueError as exc:
                raise _UsageError(f"config key {opt.dest!r}: {exc}") from None
        else:
            values[opt.dest] = opt.default
        if opt.choices is not None and values[opt.dest] is not None:
            if values[opt.dest] not in opt.choices:
                raise _UsageError(
                    f"{opt.flag}: invalid choice {values[opt.dest]!r} "
                    f"(choose from {', '.join(opt.choices)})"
                )
    for opt in opts:
        if opt.required and values[opt.dest] is None:
            raise _UsageError(f"missing required option {opt.flag}")
    return values


def _add_subcommand(subparsers, name: str, help_text: str, opts: Sequence[_Opt], handler):
    sub = subparsers.add_parser(name, help=help_text, description=help_text)
    for opt in opts:
        if opt.conv is None:
            sub.add_argument(opt.flag, dest=opt.dest, action="store_true",
                             default=argparse.SUPPRESS, help=opt.help)
        else:
            kwargs = dict(dest=opt.dest, type=opt.conv, default=argparse.SUPPRESS,
                          help=opt.help)
            if opt.choices is not None:
                kwargs["choices"] = opt.choices
            sub.add_argument(opt.flag, **kwargs)
    sub.add_argument("--config", type=str, default=None,
                     help="key = value file; flags override file values")
    sub.set_defaults(_handler=handler, _opts=opts)


def _build_parser() -> _Parser:
    parser = _Parser(prog="pscsmm",
                     description="Polarimetric scattering coding + support matrix machines")
    subparsers = parser.add_subparsers(dest="command")
    _add_subcommand(subparsers, "synth", "generate a synthetic train/test dataset pair",
                    _SYNTH_OPTS, _cmd_synth)
    _add_subcommand(subparsers, "encode", "code a dataset into sparse 4x4 matrices",
                    _ENCODE_OPTS, _cmd_encode)
    _add_subcommand(subparsers, "train", "train a one-vs-rest classifier",
                    _TRAIN_OPTS, _cmd_train)
    _add_subcommand(subparsers, "predict", "classify a dataset with a trained model",
                    _PREDICT_OPTS, _cmd_predict)
    _add_subcommand(subparsers, "eval", "score predictions against reference labels",
                    _EVAL_OPTS, _cmd_eval)
    return parser


def _cmd_synth(v: Dict[str, object]) -> int:
    kwargs = {}
    if v["sigma"] is not None:
        kwargs["noise_sigma"] = v["sigma"]
    if v["seed"] is not None:
        kwargs["seed"] = v["seed"]
    cfg = default_flevoland_shape(**kwargs) if v["flevoland_shape"] else default_demo_shape(**kwargs)
    train, test = generate(cfg)
    out = Path(str(v["out"]))
    out.mkdir(parents=True, exist_ok=True)
    formats.write_dataset(train, out / "train.dat")
    formats.write_dataset(test, out / "test.dat")
    print(f"wrote {out / 'train.dat'}: {len(train)} samples, {train.num_classes} classes")
    print(f"wrote {out / 'test.dat'}: {len(test)} samples, {test.num_classes} classes")
    return EXIT_OK


def _cmd_encode(v: Dict[str, object]) -> int:
    ds = formats.read_dataset(str(v["in"]))
    encoded = encode_dataset(ds)
    formats.write_encoded(encoded, str(v["out"]))
    print(f"wrote {v['out']}: {len(encoded)} coded matrices")
    return EXIT_OK


def _encoded_inputs(ds: Dataset, vectorize: bool) -> List[Tuple[np.ndarray, int]]:
    encoded = encode_dataset(ds)
    out = []
    for mat, label in encoded:
        arr = np.array(mat.rows, dtype=float)
        if vectorize:
            arr = arr.reshape(1, 16)
        out.append((arr, label))
    return out


def _cmd_train(v: Dict[str, object]) -> int:
    ds = formats.read_dataset(str(v["train"]))
    variant = str(v["variant"])
    vectorize = variant in ("svm", "ssvm")
    pairs = _encoded_inputs(ds, vectorize)
    spec = make_spec(variant, gamma=float(v["gamma"]), tau=float(v["tau"]), c=float(v["C"]))
    cfg = SolverConfig(
        rho=float(v["rho"]),
        max_iters=int(v["max_iters"]),
        tol_primal=float(v["tol"]),
        tol_dual=float(v["tol"]),
        inner_iters=int(v["inner_iters"]),
        inner_step=float(v["inner_step"]),
        seed=int(v["seed"]),
    )
    mc, reports = train_multiclass(pairs, ds.num_classes, spec, cfg,
                                   class_names=ds.class_names)
    formats.write_multiclass_model(mc, str(v["model"]))
    for name, report in zip(ds.class_names, reports):
        state = "converged" if report.converged else "NOT converged"
        print(f"class {name}: {report.iterations} iterations, {state}, "
              f"objective {report.objective_trace[-1]:.6g}")
    print(f"wrote {v['model']}: {mc.num_classes}-class {variant} model")
    if v["figures"] is not None:
        from . import figures

        fig_dir = Path(str(v["figures"]))
        fig_dir.mkdir(parents=True, exist_ok=True)
        figures.save_objective_traces(reports, ds.class_names,
                                      fig_dir / "training_objective.png")
        print(f"wrote {fig_dir / 'training_objective.png'}")
    if v["strict"] and not all(r.converged for r in reports):
        bad = [n for n, r in zip(ds.class_names, reports) if not r.converged]
        print(f"error: classes not converged: {', '.join(bad)}", file=sys.stderr)
        return EXIT_NOCONV
    return EXIT_OK


def _cmd_predict(v: Dict[str, object]) -> int:
    mc = formats.read_multiclass_model(str(v["model"]))
    ds = formats.read_dataset(str(v["in"]))
    encoded = encode_dataset(ds)
    shape = tuple(mc.input_shape)
    if shape not in ((4, 4), (1, 16)):
        raise ValueError(f"model expects {shape} inputs; coded pixels are 4x4")
    if encoded:
        xs = np.array([mat.rows for mat, _ in encoded], dtype=float)
        labels, _ = predict_batch(mc, xs.reshape(len(encoded), *shape))
    else:
        labels = np.zeros(0, dtype=int)
    method = f"PSC-{mc.spec.variant.upper()}"
    formats.write_labels([int(x) for x in labels], str(v["out"]), method=method)
    print(f"wrote {v['out']}: {len(labels)} predictions ({method})")
    if v["map"] is not None:
        grid = formats.prediction_grid(ds, [int(x) for x in labels])
        Path(str(v["map"])).write_bytes(formats.render_map(grid))
        print(f"wrote {v['map']}")
    return EXIT_OK


def _cmd_eval(v: Dict[str, object]) -> int:
    ds = formats.read_dataset(str(v["true"]))
    labels, file_method = formats.read_labels(str(v["pred"]))
    method = str(v["method"]) if v["method"] is not None else (file_method or "")
    cm = confusion([s.label for s in ds.samples], labels, ds.num_classes)
    text = format_report(cm, ds.class_names, method=method)
    sys.stdout.write(text)
    if v["out"] is not None:
        Path(str(v["out"])).write_text(text, newline="\n")
    if v["figures"] is not None:
        from . import figures

        fig_dir = Path(str(v["figures"]))
        fig_dir.mkdir(parents=True, exist_ok=True)
        figures.save_perclass_accuracy(cm, ds.class_names,
                                       fig_dir / "perclass_accuracy.png", method=method)
        figures.save_confusion_heatmap(cm, ds.class_names,
                                       fig_dir / "confusion_matrix.png", method=method)
        print(f"wrote figures to {fig_dir}")
    return EXIT_OK


def cli(argv: Optional[Sequence[str]] = None) -> int:
    """Run one subcommand; returns the process exit code."""
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if not hasattr(ns, "_handler"):
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        values = _resolve(ns, ns._opts)
    except _UsageError as exc:
        print(f"pscsmm {ns.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return ns._handler(values)
    except (formats.FormatError, ValueError, OSError) as exc:
        print(f"pscsmm {ns.command}: error: {exc}", file=sys.stderr)
        return EXIT_DATA


def main() -> None:
    sys.exit(cli())


if __name__ == "__main__":
    main()
