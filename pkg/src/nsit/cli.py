"""Command-line front end.  Every subcommand is a thin adapter over the library.

Exit status: 0 success, 2 invalid input (arguments, files, schemas), 1 runtime failure.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import classical, classifier, datagen, dynamics, io, measurement, qubit, states
from .gellmann import build_basis, verify_basis

AXIS_NAMES = {"x": 0, "y": 1, "z": 2}


class ValidationError(Exception):
    pass


def _fmt(x) -> str:
    return "%.10g" % x


def _basis(args):
    if args.dim < 2:
        raise ValidationError("--dim must be >= 2")
    return build_basis(args.dim)


def _state_vector(args, basis) -> states.ProbabilityVector:
    """Probability vector from --pvec, --state, or the maximally mixed state."""
    if getattr(args, "pvec", None) and getattr(args, "state", None):
        raise ValidationError("give at most one of --state and --pvec")
    if getattr(args, "pvec", None):
        p = io.load_pvec(args.pvec)
    elif getattr(args, "state", None):
        rho = io.load_density(args.state)
        if rho.dim != basis.dim:
            raise ValidationError(f"state has dim {rho.dim}, --dim is {basis.dim}")
        p = states.probability_vector_from_density(rho, basis)
    else:
        p = states.probability_vector_from_density(states.DensityMatrix.maximally_mixed(basis.dim), basis)
    if p.dim != basis.dim:
        raise ValidationError(f"vector has dim {p.dim}, --dim is {basis.dim}")
    return p


def _hamiltonian(args) -> dynamics.HamiltonianSpec:
    fields = (args.bx, args.by, args.bz)
    if args.hamiltonian:
        if any(f is not None for f in fields):
            raise ValidationError("give either --hamiltonian or field components, not both")
        h = io.load_hamiltonian(args.hamiltonian)
    else:
        if args.dim != 2:
            raise ValidationError("field components --bx/--by/--bz need --dim 2; use --hamiltonian otherwise")
        h = dynamics.HamiltonianSpec.from_field(*(f or 0.0 for f in fields))
    if h.dim != args.dim:
        raise ValidationError(f"Hamiltonian has dim {h.dim}, --dim is {args.dim}")
    return h


def _record(args) -> measurement.MeasurementRecord:
    m = args.measure
    if m in AXIS_NAMES:
        if args.dim != 2:
            raise ValidationError("axis names x/y/z only apply to --dim 2")
        n = AXIS_NAMES[m]
    else:
        try:
            n = int(m)
        except ValueError:
            raise ValidationError(f"--measure must be x, y, z or a generator index, got {m!r}") from None
    o = args.outcome
    k = {"+1": 0, "-1": 1}.get(o) if args.dim == 2 and o in ("+1", "-1") else None
    if k is None:
        try:
            k = int(o)
        except ValueError:
            raise ValidationError(f"--outcome must be an eigenvalue index, got {o!r}") from None
    rec = measurement.MeasurementRecord(n, k)
    try:
        rec.check(args.dim)
    except IndexError as exc:
        raise ValidationError(str(exc)) from None
    return rec


def _time_grid(args) -> np.ndarray:
    if args.t is not None:
        return np.array([args.t])
    if args.steps < 1:
        raise ValidationError("--steps must be >= 1")
    return np.linspace(0.0, args.t_max, args.steps + 1)


# --- subcommands -------------------------------------------------------------


def cmd_basis(args):
    basis = _basis(args)
    if args.verify:
        for key, val in verify_basis(basis).items():
            print(f"{key} {_fmt(val)}")
    if args.out or not args.verify:
        io.save_basis(basis, args.out)


def cmd_evolve(args):
    basis = _basis(args)
    p0 = _state_vector(args, basis)
    tm = dynamics.transfer_matrix(_hamiltonian(args), basis)
    if args.tmat_out:
        io.save_tmat(tm, args.tmat_out)
    grid = _time_grid(args)
    rows = [[float(t), *map(float, dynamics.evolve_probabilities(p0, tm, t).flat)] for t in grid]
    header = ["t"] + [f"p{i}" for i in range(p0.flat.size)]
    io.write_table(args.out, "evolution-v1", header, rows)


def cmd_measure(args):
    basis = _basis(args)
    p = _state_vector(args, basis)
    io.save_pvec(measurement.collapse(p, _record(args)), args.out)


def cmd_witness(args):
    basis = _basis(args)
    p = _state_vector(args, basis)
    rec = _record(args)
    report = measurement.witness_gamma(p, rec, basis)
    print(f"gamma = {_fmt(report.gamma)}")
    print("spectrum = " + " ".join(_fmt(x) for x in report.spectrum))
    if args.out:
        io.save_witness({"dim": args.dim, "measurement": [rec.n, rec.k], **report.to_dict()}, args.out)


def cmd_scan(args):
    basis = _basis(args)
    p = _state_vector(args, basis)
    doc = {"dim": args.dim}
    if args.measure is not None:
        rec = _record(args)
        report = measurement.witness_gamma(p, rec, basis)
        p = measurement.collapse(p, rec)
        doc.update(measurement=[rec.n, rec.k], **report.to_dict())
    tm = dynamics.transfer_matrix(_hamiltonian(args), basis)
    scan = measurement.negativity_scan(p, tm, _time_grid(args))
    doc["scan"] = scan.to_dict()
    print(f"violating = {scan.violating}")
    if scan.first_negative:
        t, n, k, v = scan.first_negative
        print(f"first_negative = t {_fmt(t)} n {n} k {k} value {_fmt(v)}")
        print(f"crossing_time = {_fmt(scan.crossing_time)}")
    if args.out:
        io.save_witness(doc, args.out)


def cmd_qubit_delta(args):
    if args.bloch:
        points = [args.bloch]
    else:
        if args.grid < 2:
            raise ValidationError("--grid must be >= 2")
        axis = np.linspace(-1.0, 1.0, args.grid)
        points = [p for p in np.array(np.meshgrid(axis, axis, axis, indexing="ij")).reshape(3, -1).T if p @ p <= 1.0]
    rows = []
    for v in points:
        ws = qubit.witness_set(v)
        rows.append([*map(float, v), ws.gamma_x, ws.gamma_y, ws.gamma_z, ws.delta, ws.bound_lhs])
    io.write_table(args.out, "qubit-delta-v1", ["bx", "by", "bz", "gamma_x", "gamma_y", "gamma_z", "delta", "bound_lhs"], rows)


def cmd_classical_check(args):
    params = {"uniform-sphere": {"radius": args.radius}, "gaussian": {"sigma": args.sigma},
              "point-mass": {"spin": args.spin}}.get(args.dist, {})
    ens = classical.sample_ensemble(args.dist, args.n, args.seed, **params)
    b = (args.bx or 0.0, args.by or 0.0, args.bz or 0.0)
    obs = classical.OBSERVABLES[args.observable]
    rows = []
    for t in args.times:
        marg = classical.coarse_grain(classical.evolve_ensemble(ens, b, t))
        res = classical.nsit_residual(ens, b, args.axis, t, obs)
        rows.append([float(t), *map(float, marg.flat), res["residual"], res["stderr"]])
    header = ["t", "px+", "px-", "py+", "py-", "pz+", "pz-", "residual", "stderr"]
    meta = {"dist": args.dist, "n": args.n, "seed": args.seed, "field": b, "axis": args.axis, "observable": args.observable}
    io.write_table(args.out, "classical-v1", header, rows, meta)


def cmd_datagen(args):
    cfg = datagen.GenerationConfig(args.dim, args.count, args.seed, args.low, args.high, workers=args.workers)
    try:
        cfg.validate()
    except ValueError as exc:
        raise ValidationError(str(exc)) from None
    examples, meta = datagen.generate_dataset(cfg)
    io.save_dataset(examples, meta, args.out)


def cmd_hist_gamma(args):
    examples, _ = io.load_dataset(args.dataset)
    violating = [e for e in examples if e.label == datagen.VIOLATING]
    h = datagen.gamma_histogram(violating, bins=args.bins)
    e = h["edges"]
    rows = [[float(e[i]), float(e[i + 1]), int(c)] for i, c in enumerate(h["counts"])]
    io.write_table(args.out, "histogram-v1", ["bin_left", "bin_right", "count"], rows,
                   {"mean_gamma": h["mean"], "count": len(violating)})


def cmd_sample_bloch(args):
    inside, outside = datagen.sample_bloch_points(args.count, args.seed)
    rows = [["inside", *map(float, p)] for p in inside] + [["outside", *map(float, p)] for p in outside]
    io.write_table(args.out, "bloch-points-v1", ["set", "x", "y", "z"], rows, {"seed": args.seed})


def cmd_train(args):
    examples, _ = io.load_dataset(args.dataset)
    cfg = classifier.TrainConfig(args.epochs, args.lr, args.seed, args.val_frac, args.features)
    model = classifier.train(examples, cfg)
    io.save_model(model, args.out)
    if "validation" in model.metadata:
        print(json.dumps(model.metadata["validation"], sort_keys=True), file=sys.stderr)


def cmd_classify(args):
    model = io.load_model(args.model)
    args.dim = model.dim
    p = _state_vector(args, build_basis(model.dim))
    res = classifier.predict(model, p)
    print(f"label = {res['label']}")
    print(f"score = {_fmt(res['score'])}")


def cmd_evaluate(args):
    model = io.load_model(args.model)
    examples, _ = io.load_dataset(args.dataset)
    doc = {"schema": "metrics-v1", **classifier.evaluate(model, examples).to_dict()}
    text = json.dumps(doc, indent=1, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


# --- parser --------------------------------------------------------------------


def _add_state(p):
    p.add_argument("--state", help="rho-v1 density matrix file")
    p.add_argument("--pvec", help="pvec-v1 probability vector file")


def _add_field(p):
    p.add_argument("--bx", type=float)
    p.add_argument("--by", type=float)
    p.add_argument("--bz", type=float)
    p.add_argument("--hamiltonian", help="hamiltonian-v1 file (any dim)")


def _add_times(p, t_max=math.pi, steps=314):
    p.add_argument("--t", type=float, help="single evolution time")
    p.add_argument("--t-max", type=float, default=t_max)
    p.add_argument("--steps", type=int, default=steps, help="grid intervals on [0, t-max]")


def _add_measure(p, required=True):
    p.add_argument("--measure", required=required, help="x/y/z (dim 2) or zero-based generator index")
    p.add_argument("--outcome", default="0", help="zero-based eigenvalue index (+1/-1 accepted for dim 2)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nsit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("basis", help="export the scaled Gell-Mann basis (ggmmb-v1)")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--verify", action="store_true", help="print invariant residuals")
    p.add_argument("--out")
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("evolve", help="evolve a probability vector with the transfer matrix")
    p.add_argument("--dim", type=int, required=True)
    _add_state(p)
    _add_field(p)
    _add_times(p)
    p.add_argument("--tmat-out", help="also write the transfer matrix (tmat-v1)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("measure", help="noninvasive collapse of a probability vector")
    p.add_argument("--dim", type=int, required=True)
    _add_state(p)
    _add_measure(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("witness", help="interference witness gamma for a measurement")
    p.add_argument("--dim", type=int, required=True)
    _add_state(p)
    _add_measure(p)
    p.add_argument("--out", help="witness-v1 report")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("scan", help="search for negative components under evolution")
    p.add_argument("--dim", type=int, required=True)
    _add_state(p)
    _add_measure(p, required=False)
    _add_field(p)
    _add_times(p)
    p.add_argument("--out", help="witness-v1 report")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("qubit-delta", help="closed-form qubit gammas, Delta and bound")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--bloch", type=float, nargs=3, metavar=("SX", "SY", "SZ"))
    g.add_argument("--grid", type=int, help="points per axis of a Bloch-ball grid")
    p.add_argument("--out")
    p.set_defaults(func=cmd_qubit_delta)

    p = sub.add_parser("classical-check", help="Monte Carlo NSIT check of classical spins")
    p.add_argument("--dist", choices=classical.DISTRIBUTIONS, default="uniform-sphere")
    p.add_argument("--radius", type=float, default=1.0)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--spin", type=float, nargs=3, default=(0.0, 0.0, 1.0))
    p.add_argument("--n", type=int, default=100_000)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--bx", type=float)
    p.add_argument("--by", type=float)
    p.add_argument("--bz", type=float)
    p.add_argument("--axis", choices=tuple(AXIS_NAMES), default="x")
    p.add_argument("--observable", choices=tuple(classical.OBSERVABLES), default="sy")
    p.add_argument("--times", type=float, nargs="+", default=[0.5, 1.5])
    p.add_argument("--out")
    p.set_defaults(func=cmd_classical_check)

    p = sub.add_parser("datagen", help="labeled probability-vector dataset (dataset-v1)")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--count", type=int, required=True, help="examples per class")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--low", type=float, default=-0.5)
    p.add_argument("--high", type=float, default=1.0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_datagen)

    p = sub.add_parser("hist-gamma", help="histogram of gamma over violating examples")
    p.add_argument("--dataset", required=True)
    p.add_argument("--bins", type=int, default=50)
    p.add_argument("--out")
    p.set_defaults(func=cmd_hist_gamma)

    p = sub.add_parser("sample-bloch", help="qubit points inside / outside the Bloch ball")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sample_bloch)

    p = sub.add_parser("train", help="fit the classifier on a dataset")
    p.add_argument("--dataset", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--epochs", type=int, default=2000)
    p.add_argument("--lr", type=float, default=10.0)
    p.add_argument("--val-frac", type=float, default=0.2)
    p.add_argument("--features", choices=classifier.FEATURE_MAPS, default="tuple-quadratic")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("classify", help="label one probability vector")
    p.add_argument("--model", required=True)
    _add_state(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("evaluate", help="metrics of a model on a labeled dataset")
    p.add_argument("--model", required=True)
    p.add_argument("--dataset", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_evaluate)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args)
    except (ValidationError, ValueError, IndexError, KeyError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - top-level report
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
