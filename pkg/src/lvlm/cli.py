"""lvlm command-line front end.

Subcommands: synth, learn, decode, evaluate, classify, index, quantize.
Exit codes: 0 success, 1 input error, 2 numeric error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import io
from .discrete import decode_discrete, learn_discrete, evaluate_discrete, DiscreteModel
from .errors import InputError, NumericError
from .classify import classify_image, softmax_scores
from .indices import IndexReport, associativity_index, inertia_index
from .lattice import LatticeShape, StateLattice
from .real import decode_real, learn_real, evaluate_real, RealModel
from .synth import DiscreteEmission, RealEmission, SynthConfig, emit_observations, gibbs_sample
from .vq import pnn_quantize


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(f"{self.prog}: {message}")


def _parse_matrix(text: str, name: str) -> np.ndarray:
    """Rows separated by ';', entries by ','. E.g. '0.8,0.2;0.2,0.8'."""
    try:
        rows = [[float(x) for x in row.split(",")] for row in text.split(";")]
    except ValueError as e:
        raise InputError(f"bad {name} matrix: {e}") from e
    if len({len(r) for r in rows}) != 1:
        raise InputError(f"bad {name} matrix: ragged rows")
    return np.array(rows)


def _parse_shape(text: str) -> LatticeShape:
    try:
        return LatticeShape(tuple(int(x) for x in text.lower().split("x")))
    except ValueError as e:
        raise InputError(f"bad shape {text!r}") from e


def _radii(args):
    w = args.w if args.w is not None else 1
    return w, (args.we if args.we is not None else w), (args.wl if args.wl is not None else w)


def _write_lattice_any(path, lat, fmt):
    if fmt == "pgm":
        io.write_pgm(path, lat)
    else:
        io.write_lattice(path, lat)


def _cmd_synth(args):
    shape = _parse_shape(args.shape)
    if args.potentials:
        phi = _parse_matrix(args.potentials, "potentials")
        n = len(phi)
    else:
        n = args.n
        if n is None:
            raise InputError("synth needs --n or --potentials")
        off = (1.0 - args.self_weight) / max(1, n - 1) if n > 1 else 0.0
        phi = np.full((n, n), off)
        np.fill_diagonal(phi, args.self_weight if n > 1 else 1.0)
    if args.b:
        emission = DiscreteEmission(_parse_matrix(args.b, "B"))
    elif args.mu:
        mu = _parse_matrix(args.mu, "mu")
        if args.sigma:
            m = mu.shape[1]
            sigma = _parse_matrix(args.sigma, "sigma").reshape(len(mu), m, m)
        else:
            sigma = np.tile(np.eye(mu.shape[1]) * args.sigma_scale, (len(mu), 1, 1))
        emission = RealEmission(mu, sigma)
    else:
        emission = None
    config = SynthConfig(shape=shape, N=n, potentials=phi, emission=emission,
                         sweeps=args.sweeps, seed=args.seed)
    states = gibbs_sample(config)
    if args.states_out:
        _write_lattice_any(args.states_out, states, args.format)
        print(f"states={args.states_out}")
    if emission is not None:
        if not args.out:
            raise InputError("synth with an emission needs --out")
        obs = emit_observations(states, emission, seed=args.seed + 1)
        _write_lattice_any(args.out, obs, args.format if obs.kind == "discrete" else "lat")
        print(f"observations={args.out}")
    return 0


def _cmd_learn(args):
    if args.w is None and args.wl is None:
        raise InputError("learn needs --w or --wl")
    w, w_e, w_l = _radii(args)
    if args.wl is not None and args.w is None:
        w = w_e = w_l
    lattices = [io.read_lattice_auto(p, M=args.m) for p in args.inputs]
    if args.variant == "discrete":
        model = learn_discrete(lattices, w_l, args.n, w=w, w_e=w_e, alpha=args.alpha)
    else:
        model = learn_real(lattices, w_l, args.n, w=w, w_e=w_e, alpha=args.alpha)
    io.write_model(args.out, model)
    print(f"model={args.out}")
    return 0


def _cmd_decode(args):
    model = io.read_model(args.model)
    obs = io.read_lattice_auto(args.input, M=model.M if isinstance(model, DiscreteModel) else None)
    _, states = (decode_discrete if isinstance(model, DiscreteModel) else decode_real)(model, obs)
    io.write_lattice(args.out, states)
    print(f"states={args.out}")
    if args.pgm:
        io.states_to_pgm(args.pgm, states)
        print(f"pgm={args.pgm}")
    return 0


def _cmd_evaluate(args):
    model = io.read_model(args.model)
    obs = io.read_lattice_auto(args.input, M=model.M if isinstance(model, DiscreteModel) else None)
    score = (evaluate_discrete if isinstance(model, DiscreteModel) else evaluate_real)(model, obs)
    print(f"logp={score:.17g}")
    return 0


def _cmd_classify(args):
    bundle = io.read_bundle(args.bundle)
    discrete = bundle.variant == "discrete"
    obs = io.read_lattice_auto(args.input, M=bundle.classes[0].model.M if discrete else None)
    label, scores = classify_image(bundle, obs)
    print(f"label={label}")
    for entry, score in zip(bundle.classes, scores):
        print(f"score[{entry.label}]={score:.17g}")
    if args.softmax:
        for entry, p in zip(bundle.classes, softmax_scores(scores)):
            print(f"posterior[{entry.label}]={p:.17g}")
    return 0


def _cmd_index(args):
    if not args.model and not args.states:
        raise InputError("index needs --model and/or --states")
    assoc = inertia = window = n = None
    if args.model:
        model = io.read_model(args.model)
        assoc = associativity_index(model.A)
        n = model.N
    if args.states:
        lat = io.read_lattice_auto(args.states)
        if lat.kind != "discrete":
            raise InputError("state lattice must be discrete")
        n = n if n is not None else lat.M
        states = StateLattice(lat.shape, lat.values, n)
        window = args.w
        inertia = inertia_index(states, window, interior_only=args.interior_only)
    for line in IndexReport(assoc, inertia, window, n).lines():
        print(line)
    return 0


def _cmd_quantize(args):
    lat = io.read_lattice_auto(args.input, M=args.m)
    if lat.kind == "real":
        points = lat.values.reshape(-1, lat.M)
    else:
        points = np.eye(lat.M)[lat.values.ravel()]  # symbols as simplex corners
    codebook, _ = pnn_quantize(points, args.n)
    io.write_codebook(args.out, codebook)
    print(f"codebook={args.out}")
    return 0


def build_parser() -> _Parser:
    p = _Parser(prog="lvlm", description="Latent-variable lattice models")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("synth", help="sample states (and observations) from a potential model")
    sp.add_argument("--shape", required=True, help="e.g. 64x64 or 128 or 8x8x8")
    sp.add_argument("--n", type=int, help="state count")
    sp.add_argument("--self-weight", type=float, default=0.95, dest="self_weight")
    sp.add_argument("--potentials", help="full N x N matrix, rows ';'-separated")
    sp.add_argument("--b", help="discrete emission matrix N x M")
    sp.add_argument("--mu", help="real emission means N x M")
    sp.add_argument("--sigma", help="real emission covariances, N rows of M*M values")
    sp.add_argument("--sigma-scale", type=float, default=1.0, dest="sigma_scale")
    sp.add_argument("--sweeps", type=int, default=50)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", help="observation lattice path")
    sp.add_argument("--states-out", dest="states_out", help="ground-truth state lattice path")
    sp.add_argument("--format", choices=["lat", "pgm"], default="lat")
    sp.set_defaults(func=_cmd_synth)

    lp = sub.add_parser("learn", help="learn a model from lattice files")
    lp.add_argument("--variant", choices=["discrete", "real"], required=True)
    lp.add_argument("--n", type=int, required=True)
    lp.add_argument("--w", type=int)
    lp.add_argument("--we", type=int)
    lp.add_argument("--wl", type=int)
    lp.add_argument("--alpha", type=float, default=1.0)
    lp.add_argument("--m", type=int, help="symbol alphabet size (default: inferred)")
    lp.add_argument("--in", dest="inputs", action="append", required=True)
    lp.add_argument("--out", required=True)
    lp.set_defaults(func=_cmd_learn)

    dp = sub.add_parser("decode", help="decode a lattice to states")
    dp.add_argument("--model", required=True)
    dp.add_argument("--in", dest="input", required=True)
    dp.add_argument("--out", required=True)
    dp.add_argument("--pgm", help="also write a gray-level PGM visualization")
    dp.set_defaults(func=_cmd_decode)

    ep = sub.add_parser("evaluate", help="log-score a lattice under a model")
    ep.add_argument("--model", required=True)
    ep.add_argument("--in", dest="input", required=True)
    ep.set_defaults(func=_cmd_evaluate)

    cp = sub.add_parser("classify", help="classify a lattice with a model bundle")
    cp.add_argument("--bundle", required=True)
    cp.add_argument("--in", dest="input", required=True)
    cp.add_argument("--softmax", action="store_true", help="also print display posteriors")
    cp.set_defaults(func=_cmd_classify)

    ip = sub.add_parser("index", help="associativity / inertia report")
    ip.add_argument("--model")
    ip.add_argument("--states")
    ip.add_argument("--w", type=int, default=1)
    ip.add_argument("--interior-only", action="store_true", dest="interior_only")
    ip.set_defaults(func=_cmd_index)

    qp = sub.add_parser("quantize", help="PNN-quantize lattice vectors into a codebook")
    qp.add_argument("--in", dest="input", required=True)
    qp.add_argument("--n", type=int, required=True)
    qp.add_argument("--m", type=int, help="alphabet size for discrete input")
    qp.add_argument("--out", required=True)
    qp.set_defaults(func=_cmd_quantize)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except InputError as e:
        print(f"lvlm: error: {e}", file=sys.stderr)
        return 1
    except (NumericError, np.linalg.LinAlgError) as e:
        print(f"lvlm: numeric error: {e}", file=sys.stderr)
        return 2
    except FileNotFoundError as e:
        print(f"lvlm: error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
