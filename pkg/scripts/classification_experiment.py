#!/usr/bin/env python3
"""Two-class synthetic classification experiment.

Samples one training image per class from the same associative potential
field but with class-specific emission matrices, learns a model per class,
and reports Bayesian classification accuracy on freshly sampled test images.
"""

import argparse
import math

import numpy as np

from lvlm import (
    ClassEntry,
    ClassifierBundle,
    DiscreteEmission,
    LatticeShape,
    SynthConfig,
    classify_image,
    emit_observations,
    gibbs_sample,
    learn_discrete,
)

CLASS_EMISSIONS = {
    "alpha": np.array([[0.7, 0.2, 0.1], [0.1, 0.2, 0.7]]),
    "beta": np.array([[0.2, 0.7, 0.1], [0.1, 0.7, 0.2]]),
}
POTENTIALS = np.array([[0.95, 0.05], [0.05, 0.95]])


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--side", type=int, default=64)
    parser.add_argument("--tests", type=int, default=50)
    parser.add_argument("--sweeps", type=int, default=50)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    shape = LatticeShape((args.side, args.side))
    base = args.seed

    entries = []
    for i, (label, B) in enumerate(CLASS_EMISSIONS.items()):
        states = gibbs_sample(SynthConfig(shape=shape, N=2, potentials=POTENTIALS,
                                          sweeps=args.sweeps, seed=base + 1000 + i))
        train = emit_observations(states, DiscreteEmission(B), seed=base + 2000 + i)
        entries.append(ClassEntry(label, learn_discrete(train, 2, 2), math.log(0.5)))
        print(f"learned class {label!r}")
    bundle = ClassifierBundle(entries)

    labels = list(CLASS_EMISSIONS)
    correct = 0
    for k in range(args.tests):
        label = labels[k % len(labels)]
        states = gibbs_sample(SynthConfig(shape=shape, N=2, potentials=POTENTIALS,
                                          sweeps=args.sweeps, seed=base + 3000 + k))
        test = emit_observations(states, DiscreteEmission(CLASS_EMISSIONS[label]),
                                 seed=base + 4000 + k)
        predicted, scores = classify_image(bundle, test)
        correct += predicted == label
    print(f"accuracy: {correct}/{args.tests} = {correct / args.tests:.2%}")


if __name__ == "__main__":
    main()
