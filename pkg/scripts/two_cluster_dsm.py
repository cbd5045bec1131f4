"""Train CBOW on a synthetic two-cluster corpus and print cluster cosines.

Usage: python scripts/two_cluster_dsm.py [--sentences 10000] [--dim 50] [--seed 11]
"""
import argparse
import itertools
import time

import numpy as np

from devsenti.dsm import TrainParams, cosine, train_embeddings


def corpus(n_sentences, vocab_per_cluster=20, length=8, seed=11):
    rng = np.random.default_rng(seed)
    clusters = [[f"alpha{i}" for i in range(vocab_per_cluster)],
                [f"beta{i}" for i in range(vocab_per_cluster)]]
    return [list(rng.choice(clusters[rng.integers(2)], size=length)) for _ in range(n_sentences)]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sentences", type=int, default=10_000)
    ap.add_argument("--dim", type=int, default=50)
    ap.add_argument("--seed", type=int, default=11)
    args = ap.parse_args(argv)

    start = time.perf_counter()
    space = train_embeddings(corpus(args.sentences, seed=args.seed),
                             TrainParams(dim=args.dim, min_count=5, seed=1))
    elapsed = time.perf_counter() - start
    within, between = [], []
    for a, b in itertools.combinations(space.words, 2):
        (within if a[:4] == b[:4] else between).append(cosine(space.vector(a), space.vector(b)))
    print(f"vocabulary      {len(space)}")
    print(f"within cosine   {np.mean(within):.3f}")
    print(f"between cosine  {np.mean(between):.3f}")
    print(f"margin          {np.mean(within) - np.mean(between):.3f}")
    print(f"seconds         {elapsed:.1f}")


if __name__ == "__main__":
    main()
