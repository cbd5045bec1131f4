"""Full-scale reproduction on a released gold standard.

Expects a directory holding::

    gold.csv      id,post_type,text,label
    lexicon/      the five lexicon files
    vectors.txt   word2vec text-format embedding space

Usage: python scripts/reproduce_gold.py DIR [--seed 0] [--C 0.05] [--workers 4]
"""
import argparse
import json
import sys
from pathlib import Path

import numpy as np

from devsenti.baseline import trinary
from devsenti.corpus import read_labeled_posts
from devsenti.evalkit import ablation_run, confusion, prf, rank_features
from devsenti.evalkit.sampling import stratified_split
from devsenti.features import build_schema
from devsenti.labels import Label, Trinary
from devsenti.pipeline import Resources, baseline_scores, dataset, preprocess_posts

SETTINGS = ("ngrams", "keyword", "keyword+semantic", "full")


def run(root, seed=0, C=0.05, train_fraction=0.7, workers=1):
    root = Path(root)
    res = Resources.load(root / "lexicon", root / "vectors.txt")
    posts, labels = read_labeled_posts(root / "gold.csv")
    docs = preprocess_posts(posts, res.emoticons, workers)
    tr, te = stratified_split(labels, train_fraction, seed)
    train_docs = [docs[i] for i in tr]
    test_docs = [docs[i] for i in te]
    train_labels = [labels[i] for i in tr]
    test_labels = [labels[i] for i in te]

    schema = build_schema(train_docs)
    keyword_block = len(schema.unigram_index) + len(schema.bigram_index) + len(schema.micro_names)
    train_data = dataset(train_docs, train_labels, schema, res, workers)
    test_data = dataset(test_docs, test_labels, schema, res, workers)
    results = ablation_run(train_data, test_data, schema, SETTINGS, C=C, seed=seed)
    ladder = {r.name: r.report.overall.F for r in results}

    # undetermined baseline outputs are dropped, as in the evaluate command
    pairs = [(g, Label(t.value)) for g, t in
             zip(test_labels, map(trinary, baseline_scores(test_docs, res.lexicon)))
             if t is not Trinary.UNDETERMINED]
    baseline_f = prf(confusion([g for g, _ in pairs], [p for _, p in pairs])).overall.F

    top = rank_features(train_data.X, schema.column_names(), train_labels, top=10)
    return {
        "keyword_block": keyword_block,
        "ladder": ladder,
        "full_f": ladder["full"],
        "baseline_f": baseline_f,
        "baseline_undetermined": len(test_docs) - len(pairs),
        "top10_ig": [name for name, _ in top],
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("root", type=Path)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--C", type=float, default=0.05)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args(argv)
    np.set_printoptions(precision=3)
    out = run(args.root, seed=args.seed, C=args.C, workers=args.workers)
    json.dump(out, sys.stdout, indent=2)
    print()


if __name__ == "__main__":
    main()
