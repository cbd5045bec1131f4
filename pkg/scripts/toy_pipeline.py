"""End-to-end run on a small synthetic corpus.

Writes a toy lexicon, labeled posts and an embedding space trained on the
posts into DIR, then runs the same train/evaluate/ablation flow as
``reproduce_gold.py``. Scores are meaningless; the point is that every
stage connects.

Usage: python scripts/toy_pipeline.py DIR [--posts 600] [--seed 0]
"""
import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from devsenti.corpus import document_from_text
from devsenti.dsm import TrainParams, save_embeddings, train_embeddings
from devsenti.lexicon import write_lexicon

sys.path.insert(0, str(Path(__file__).resolve().parent))
import reproduce_gold  # noqa: E402

POSITIVE = ["thanks, that was really helpful", "great answer :)", "love it, works fine now",
            "this is great!!", "nice fix, thank you"]
NEGATIVE = ["stupid trouble with this bug", "I hate this bad api", "this is bad :(",
            "awful crash again", "worst error ever!"]
NEUTRAL = ["use a list here", "call the method twice", "see the docs for details",
           "the loop runs over each row", "set the column width to auto"]
FILLER = ["", "ok", "in python", "with pandas", "on windows", "after the update"]


def write_gold(root, n, seed):
    rng = np.random.default_rng(seed)
    pools = {"positive": POSITIVE, "negative": NEGATIVE, "neutral": NEUTRAL}
    with open(root / "gold.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["id", "post_type", "text", "label"])
        for i in range(n):
            label = ("positive", "negative", "neutral")[i % 3]
            text = f"{rng.choice(pools[label])} {rng.choice(FILLER)}".strip()
            w.writerow([f"p{i}", ("q", "a", "qc", "ac")[i % 4], text, label])


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("root", type=Path)
    ap.add_argument("--posts", type=int, default=600)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    root = args.root
    root.mkdir(parents=True, exist_ok=True)

    write_lexicon(root / "lexicon",
                  terms={"thank*": 2, "helpful": 2, "great": 3, "love": 3, "nice": 2, "fine": 1,
                         "stupid": -3, "trouble": -2, "hate": -4, "bad": -3, "awful": -4,
                         "worst": -4},
                  emoticons={":)": 2, ":(": -2}, boosters={"really": 1},
                  negations=["not", "never"], laughter=["lol"])
    write_gold(root, args.posts, args.seed)
    with open(root / "gold.csv", encoding="utf-8") as fh:
        sentences = [[t.normalized for t in document_from_text(row["text"]).tokens]
                     for row in csv.DictReader(fh)]
    space = train_embeddings(sentences, TrainParams(dim=32, min_count=2, seed=args.seed + 1))
    save_embeddings(space, root / "vectors.txt")

    out = reproduce_gold.run(root, seed=args.seed)
    json.dump(out, sys.stdout, indent=2)
    print()


if __name__ == "__main__":
    main()
