import csv
import random

POSITIVE = ["Thank you, that was really helpful", "great answer :)", "I love this, thanks",
            "this is great!!", "nice, works fine now"]
NEGATIVE = ["I have very simple and stupid trouble", "I hate this bad bug", "this is bad :(",
            "stupid trouble again", "I hate it!"]
NEUTRAL = ["I want them to resize based on the length of the data they're showing.",
           "use a list here", "call the method twice", "see the docs for details",
           "the loop runs over each row"]
POOLS = {"positive": POSITIVE, "negative": NEGATIVE, "neutral": NEUTRAL}


def labeled_rows(n, seed=0):
    rng = random.Random(seed)
    rows = []
    for i in range(n):
        label = ("positive", "negative", "neutral")[i % 3]
        text = rng.choice(POOLS[label]) + " " + rng.choice(["ok", "<code>x = 1</code>", "so", ""])
        rows.append((f"p{i}", ("q", "a", "qc", "ac")[i % 4], text.strip(), label))
    return rows


def write_posts(path, rows, labeled=True):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["id", "post_type", "text", "label"] if labeled else ["id", "post_type", "text"])
        for row in rows:
            w.writerow(row if labeled else row[:3])
    return path
