"""Lexicon-based dual-scale polarity scorer.

Each sentence gets a positive strength ``p`` in [1, 5] and a negative
strength ``n`` in [-5, -1]; a document takes the strongest of each over its
sentences, and ``trinary`` collapses the pair to a single label.
"""
from dataclasses import dataclass

from .corpus import CleanDocument
from .labels import Trinary
from .lexicon import Lexicon

NEGATION_SCOPE = 2
MAX_STRENGTH = 5


@dataclass(frozen=True)
class SentimentScores:
    p: int = 1
    n: int = -1

    def __post_init__(self):
        if not (1 <= self.p <= MAX_STRENGTH and -MAX_STRENGTH <= self.n <= -1):
            raise ValueError(f"invalid scores p={self.p}, n={self.n}")


NO_SENTIMENT = SentimentScores(1, -1)


def _ends_with_exclamation(tokens):
    return bool(tokens) and tokens[-1].surface.endswith("!")


def _contextual_score(tokens, i, prior, lexicon, notes):
    """Apply booster and negation context to a word's prior score."""
    score = prior.score
    if abs(score) < 2:
        return score
    if i > 0:
        boost = lexicon.booster(tokens[i - 1].surface)
        if boost:
            magnitude = min(MAX_STRENGTH, max(1, abs(score) + boost))
            score = magnitude if score > 0 else -magnitude
            notes.append(f"{boost:+d} booster word")
    window = tokens[max(0, i - NEGATION_SCOPE):i]
    if any(lexicon.is_negation(t.surface) for t in window):
        score = -score
        if abs(score) < 2:
            score = 2 if score > 0 else -2
        notes.append(f"negated: {score}")
    return score


def score_sentence(tokens, lexicon: Lexicon, trace=None) -> SentimentScores:
    """Score one sentence.

    If ``trace`` is a list, one string per token is appended describing how
    the token was scored (for ``--explain`` output).
    """
    p, n = 1, -1
    for i, tok in enumerate(tokens):
        prior = lexicon.lookup(tok.surface)
        notes = []
        score = None
        if prior is not None:
            if prior.emoticon:
                score = prior.score
            else:
                score = _contextual_score(tokens, i, prior, lexicon, notes)
            if score > 0:
                p = max(p, min(score, MAX_STRENGTH))
            elif score < 0:
                n = min(n, max(score, -MAX_STRENGTH))
        if trace is not None:
            text = tok.surface
            if prior is not None and (prior.emoticon or abs(prior.score) >= 2):
                text += f" [{prior.score}]"
            for note in notes:
                text += f" [{note}]"
            trace.append(text)
    if _ends_with_exclamation(tokens):
        if p >= 2:
            p = min(MAX_STRENGTH, p + 1)
        if n <= -2:
            n = max(-MAX_STRENGTH, n - 1)
        if trace is not None and (p >= 2 or n <= -2):
            trace.append("[emphasis]")
    return SentimentScores(p, n)


def score_document(doc: CleanDocument, lexicon: Lexicon, trace=None) -> SentimentScores:
    p, n = 1, -1
    for tokens in doc.sentence_tokens():
        sentence_trace = [] if trace is not None else None
        s = score_sentence(tokens, lexicon, sentence_trace)
        if trace is not None:
            trace.append(" ".join(sentence_trace) + f" [sentence: {s.p}, {s.n}]")
        p, n = max(p, s.p), min(n, s.n)
    return SentimentScores(p, n)


def trinary(s: SentimentScores) -> Trinary:
    total = s.p + s.n
    if total > 0:
        return Trinary.POSITIVE
    if total < 0:
        return Trinary.NEGATIVE
    # equal magnitudes: weak is neutral, strong is conflicting
    return Trinary.NEUTRAL if s.p < 4 else Trinary.UNDETERMINED


def explain(doc: CleanDocument, lexicon: Lexicon) -> str:
    """Per-token scoring trace followed by the document result."""
    trace = []
    s = score_document(doc, lexicon, trace)
    label = trinary(s)
    if label is Trinary.POSITIVE:
        overall = "overall result = 1 as pos>-neg"
    elif label is Trinary.NEGATIVE:
        overall = "overall result = -1 as pos<-neg"
    else:
        overall = f"overall result = 0 as pos={s.p} neg={s.n}"
        if label is Trinary.UNDETERMINED:
            overall += " (undetermined)"
    trace.append("[result: max + and - of any sentence]")
    trace.append(f"[{overall}]")
    return " ".join(trace)
