"""Annotation records, pairwise agreement and majority-vote gold labels."""
import csv
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..labels import Label

EMOTIONS = ("love", "joy", "surprise", "anger", "sadness", "fear")
POSITIVE_EMOTIONS = frozenset({"love", "joy"})
NEGATIVE_EMOTIONS = frozenset({"anger", "sadness", "fear"})


class Polarity(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    NEUTRAL = "neutral"
    MIXED = "mixed"

    def __str__(self):
        return self.value


EXCLUDED = "excluded"

# disagreement weights: mild (polar vs neutral) = 1, strong (pos vs neg) = 2;
# mixed sits next to both poles and opposite neutral
KAPPA_CATEGORIES = (Polarity.POSITIVE, Polarity.NEGATIVE, Polarity.NEUTRAL, Polarity.MIXED)
KAPPA_WEIGHTS = np.array([
    # pos neg neu mix
    [0, 2, 1, 1],
    [2, 0, 1, 1],
    [1, 1, 0, 2],
    [1, 1, 2, 0],
], dtype=np.float64)


class AgreementError(ValueError):
    pass


class LengthMismatch(AgreementError):
    pass


class UndefinedExpectation(AgreementError):
    pass


class DegenerateKappaWarning(UserWarning):
    pass


class InvalidAnnotation(AgreementError):
    pass


class WrongArity(AgreementError):
    pass


class DuplicateCoder(AgreementError):
    pass


def as_polarity(value):
    if isinstance(value, Polarity):
        return value
    try:
        return Polarity(str(value).strip().lower())
    except ValueError:
        raise AgreementError(f"invalid polarity {value!r}") from None


def annotation_allowed(emotions, polarity) -> bool:
    """Whether an (emotion set, polarity) pair is a legal annotation."""
    emotions = frozenset(emotions)
    polarity = as_polarity(polarity)
    pos = emotions & POSITIVE_EMOTIONS
    neg = emotions & NEGATIVE_EMOTIONS
    surprise = "surprise" in emotions
    if polarity is Polarity.NEUTRAL:
        return emotions <= {"surprise"}
    if polarity is Polarity.POSITIVE:
        return not neg and bool(pos or surprise)
    if polarity is Polarity.NEGATIVE:
        return not pos and bool(neg or surprise)
    return bool(pos) and bool(neg)


@dataclass(frozen=True)
class AnnotationRecord:
    item_id: str
    coder_id: str
    emotion_labels: frozenset
    polarity: Polarity

    def __post_init__(self):
        emotions = frozenset(e.strip().lower() for e in self.emotion_labels)
        unknown = emotions - set(EMOTIONS)
        if unknown:
            raise InvalidAnnotation(f"unknown emotion(s) {sorted(unknown)}")
        object.__setattr__(self, "emotion_labels", emotions)
        object.__setattr__(self, "polarity", as_polarity(self.polarity))
        if not annotation_allowed(emotions, self.polarity):
            raise InvalidAnnotation(
                f"item {self.item_id}, coder {self.coder_id}: "
                f"{sorted(emotions) or 'no emotion'} with {self.polarity.value} polarity")


@dataclass(frozen=True)
class GoldLabel:
    item_id: str
    label: object  # Label, or EXCLUDED

    @property
    def excluded(self):
        return self.label == EXCLUDED


def majority_vote(records) -> GoldLabel:
    """Gold label from three annotations of one item.

    Any mixed annotation, or positive and negative together, excludes the
    item even when a majority exists.
    """
    records = list(records)
    if len(records) != 3:
        raise WrongArity(f"expected 3 annotations, got {len(records)}")
    items = {r.item_id for r in records}
    if len(items) != 1:
        raise WrongArity(f"annotations cover several items: {sorted(items)}")
    coders = [r.coder_id for r in records]
    if len(set(coders)) != 3:
        raise DuplicateCoder(f"coders not distinct: {coders}")
    item = records[0].item_id
    votes = [r.polarity for r in records]
    if Polarity.MIXED in votes or (Polarity.POSITIVE in votes and Polarity.NEGATIVE in votes):
        return GoldLabel(item, EXCLUDED)
    # remaining votes come from {pos, neu} or {neg, neu}: three votes, two values
    winner = max(set(votes), key=votes.count)
    return GoldLabel(item, Label(winner.value))


def observed_agreement(a, b) -> float:
    a = [as_polarity(x) for x in a]
    b = [as_polarity(x) for x in b]
    if len(a) != len(b):
        raise LengthMismatch(f"{len(a)} vs {len(b)} labels")
    if not a:
        raise AgreementError("no items")
    return sum(x is y for x, y in zip(a, b)) / len(a)


def weighted_kappa(a, b) -> float:
    """Cohen's weighted kappa with mild = 1, strong = 2 disagreement weights.

    If both coders use one identical label throughout, the expected
    disagreement is zero; kappa is reported as 1 and a
    DegenerateKappaWarning is emitted.
    """
    a = [as_polarity(x) for x in a]
    b = [as_polarity(x) for x in b]
    if len(a) != len(b):
        raise LengthMismatch(f"{len(a)} vs {len(b)} labels")
    if not a:
        raise AgreementError("no items")
    k = len(KAPPA_CATEGORIES)
    observed = np.zeros((k, k))
    for x, y in zip(a, b):
        observed[KAPPA_CATEGORIES.index(x), KAPPA_CATEGORIES.index(y)] += 1
    observed /= len(a)
    expected = np.outer(observed.sum(axis=1), observed.sum(axis=0))
    num = float((KAPPA_WEIGHTS * observed).sum())
    den = float((KAPPA_WEIGHTS * expected).sum())
    if den == 0.0:
        if num == 0.0:
            warnings.warn("constant identical annotations: kappa reported as 1",
                          DegenerateKappaWarning, stacklevel=2)
            return 1.0
        raise UndefinedExpectation("zero expected disagreement")
    return 1.0 - num / den


# --- annotation file --------------------------------------------------------

def read_annotations(path):
    """Read ``item_id,coder_id,emotions,polarity`` rows (emotions ``;``-separated)."""
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        required = {"item_id", "coder_id", "emotions", "polarity"}
        if reader.fieldnames is None:
            return out
        if not required <= set(reader.fieldnames):
            raise AgreementError(f"{path}: expected columns {sorted(required)}")
        for lineno, row in enumerate(reader, start=2):
            emotions = [e for e in (row["emotions"] or "").split(";") if e.strip()]
            try:
                out.append(AnnotationRecord(row["item_id"], row["coder_id"],
                                            frozenset(emotions), row["polarity"]))
            except AgreementError as exc:
                raise AgreementError(f"{path}:{lineno}: {exc}") from None
    return out


def group_by_item(records):
    items = {}
    for r in records:
        items.setdefault(r.item_id, []).append(r)
    return items


def pairwise_agreement(records):
    """Kappa and observed agreement for every pair of coders sharing items.

    Returns ``{(coder_a, coder_b): {"kappa": k, "observed": o, "items": n}}``.
    """
    by_coder = {}
    for r in records:
        by_coder.setdefault(r.coder_id, {})[r.item_id] = r.polarity
    coders = sorted(by_coder)
    out = {}
    for i, ca in enumerate(coders):
        for cb in coders[i + 1:]:
            shared = sorted(set(by_coder[ca]) & set(by_coder[cb]))
            if not shared:
                continue
            a = [by_coder[ca][x] for x in shared]
            b = [by_coder[cb][x] for x in shared]
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", DegenerateKappaWarning)
                kappa = weighted_kappa(a, b)
            out[(ca, cb)] = {"kappa": kappa, "observed": observed_agreement(a, b),
                             "items": len(shared)}
    return out
