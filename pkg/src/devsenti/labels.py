from enum import Enum


class Label(str, Enum):
    NEGATIVE = "negative"
    NEUTRAL = "neutral"
    POSITIVE = "positive"

    def __str__(self):
        return self.value


class Trinary(str, Enum):
    """Baseline output; UNDETERMINED marks strong mixed sentiment."""

    POSITIVE = "positive"
    NEGATIVE = "negative"
    NEUTRAL = "neutral"
    UNDETERMINED = "undetermined"

    def __str__(self):
        return self.value


# learner decision order, doubles as the tie-break order
CLASS_ORDER = (Label.NEGATIVE, Label.NEUTRAL, Label.POSITIVE)

# integer codes used by the sparse feature export
LABEL_CODES = {Label.NEGATIVE: -1, Label.NEUTRAL: 0, Label.POSITIVE: 1}
CODE_LABELS = {v: k for k, v in LABEL_CODES.items()}


def as_label(value):
    """Coerce a string (or Label/Trinary) to a Label; raises ValueError otherwise."""
    if isinstance(value, Label):
        return value
    try:
        return Label(str(value).strip().lower())
    except ValueError:
        raise ValueError(f"invalid polarity label: {value!r}") from None
