"""Sentiment lexicon resources and prior-polarity lookup.

A lexicon directory holds five UTF-8 files::

    terms.tsv       term<TAB>score     (score in [-5, 5] minus 0; trailing * = prefix)
    emoticons.tsv   emoticon<TAB>score
    boosters.tsv    term<TAB>boost     (boost in {-1, 1, 2})
    negations.txt   one term per line
    laughter.txt    one abbreviation per line

Blank lines and lines starting with ``#`` are ignored everywhere.
"""
import os
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from types import MappingProxyType

LEXICON_ENV = "DEVSENTI_LEXICON_DIR"

FILES = {
    "terms": "terms.tsv",
    "emoticons": "emoticons.tsv",
    "boosters": "boosters.tsv",
    "negations": "negations.txt",
    "laughter": "laughter.txt",
}

BOOSTER_VALUES = frozenset({-1, 1, 2})


class LexiconError(ValueError):
    pass


class MissingFile(LexiconError, FileNotFoundError):
    pass


class ParseError(LexiconError):
    def __init__(self, path, line, reason):
        super().__init__(f"{path}:{line}: {reason}")
        self.path, self.line = path, line


class DuplicateTerm(LexiconError):
    def __init__(self, term):
        super().__init__(f"duplicate lexicon entry: {term!r}")
        self.term = term


class ScoreOutOfRange(LexiconError):
    def __init__(self, term, score):
        super().__init__(f"score {score} out of range for {term!r}")
        self.term, self.score = term, score


class PolarityClass(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    NEUTRAL = "neutral"


@dataclass(frozen=True)
class PriorPolarity:
    score: int
    emoticon: bool = False
    polarity: PolarityClass = field(init=False)

    def __post_init__(self):
        if self.score == 0 or not -5 <= self.score <= 5:
            raise ValueError(f"invalid prior score {self.score}")
        if self.emoticon:
            # the emoticon table has no neutral band: any nonzero score is polar
            cls = PolarityClass.POSITIVE if self.score > 0 else PolarityClass.NEGATIVE
        elif self.score >= 2:
            cls = PolarityClass.POSITIVE
        elif self.score <= -2:
            cls = PolarityClass.NEGATIVE
        else:
            cls = PolarityClass.NEUTRAL
        object.__setattr__(self, "polarity", cls)

    @property
    def positive(self):
        return self.polarity is PolarityClass.POSITIVE

    @property
    def negative(self):
        return self.polarity is PolarityClass.NEGATIVE


def _check_score(term, score):
    if score == 0 or not -5 <= score <= 5:
        raise ScoreOutOfRange(term, score)


class Lexicon:
    """Immutable term/emoticon/booster/negation/laughter tables.

    All keys are case-folded; ``prior_polarity`` prefers emoticons, then
    exact terms, then the longest matching ``stem*`` pattern.
    """

    def __init__(self, terms=None, emoticons=None, boosters=None, negations=(), laughter=()):
        exact, prefixes = {}, {}
        for term, score in (terms or {}).items():
            score = int(score)
            _check_score(term, score)
            key = term.casefold()
            table = exact
            if key.endswith("*"):
                key, table = key.rstrip("*"), prefixes
                if not key:
                    raise LexiconError("empty prefix pattern")
            if key in table:
                raise DuplicateTerm(term)
            table[key] = score
        emos = {}
        for emo, score in (emoticons or {}).items():
            score = int(score)
            _check_score(emo, score)
            key = emo.casefold()
            if key in emos:
                raise DuplicateTerm(emo)
            emos[key] = score
        boost = {}
        for term, value in (boosters or {}).items():
            value = int(value)
            if value not in BOOSTER_VALUES:
                raise ScoreOutOfRange(term, value)
            key = term.casefold()
            if key in boost:
                raise DuplicateTerm(term)
            boost[key] = value
        self._terms = dict(exact)
        self._prefixes = dict(prefixes)
        self._emoticons = dict(emos)
        self._boosters = dict(boost)
        self._negations = frozenset(t.casefold() for t in negations)
        self._laughter = frozenset(t.casefold() for t in laughter)
        self._max_prefix = max((len(p) for p in prefixes), default=0)
        # original-case emoticon surfaces for the tokenizer
        self.emoticon_surfaces = frozenset((emoticons or {}).keys())

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    @property
    def prefixes(self):
        return MappingProxyType(self._prefixes)

    @property
    def emoticons(self):
        return MappingProxyType(self._emoticons)

    @property
    def boosters(self):
        return MappingProxyType(self._boosters)

    @property
    def negations(self):
        return self._negations

    @property
    def laughter(self):
        return self._laughter

    def term_score(self, word: str):
        """Score of a word from the term table only (no emoticons), or None."""
        key = word.casefold()
        score = self._terms.get(key)
        if score is not None:
            return score
        for k in range(min(len(key), self._max_prefix), 0, -1):
            score = self._prefixes.get(key[:k])
            if score is not None:
                return score
        return None

    def lookup(self, text: str):
        key = text.casefold()
        score = self._emoticons.get(key)
        if score is not None:
            return PriorPolarity(score, emoticon=True)
        score = self.term_score(key)
        if score is not None:
            return PriorPolarity(score)
        return None

    def booster(self, text: str) -> int:
        return self._boosters.get(text.casefold(), 0)

    def is_negation(self, text: str) -> bool:
        return text.casefold() in self._negations

    def is_laughter(self, text: str) -> bool:
        return text.casefold() in self._laughter


def prior_polarity(lexicon: Lexicon, token):
    """PriorPolarity for a Token (or plain string), None when unlisted."""
    return lexicon.lookup(getattr(token, "surface", token))


def _lines(path):
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n").rstrip("\r")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            yield lineno, line


def _read_scored(path):
    table = {}
    for lineno, line in _lines(path):
        parts = line.split("\t")
        if len(parts) < 2 or not parts[0].strip():
            raise ParseError(path, lineno, "expected term<TAB>score")
        term = parts[0].strip()
        try:
            score = int(parts[1].strip())
        except ValueError:
            raise ParseError(path, lineno, f"non-integer score {parts[1]!r}") from None
        if term.casefold() in table:
            raise DuplicateTerm(term)
        table[term.casefold()] = (term, score)
    return {term: score for term, score in table.values()}


def _read_list(path):
    return [line.split("\t")[0].strip() for _, line in _lines(path)]


def load_lexicon(directory=None) -> Lexicon:
    """Load the five lexicon files from ``directory`` (or $DEVSENTI_LEXICON_DIR)."""
    directory = directory or os.environ.get(LEXICON_ENV)
    if not directory:
        raise MissingFile(f"no lexicon directory given (set {LEXICON_ENV})")
    root = Path(directory)
    paths = {key: root / name for key, name in FILES.items()}
    for path in paths.values():
        if not path.is_file():
            raise MissingFile(f"missing lexicon file: {path}")
    return Lexicon(
        terms=_read_scored(paths["terms"]),
        emoticons=_read_scored(paths["emoticons"]),
        boosters=_read_scored(paths["boosters"]),
        negations=_read_list(paths["negations"]),
        laughter=_read_list(paths["laughter"]),
    )


def write_lexicon(directory, terms=(), emoticons=(), boosters=(), negations=(), laughter=()):
    """Write tables in the directory layout ``load_lexicon`` reads."""
    root = Path(directory)
    root.mkdir(parents=True, exist_ok=True)

    def scored(name, table):
        items = table.items() if hasattr(table, "items") else table
        with open(root / FILES[name], "w", encoding="utf-8") as fh:
            for term, score in items:
                fh.write(f"{term}\t{score}\n")

    def plain(name, items):
        with open(root / FILES[name], "w", encoding="utf-8") as fh:
            for term in items:
                fh.write(f"{term}\n")

    scored("terms", terms)
    scored("emoticons", emoticons)
    scored("boosters", boosters)
    plain("negations", negations)
    plain("laughter", laughter)
    return root
