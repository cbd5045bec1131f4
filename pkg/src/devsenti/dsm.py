"""Word embeddings: training, text-format I/O, document vectors, prototypes.

Training follows the reference word2vec C tool: negative sampling against a
unigram^0.75 noise table, frequent-word subsampling, randomly shrunk
windows and a linearly decaying learning rate. The inner loop is compiled
with numba and uses the tool's 64-bit LCG, so a run is fully determined by
the seed.
"""
import math
from collections import Counter
from dataclasses import asdict, dataclass, field

import numpy as np
from numba import njit

CBOW = "cbow"
SKIPGRAM = "skipgram"


class EmbeddingError(ValueError):
    pass


class EmptyCorpus(EmbeddingError):
    pass


class InvalidParams(EmbeddingError):
    pass


class ParseError(EmbeddingError):
    pass


class DimensionMismatch(ParseError):
    def __init__(self, declared, found, where=""):
        super().__init__(f"{where}declared dimension {declared}, found {found}")
        self.declared, self.found = declared, found


class LengthMismatch(ValueError):
    pass


@dataclass(frozen=True)
class TrainParams:
    architecture: str = CBOW
    dim: int = 600
    min_count: int = 10
    window: int = 5
    negative_samples: int = 5
    subsample_threshold: float = 1e-3
    epochs: int = 5
    alpha: float = 0.025
    seed: int = 1

    def validate(self):
        if self.architecture not in (CBOW, SKIPGRAM):
            raise InvalidParams(f"unknown architecture {self.architecture!r}")
        if self.dim < 1 or self.min_count < 1 or self.window < 1 or self.epochs < 1:
            raise InvalidParams("dim, min_count, window and epochs must be >= 1")
        if self.negative_samples < 1:
            raise InvalidParams("negative_samples must be >= 1")
        if self.subsample_threshold < 0 or self.alpha <= 0:
            raise InvalidParams("subsample_threshold must be >= 0 and alpha > 0")


@dataclass
class EmbeddingSpace:
    words: list
    vectors: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.vectors = np.asarray(self.vectors)
        if self.vectors.ndim != 2 or self.vectors.shape[0] != len(self.words):
            raise EmbeddingError("vectors must be a (vocab, dim) matrix")
        if not np.all(np.isfinite(self.vectors)):
            raise EmbeddingError("non-finite vector component")
        self.index = {}
        for i, w in enumerate(self.words):
            if w in self.index:
                raise EmbeddingError(f"duplicate word {w!r}")
            self.index[w] = i

    @property
    def dim(self):
        return self.vectors.shape[1]

    def __len__(self):
        return len(self.words)

    def __contains__(self, word):
        return word in self.index

    def vector(self, word):
        return self.vectors[self.index[word]]


# --- training ---------------------------------------------------------------

@njit(cache=True)
def _lcg(state):
    return (state * np.uint64(25214903917) + np.uint64(11)) & np.uint64(0xFFFFFFFFFFFFFFFF)


@njit(cache=True)
def _draw(cum, state):
    # uniform in [0, 1) from the high bits of the LCG state
    r = float((state >> np.uint64(16)) & np.uint64(0xFFFFFFFF)) / 4294967296.0
    return min(np.searchsorted(cum, r, side="right"), cum.shape[0] - 1)


@njit(cache=True)
def _train_kernel(sentences, offsets, keep_prob, cum, syn0, syn1, window, negative,
                  epochs, alpha0, cbow, seed):
    dim = syn0.shape[1]
    n_sent = offsets.shape[0] - 1
    total = epochs * sentences.shape[0]
    processed = 0
    state = np.uint64(seed)
    neu1 = np.zeros(dim)
    neu1e = np.zeros(dim)
    buf = np.empty(sentences.shape[0], dtype=np.int64)
    for _epoch in range(epochs):
        for s in range(n_sent):
            start, end = offsets[s], offsets[s + 1]
            m = 0
            for j in range(start, end):
                w = sentences[j]
                state = _lcg(state)
                r = float((state >> np.uint64(16)) & np.uint64(0xFFFF)) / 65536.0
                if keep_prob[w] >= r:
                    buf[m] = w
                    m += 1
            alpha = alpha0 * (1.0 - processed / (total + 1.0))
            if alpha < alpha0 * 1e-4:
                alpha = alpha0 * 1e-4
            processed += end - start
            for pos in range(m):
                word = buf[pos]
                state = _lcg(state)
                b = int(state % np.uint64(window))
                lo = max(0, pos - window + b)
                hi = min(m, pos + window - b + 1)
                if cbow:
                    neu1[:] = 0.0
                    neu1e[:] = 0.0
                    cw = 0
                    for c in range(lo, hi):
                        if c != pos:
                            neu1 += syn0[buf[c]]
                            cw += 1
                    if cw == 0:
                        continue
                    neu1 /= cw
                    for d in range(negative + 1):
                        if d == 0:
                            target, label = word, 1.0
                        else:
                            state = _lcg(state)
                            target = _draw(cum, state)
                            if target == word:
                                continue
                            label = 0.0
                        f = 0.0
                        for k in range(dim):
                            f += neu1[k] * syn1[target, k]
                        g = (label - 1.0 / (1.0 + math.exp(-max(-30.0, min(30.0, f))))) * alpha
                        for k in range(dim):
                            neu1e[k] += g * syn1[target, k]
                            syn1[target, k] += g * neu1[k]
                    for c in range(lo, hi):
                        if c != pos:
                            syn0[buf[c]] += neu1e
                else:
                    for c in range(lo, hi):
                        if c == pos:
                            continue
                        ctx = buf[c]
                        neu1e[:] = 0.0
                        for d in range(negative + 1):
                            if d == 0:
                                target, label = word, 1.0
                            else:
                                state = _lcg(state)
                                target = _draw(cum, state)
                                if target == word:
                                    continue
                                label = 0.0
                            f = 0.0
                            for k in range(dim):
                                f += syn0[ctx, k] * syn1[target, k]
                            g = (label - 1.0 / (1.0 + math.exp(-max(-30.0, min(30.0, f))))) * alpha
                            for k in range(dim):
                                neu1e[k] += g * syn1[target, k]
                                syn1[target, k] += g * syn0[ctx, k]
                        syn0[ctx] += neu1e
    return processed


def _read_corpus(corpus):
    if isinstance(corpus, (str, bytes)) or hasattr(corpus, "__fspath__"):
        with open(corpus, encoding="utf-8") as fh:
            return [line.split() for line in fh]
    return [list(s) for s in corpus]


def train_embeddings(corpus, params: TrainParams = TrainParams()) -> EmbeddingSpace:
    """Train word vectors on a token-line file or an iterable of token lists.

    Words are case-folded; the vocabulary keeps words seen at least
    ``min_count`` times, ordered by descending frequency.
    """
    params.validate()
    sentences = [[w.casefold() for w in s] for s in _read_corpus(corpus)]
    counts = Counter(w for s in sentences for w in s)
    if not counts:
        raise EmptyCorpus("corpus has no tokens")
    vocab = sorted((w for w, c in counts.items() if c >= params.min_count),
                   key=lambda w: (-counts[w], w))
    if not vocab:
        raise EmptyCorpus(f"no word occurs at least {params.min_count} times")
    index = {w: i for i, w in enumerate(vocab)}
    freq = np.array([counts[w] for w in vocab], dtype=np.float64)

    ids, offsets = [], [0]
    for s in sentences:
        ids.extend(index[w] for w in s if w in index)
        offsets.append(len(ids))
    ids = np.asarray(ids, dtype=np.int64)
    offsets = np.asarray(offsets, dtype=np.int64)
    train_words = freq.sum()

    if params.subsample_threshold > 0:
        t = params.subsample_threshold * train_words
        keep = (np.sqrt(freq / t) + 1.0) * t / freq
    else:
        keep = np.full(len(vocab), 2.0)
    noise = freq ** 0.75
    cum = np.cumsum(noise) / noise.sum()

    rng = np.random.default_rng(params.seed)
    syn0 = (rng.random((len(vocab), params.dim)) - 0.5) / params.dim
    syn1 = np.zeros((len(vocab), params.dim))
    _train_kernel(ids, offsets, keep, cum, syn0, syn1, params.window,
                  params.negative_samples, params.epochs, params.alpha,
                  params.architecture == CBOW, params.seed)
    meta = asdict(params)
    meta["vocab_size"] = len(vocab)
    return EmbeddingSpace(vocab, syn0, meta)


# --- text format ------------------------------------------------------------

def load_embeddings(path, dtype=np.float32) -> EmbeddingSpace:
    """Read ``<vocab> <dim>`` header followed by ``word c1 ... cdim`` lines.

    Words are case-folded; if folding merges two entries the first (most
    frequent, in word2vec output order) is kept.
    """
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ParseError(f"{path}:1: expected '<vocab_size> <dim>' header")
        try:
            size, dim = int(header[0]), int(header[1])
        except ValueError:
            raise ParseError(f"{path}:1: non-integer header") from None
        if size < 0 or dim < 1:
            raise ParseError(f"{path}:1: invalid header values")
        words, seen = [], set()
        vectors = np.empty((size, dim), dtype=dtype)
        row = 0
        for lineno, line in enumerate(fh, start=2):
            parts = line.rstrip("\n").rstrip().split(" ")
            if not parts or parts == [""]:
                continue
            if row >= size:
                raise ParseError(f"{path}:{lineno}: more entries than declared ({size})")
            if len(parts) - 1 != dim:
                raise DimensionMismatch(dim, len(parts) - 1, f"{path}:{lineno}: ")
            try:
                vec = np.array([float(x) for x in parts[1:]], dtype=np.float64)
            except ValueError:
                raise ParseError(f"{path}:{lineno}: non-numeric component") from None
            if not np.all(np.isfinite(vec)):
                raise ParseError(f"{path}:{lineno}: non-finite component")
            vectors[row] = vec
            words.append(parts[0].casefold())
            row += 1
        if row != size:
            raise ParseError(f"{path}: declared {size} entries, found {row}")
    keep = [i for i, w in enumerate(words) if not (w in seen or seen.add(w))]
    if len(keep) != len(words):
        vectors = vectors[keep]
        words = [words[i] for i in keep]
    return EmbeddingSpace(words, vectors, {"source": str(path)})


def save_embeddings(space: EmbeddingSpace, path):
    fmt = "%.9g" if space.vectors.dtype == np.float32 else "%.17g"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{len(space)} {space.dim}\n")
        for word, vec in zip(space.words, space.vectors):
            fh.write(word + " " + " ".join(fmt % x for x in vec) + "\n")


# --- document vectors and prototypes ----------------------------------------

def doc_vector(tokens, space: EmbeddingSpace) -> np.ndarray:
    """Superposition: sum of the vectors of in-vocabulary tokens."""
    out = np.zeros(space.dim, dtype=np.float64)
    for tok in tokens:
        i = space.index.get(getattr(tok, "normalized", tok))
        if i is not None:
            out += space.vectors[i]
    return out


def cosine(a, b) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise LengthMismatch(f"vector lengths differ: {a.shape} vs {b.shape}")
    na2, nb2 = float(np.dot(a, a)), float(np.dot(b, b))
    if na2 == 0.0 or nb2 == 0.0:
        return 0.0
    # sqrt(d * d) == d in IEEE arithmetic, so cosine(v, v) is exactly 1
    denom = np.sqrt(na2 * nb2) if np.isfinite(na2 * nb2) else np.sqrt(na2) * np.sqrt(nb2)
    return float(np.clip(np.dot(a, b) / denom, -1.0, 1.0))


@dataclass(frozen=True)
class PrototypeSet:
    pos: np.ndarray
    neg: np.ndarray
    neu: np.ndarray
    subj: np.ndarray

    def as_tuple(self):
        return self.pos, self.neg, self.neu, self.subj


def build_prototypes(space: EmbeddingSpace, lexicon) -> PrototypeSet:
    """Sum vocabulary vectors by the term-table polarity class of each word.

    Every vocabulary word is looked up, so a ``stem*`` entry contributes
    through all the words it matches; exact entries shadow patterns.
    """
    sums = {c: np.zeros(space.dim, dtype=np.float64) for c in (1, -1, 0)}
    for i, word in enumerate(space.words):
        score = lexicon.term_score(word)
        if score is None:
            continue
        cls = 1 if score >= 2 else -1 if score <= -2 else 0
        sums[cls] += space.vectors[i]
    return PrototypeSet(sums[1], sums[-1], sums[0], sums[1] + sums[-1])
