"""Lexicon, keyword and semantic feature extraction under a frozen schema.

Column layout: lexicon (19) | unigrams | bigrams | micro (6) | semantic (4).
"""
import hashlib
import json
import re
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

from .corpus import USER_TOKEN, CleanDocument
from .dsm import cosine, doc_vector

LEXICON_NAMES = (
    "Pos_words", "Neg_words", "Subj_words",
    "Last_pos", "Last_neg", "Last_emo",
    "Sum_pos", "Sum_neg", "Sum_subj",
    "Max_pos", "Max_neg",
    "Pos_emo", "Neg_emo",
    "Pos_Emph", "Neg_Emph",
    "End_Pos_Emph", "End_Neg_Emph",
    "End_Pos", "End_Neg",
)
MICRO_NAMES = (
    "Uppercase_words", "Laughter", "Elongated_words",
    "M_repetitions", "User_mentions", "EndWith_EXMark",
)
SEMANTIC_NAMES = ("Sim_pos", "Sim_neg", "Sim_neu", "Sim_subj")

BLOCKS = ("lexicon", "unigram", "bigram", "micro", "semantic")
FEATURE_SETS = {
    "ngrams": frozenset({"unigram", "bigram"}),
    "keyword": frozenset({"unigram", "bigram", "micro"}),
    "keyword+semantic": frozenset({"unigram", "bigram", "micro", "semantic"}),
    "full": frozenset(BLOCKS),
}

BOOLEAN_FEATURES = frozenset({
    "Pos_Emph", "Neg_Emph", "End_Pos_Emph", "End_Neg_Emph", "End_Pos", "End_Neg",
    "EndWith_EXMark",
})

_LAUGH = re.compile(r"^(?:ha|he){2,}h?$")
_ELONGATED = re.compile(r"([^\W\d_])\1\1")
_MARK_RUN = re.compile(r"[?!]{2,}")
_PUNCT_ONLY = re.compile(r"^[^\w]+$")


class FeatureError(ValueError):
    pass


class EmptyTrainingSet(FeatureError):
    pass


class SchemaMismatch(FeatureError):
    pass


# --- schema -----------------------------------------------------------------

@dataclass(frozen=True)
class FeatureSchema:
    unigram_index: dict
    bigram_index: dict
    lexicon_names: tuple = LEXICON_NAMES
    micro_names: tuple = MICRO_NAMES
    semantic_names: tuple = SEMANTIC_NAMES
    schema_id: str = field(default="", compare=False)

    def __post_init__(self):
        if not self.schema_id:
            object.__setattr__(self, "schema_id", self._digest())

    def _digest(self):
        h = hashlib.sha256()
        h.update("\x1f".join(self.unigram_index).encode())
        h.update(b"\x1e")
        h.update("\x1f".join(a + "\x1d" + b for a, b in self.bigram_index).encode())
        return h.hexdigest()[:16]

    @property
    def offsets(self):
        """Start column of each block, plus the total dimension under 'end'."""
        out, pos = {}, 0
        for name, size in (
            ("lexicon", len(self.lexicon_names)),
            ("unigram", len(self.unigram_index)),
            ("bigram", len(self.bigram_index)),
            ("micro", len(self.micro_names)),
            ("semantic", len(self.semantic_names)),
        ):
            out[name] = pos
            pos += size
        out["end"] = pos
        return out

    @property
    def total_dim(self):
        return self.offsets["end"]

    def block_slice(self, block):
        off = self.offsets
        order = list(BLOCKS) + ["end"]
        return slice(off[block], off[order[order.index(block) + 1]])

    def column_names(self):
        names = list(self.lexicon_names)
        names += [f"'{u}'" for u in self.unigram_index]
        names += [f"'{a} {b}'" for a, b in self.bigram_index]
        names += list(self.micro_names) + list(self.semantic_names)
        return names

    def mask(self, feature_set):
        """Boolean column mask keeping the blocks of a named feature set."""
        blocks = FEATURE_SETS[feature_set] if isinstance(feature_set, str) else frozenset(feature_set)
        unknown = blocks - set(BLOCKS)
        if unknown:
            raise FeatureError(f"unknown feature block(s): {sorted(unknown)}")
        if not blocks:
            raise FeatureError("feature set selects no blocks")
        keep = np.zeros(self.total_dim, dtype=bool)
        for block in blocks:
            keep[self.block_slice(block)] = True
        return keep

    def to_json(self):
        off = self.offsets
        return {
            "schema_id": self.schema_id,
            "total_dim": self.total_dim,
            "blocks": {b: [off[b], self.block_slice(b).stop] for b in BLOCKS},
            "lexicon_names": list(self.lexicon_names),
            "micro_names": list(self.micro_names),
            "semantic_names": list(self.semantic_names),
            "unigrams": list(self.unigram_index),
            "bigrams": [list(bg) for bg in self.bigram_index],
        }

    @classmethod
    def from_json(cls, data):
        schema = cls(
            {u: i for i, u in enumerate(data["unigrams"])},
            {tuple(bg): i for i, bg in enumerate(data["bigrams"])},
            tuple(data["lexicon_names"]), tuple(data["micro_names"]),
            tuple(data["semantic_names"]),
        )
        if data.get("schema_id") and data["schema_id"] != schema.schema_id:
            raise SchemaMismatch("schema sidecar id does not match its n-gram tables")
        return schema

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json(), fh, ensure_ascii=False)

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))


def _bigrams(tokens):
    return zip((t.normalized for t in tokens), (t.normalized for t in tokens[1:]))


def build_schema(training_docs) -> FeatureSchema:
    """Index every unigram and adjacent bigram of the training docs, in first-seen order."""
    training_docs = list(training_docs)
    if not training_docs:
        raise EmptyTrainingSet("no training documents")
    unigrams, bigrams = {}, {}
    for doc in training_docs:
        for tok in doc.tokens:
            unigrams.setdefault(tok.normalized, len(unigrams))
        for bg in _bigrams(doc.tokens):
            bigrams.setdefault(bg, len(bigrams))
    return FeatureSchema(unigrams, bigrams)


# --- extractors -------------------------------------------------------------

def _ends_with_exclamation(tokens):
    return bool(tokens) and tokens[-1].surface.endswith("!")


def _anchor(tokens, lexicon):
    """Last token that is not bare punctuation (emoticons count as content)."""
    for tok in reversed(tokens):
        if not _PUNCT_ONLY.match(tok.surface) or lexicon.lookup(tok.surface) is not None:
            return tok
    return None


def lexicon_features(doc: CleanDocument, lexicon) -> dict:
    f = dict.fromkeys(LEXICON_NAMES, 0)
    for tok in doc.tokens:
        prior = lexicon.lookup(tok.surface)
        if prior is None:
            continue
        if prior.emoticon:
            f["Last_emo"] = prior.score
            if prior.positive:
                f["Pos_emo"] += 1
            else:
                f["Neg_emo"] += 1
        elif prior.positive:
            f["Pos_words"] += 1
            f["Sum_pos"] += prior.score
            f["Max_pos"] = max(f["Max_pos"], prior.score)
            f["Last_pos"] = prior.score
        elif prior.negative:
            f["Neg_words"] += 1
            f["Sum_neg"] += prior.score
            f["Max_neg"] = min(f["Max_neg"], prior.score)
            f["Last_neg"] = prior.score
    f["Subj_words"] = f["Pos_words"] + f["Neg_words"]
    f["Sum_subj"] = f["Sum_pos"] + f["Sum_neg"]

    emph = _ends_with_exclamation(doc.tokens)
    f["Pos_Emph"] = emph and f["Pos_words"] > 0
    f["Neg_Emph"] = emph and f["Neg_words"] > 0
    anchor = _anchor(doc.tokens, lexicon)
    prior = lexicon.lookup(anchor.surface) if anchor is not None else None
    if prior is not None:
        f["End_Pos"] = prior.positive
        f["End_Neg"] = prior.negative
        f["End_Pos_Emph"] = emph and prior.positive and not prior.emoticon
        f["End_Neg_Emph"] = emph and prior.negative and not prior.emoticon
    for name in ("Pos_Emph", "Neg_Emph", "End_Pos_Emph", "End_Neg_Emph", "End_Pos", "End_Neg"):
        f[name] = bool(f[name])
    return f


def micro_features(doc: CleanDocument, lexicon=None) -> dict:
    f = dict.fromkeys(MICRO_NAMES, 0)
    for tok in doc.tokens:
        s = tok.surface
        if len(s) >= 2 and s.isalpha() and s.isupper():
            f["Uppercase_words"] += 1
        if _LAUGH.match(tok.normalized) or (lexicon is not None and lexicon.is_laughter(s)):
            f["Laughter"] += 1
        if _ELONGATED.search(s):
            f["Elongated_words"] += 1
        f["M_repetitions"] += len(_MARK_RUN.findall(s))
        if s == USER_TOKEN:
            f["User_mentions"] += 1
    f["EndWith_EXMark"] = _ends_with_exclamation(doc.tokens)
    return f


def ngram_counts(doc: CleanDocument, schema: FeatureSchema) -> dict:
    """Column -> count for schema n-grams present in doc; unseen n-grams are dropped."""
    off = schema.offsets
    out = {}
    for tok in doc.tokens:
        i = schema.unigram_index.get(tok.normalized)
        if i is not None:
            col = off["unigram"] + i
            out[col] = out.get(col, 0) + 1
    for bg in _bigrams(doc.tokens):
        i = schema.bigram_index.get(bg)
        if i is not None:
            col = off["bigram"] + i
            out[col] = out.get(col, 0) + 1
    return out


def keyword_features(doc: CleanDocument, schema: FeatureSchema, lexicon=None) -> dict:
    """Sparse column -> value map over the unigram, bigram and micro blocks."""
    out = ngram_counts(doc, schema)
    base = schema.offsets["micro"]
    for j, (name, value) in enumerate(micro_features(doc, lexicon).items()):
        if value:
            out[base + j] = int(value)
    return out


def semantic_features(doc: CleanDocument, space, prototypes) -> dict:
    v = doc_vector(doc.tokens, space)
    return dict(zip(SEMANTIC_NAMES, (cosine(v, p) for p in prototypes.as_tuple())))


@dataclass(frozen=True)
class FeatureVector:
    entries: dict
    schema_id: str

    def dense(self, total_dim):
        out = np.zeros(total_dim)
        for col, value in self.entries.items():
            out[col] = value
        return out


def assemble(doc, lexicon, schema, space=None, prototypes=None, schema_id=None) -> FeatureVector:
    """Full sparse feature vector for one document.

    ``space``/``prototypes`` may be omitted, leaving the semantic block at
    zero (used when no embedding space is available).
    """
    if schema_id is not None and schema_id != schema.schema_id:
        raise SchemaMismatch(f"expected schema {schema_id}, got {schema.schema_id}")
    if (space is None) != (prototypes is None):
        raise FeatureError("space and prototypes must be given together")
    if space is not None and prototypes.pos.shape[0] != space.dim:
        raise SchemaMismatch("prototypes were built from a different space")
    off = schema.offsets
    entries = {}
    for j, value in enumerate(lexicon_features(doc, lexicon).values()):
        if value:
            entries[off["lexicon"] + j] = int(value)
    entries.update(keyword_features(doc, schema, lexicon))
    if space is not None:
        for j, value in enumerate(semantic_features(doc, space, prototypes).values()):
            if value:
                entries[off["semantic"] + j] = value
    return FeatureVector(dict(sorted(entries.items())), schema.schema_id)


def to_matrix(vectors, schema: FeatureSchema) -> sparse.csr_matrix:
    rows, cols, vals = [], [], []
    for r, fv in enumerate(vectors):
        if fv.schema_id != schema.schema_id:
            raise SchemaMismatch(f"vector schema {fv.schema_id} != {schema.schema_id}")
        for c, v in fv.entries.items():
            rows.append(r)
            cols.append(c)
            vals.append(v)
    return sparse.csr_matrix((vals, (rows, cols)), shape=(len(vectors), schema.total_dim),
                             dtype=np.float64)


# --- sparse text export -----------------------------------------------------

def _fmt(value):
    if float(value).is_integer():
        return str(int(value))
    return repr(float(value))


def write_sparse(path, vectors, labels=None):
    """``label idx:value ...`` per line, 0-based ascending indices.

    Labels are written as integers (-1 negative, 0 neutral, 1 positive);
    unlabeled rows use 0.
    """
    from .labels import LABEL_CODES, as_label

    with open(path, "w", encoding="utf-8") as fh:
        for i, fv in enumerate(vectors):
            code = LABEL_CODES[as_label(labels[i])] if labels is not None else 0
            items = " ".join(f"{c}:{_fmt(v)}" for c, v in sorted(fv.entries.items()))
            fh.write(f"{code} {items}".rstrip() + "\n")


def read_sparse(path, schema_id):
    """Inverse of ``write_sparse``; returns (vectors, labels)."""
    from .labels import CODE_LABELS

    vectors, labels = [], []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.split()
            if not parts:
                continue
            try:
                labels.append(CODE_LABELS[int(parts[0])])
                entries = {}
                for item in parts[1:]:
                    col, value = item.split(":")
                    entries[int(col)] = float(value)
            except (KeyError, ValueError):
                raise FeatureError(f"{path}:{lineno}: malformed sparse row") from None
            vectors.append(FeatureVector(entries, schema_id))
    return vectors, labels
