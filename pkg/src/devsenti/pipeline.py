"""End-to-end helpers: resources, preprocessing, extraction, fit/predict."""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import baseline
from .corpus import DEFAULT_EMOTICONS, preprocess
from .dsm import EmbeddingSpace, PrototypeSet, build_prototypes, load_embeddings
from .features import FeatureSchema, assemble, build_schema
from .learner import LabeledDataset, PolarityModel, train
from .lexicon import Lexicon, load_lexicon


@dataclass
class Resources:
    lexicon: Lexicon
    space: EmbeddingSpace | None = None
    prototypes: PrototypeSet | None = None

    @classmethod
    def load(cls, lexicon_dir=None, vectors=None):
        lexicon = load_lexicon(lexicon_dir)
        if vectors is None:
            return cls(lexicon)
        space = load_embeddings(vectors)
        return cls(lexicon, space, build_prototypes(space, lexicon))

    @property
    def emoticons(self):
        return DEFAULT_EMOTICONS | self.lexicon.emoticon_surfaces


def _chunks(seq, n):
    size = max(1, -(-len(seq) // n))
    return [seq[i:i + size] for i in range(0, len(seq), size)]


def _parallel(fn, items, workers, *args):
    if workers <= 1 or len(items) < 2:
        return fn(items, *args)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = pool.map(fn, _chunks(list(items), workers), *([a] * workers for a in args))
        return [x for part in parts for x in part]


def _preprocess_chunk(posts, emoticons):
    return [preprocess(p, emoticons) for p in posts]


def preprocess_posts(posts, emoticons=None, workers=1):
    return _parallel(_preprocess_chunk, list(posts), workers, emoticons)


def _extract_chunk(docs, res, schema):
    return [assemble(d, res.lexicon, schema, res.space, res.prototypes) for d in docs]


def extract(docs, schema: FeatureSchema, res: Resources, workers=1):
    return _parallel(_extract_chunk, list(docs), workers, res, schema)


def dataset(docs, labels, schema, res, workers=1):
    return LabeledDataset.from_vectors(extract(docs, schema, res, workers), labels, schema)


def fit(docs, labels, res: Resources, C=0.05, seed=0, feature_set="full", workers=1, **kw):
    """Build the schema on ``docs`` and train a model on the selected blocks."""
    schema = build_schema(docs)
    data = dataset(docs, labels, schema, res, workers)
    if feature_set != "full":
        data = data.masked(schema.mask(feature_set))
    model = train(data, C=C, seed=seed, feature_set=feature_set, **kw)
    return schema, model


def predict_docs(docs, schema, model: PolarityModel, res: Resources, workers=1):
    from .features import to_matrix

    X = to_matrix(extract(docs, schema, res, workers), schema)
    return model.predict_matrix(X)


def baseline_scores(docs, lexicon):
    return [baseline.score_document(d, lexicon) for d in docs]


def save_bundle(path, schema: FeatureSchema, model: PolarityModel):
    """Model and its feature schema in one JSON file."""
    import json

    with open(path, "w", encoding="utf-8") as fh:
        json.dump({"model": model.to_json(), "schema": schema.to_json()}, fh, ensure_ascii=False)


def load_bundle(path):
    import json

    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    schema = FeatureSchema.from_json(data["schema"])
    return schema, PolarityModel.from_json(data["model"])
