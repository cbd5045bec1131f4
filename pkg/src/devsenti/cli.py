"""``devsenti`` command line: one subcommand per pipeline stage.

Data goes to files named on the command line; progress and diagnostics go
to stderr (and optionally a timestamped log file).
"""
import argparse
import csv
import json
import logging
import os
import sys
import warnings
from pathlib import Path

from . import __version__, baseline, pipeline
from .config import ConfigError, RunConfig
from .corpus import read_labeled_posts, read_posts, write_clean_csv, write_token_lines
from .dsm import CBOW, SKIPGRAM, TrainParams, save_embeddings, train_embeddings
from .evalkit import agreement, report
from .evalkit.ablation import DEFAULT_SETTINGS, ablation_run
from .evalkit.metrics import confusion, prf
from .evalkit.sampling import sample_for_annotation, stratified_split
from .features import FEATURE_SETS, build_schema, write_sparse
from .labels import Trinary, as_label
from .learner import LabeledDataset, tune_C
from .lexicon import LEXICON_ENV

log = logging.getLogger("devsenti")


def _setup_logging(verbose, log_file):
    log.handlers.clear()
    log.setLevel(logging.DEBUG)
    err = logging.StreamHandler(sys.stderr)
    err.setLevel(logging.DEBUG if verbose else logging.INFO)
    err.setFormatter(logging.Formatter("%(levelname)s: %(message)s"))
    log.addHandler(err)
    if log_file:
        fh = logging.FileHandler(log_file, encoding="utf-8")
        fh.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(message)s"))
        log.addHandler(fh)


def _float_list(text):
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _config(args) -> RunConfig:
    base = RunConfig.from_file(args.config) if args.config else RunConfig()
    cfg = base.override(
        lexicon_dir=args.lexicon_dir, vectors=args.vectors, model=args.model, seed=args.seed,
        c_grid=args.c_grid, C=args.C, folds=args.folds, train_fraction=args.train_fraction,
        feature_set=args.feature_set, workers=args.workers, output_dir=args.output_dir,
    )
    if cfg.lexicon_dir is None and os.environ.get(LEXICON_ENV):
        cfg = cfg.override(lexicon_dir=os.environ[LEXICON_ENV])
    return cfg.check()


def _resources(cfg, vectors=True):
    cfg.require("lexicon_dir")
    if vectors and cfg.vectors is not None:
        cfg.require("vectors")
    res = pipeline.Resources.load(cfg.lexicon_dir, cfg.vectors if vectors else None)
    if vectors and res.space is None and cfg.feature_set in ("keyword+semantic", "full"):
        log.warning("no --vectors given: semantic features stay at zero")
    return res


def _write_rows(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _read_id_labels(path, column="label"):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or "id" not in reader.fieldnames or column not in reader.fieldnames:
            raise ValueError(f"{path}: expected columns id,{column}")
        return {row["id"]: row[column] for row in reader}


def _labeled_docs(path, res, cfg):
    posts, labels = read_labeled_posts(path)
    docs = pipeline.preprocess_posts(posts, res.emoticons, cfg.workers)
    return docs, labels


# --- commands ----------------------------------------------------------------

def cmd_preprocess(args, cfg):
    emoticons = None
    if cfg.lexicon_dir is not None:
        emoticons = _resources(cfg, vectors=False).emoticons
    posts = read_posts(args.input)
    docs = pipeline.preprocess_posts(posts, emoticons, cfg.workers)
    write_clean_csv(cfg.output(args.out), docs)
    if args.tokens:
        write_token_lines(cfg.output(args.tokens), docs)
    log.info("preprocessed %d posts", len(docs))


def cmd_train_dsm(args, cfg):
    params = TrainParams(args.arch, args.dim, args.min_count, args.window, args.negative,
                         args.sample, args.epochs, args.alpha, cfg.seed)
    params.validate()
    if not Path(args.corpus).is_file():
        raise ConfigError(f"corpus not found: {args.corpus}")
    space = train_embeddings(args.corpus, params)
    save_embeddings(space, cfg.output(args.out))
    log.info("trained %d vectors of dimension %d", len(space), space.dim)


def cmd_baseline(args, cfg):
    res = _resources(cfg, vectors=False)
    docs = pipeline.preprocess_posts(read_posts(args.input), res.emoticons, cfg.workers)
    rows = []
    for doc in docs:
        s = baseline.score_document(doc, res.lexicon)
        rows.append((doc.id, s.p, s.n, baseline.trinary(s).value))
        if args.explain:
            print(f"{doc.id}\t{baseline.explain(doc, res.lexicon)}")
    _write_rows(cfg.output(args.out), ("id", "p", "n", "label"), rows)
    log.info("scored %d posts", len(rows))


def cmd_extract(args, cfg):
    res = _resources(cfg)
    if args.labeled:
        docs, labels = _labeled_docs(args.input, res, cfg)
    else:
        docs, labels = pipeline.preprocess_posts(read_posts(args.input), res.emoticons,
                                                 cfg.workers), None
    if args.schema and Path(args.schema).is_file():
        from .features import FeatureSchema

        schema = FeatureSchema.load(args.schema)
    else:
        schema = build_schema(docs)
    vectors = pipeline.extract(docs, schema, res, cfg.workers)
    out = cfg.output(args.out)
    write_sparse(out, vectors, labels)
    sidecar = Path(args.schema) if args.schema else out.with_name(out.name + ".schema.json")
    if not sidecar.is_file():
        schema.save(sidecar)
    log.info("extracted %d vectors of dimension %d (schema %s)", len(vectors),
             schema.total_dim, schema.schema_id)


def _split(labels, cfg, enabled):
    idx = list(range(len(labels)))
    if not enabled:
        return idx, []
    train_idx, test_idx = stratified_split(labels, cfg.train_fraction, cfg.seed)
    return train_idx.tolist(), test_idx.tolist()


def _evaluate(gold, pred):
    rep = prf(confusion(gold, pred))
    return rep, report.prf_table([("model", rep)])


def cmd_train(args, cfg):
    res = _resources(cfg)
    if cfg.model is None:
        raise ConfigError("--model (output path) is required")
    docs, labels = _labeled_docs(args.input, res, cfg)
    train_idx, test_idx = _split(labels, cfg, args.holdout)
    schema, model = pipeline.fit([docs[i] for i in train_idx], [labels[i] for i in train_idx],
                                 res, C=cfg.C, seed=cfg.seed, feature_set=cfg.feature_set,
                                 workers=cfg.workers)
    pipeline.save_bundle(cfg.output(cfg.model), schema, model)
    log.info("trained on %d posts, %d features, C=%g", len(train_idx), schema.total_dim, cfg.C)
    if test_idx:
        pred = pipeline.predict_docs([docs[i] for i in test_idx], schema, model, res, cfg.workers)
        rep, table = _evaluate([labels[i] for i in test_idx], pred)
        sys.stdout.write(table)
        if args.report:
            report.dump_json(rep.to_json(), cfg.output(args.report))


def _dataset(docs, labels, res, cfg):
    schema = build_schema(docs)
    data = pipeline.dataset(docs, labels, schema, res, cfg.workers)
    if cfg.feature_set != "full":
        data = data.masked(schema.mask(cfg.feature_set))
    return schema, data


def cmd_tune(args, cfg):
    res = _resources(cfg)
    docs, labels = _labeled_docs(args.input, res, cfg)
    _, data = _dataset(docs, labels, res, cfg)
    best, scores = tune_C(data, cfg.c_grid, cfg.folds, cfg.seed)
    result = {"best_C": best, "folds": cfg.folds, "seed": cfg.seed,
              "mean_accuracy": {repr(c): a for c, a in scores.items()}}
    if args.out:
        report.dump_json(result, cfg.output(args.out))
    else:
        json.dump(result, sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
    log.info("best C = %g", best)


def cmd_classify(args, cfg):
    if cfg.model is None:
        res = _resources(cfg, vectors=False)
    else:
        cfg.require("model")
        res = _resources(cfg)
    posts = read_posts(args.input)
    docs = pipeline.preprocess_posts(posts, res.emoticons, cfg.workers)
    if cfg.model is None:
        labels = [baseline.trinary(s).value for s in pipeline.baseline_scores(docs, res.lexicon)]
    else:
        schema, model = pipeline.load_bundle(cfg.model)
        labels = [l.value for l in pipeline.predict_docs(docs, schema, model, res, cfg.workers)]
    _write_rows(cfg.output(args.out), ("id", "label"), zip((d.id for d in docs), labels))
    log.info("classified %d posts", len(docs))


def cmd_evaluate(args, cfg):
    gold = _read_id_labels(args.gold)
    pred = _read_id_labels(args.pred)
    missing = sorted(set(gold) - set(pred))
    if missing:
        raise ValueError(f"{len(missing)} gold item(s) lack a prediction, e.g. {missing[0]}")
    ids = list(gold)
    # undetermined baseline outputs are removed before scoring
    undetermined = [i for i in ids if pred[i].strip().lower() == Trinary.UNDETERMINED.value]
    if undetermined:
        log.warning("removed %d undetermined prediction(s)", len(undetermined))
    ids = [i for i in ids if i not in set(undetermined)]
    g = [as_label(gold[i]) for i in ids]
    p = [as_label(pred[i]) for i in ids]
    cm = confusion(g, p)
    rep = prf(cm)
    sys.stdout.write(report.prf_table([("model", rep)]))
    sys.stdout.write("\n" + report.confusion_table(cm))
    if args.out:
        out = rep.to_json()
        out["removed_undetermined"] = len(undetermined)
        out["confusion"] = cm.counts.tolist()
        report.dump_json(out, cfg.output(args.out))


def cmd_ablate(args, cfg):
    res = _resources(cfg)
    docs, labels = _labeled_docs(args.input, res, cfg)
    train_idx, test_idx = _split(labels, cfg, True)
    schema = build_schema([docs[i] for i in train_idx])
    vectors = pipeline.extract(docs, schema, res, cfg.workers)
    data = LabeledDataset.from_vectors(vectors, labels, schema)
    settings = args.settings.split(",") if args.settings else DEFAULT_SETTINGS
    for name in settings:
        if name not in FEATURE_SETS:
            raise ConfigError(f"unknown feature set {name!r}")
    results = ablation_run(data.subset(train_idx), data.subset(test_idx), schema, settings,
                           C=cfg.C, seed=cfg.seed, contingency=args.contingency)
    sys.stdout.write(report.ablation_table(results))
    if args.out:
        report.dump_json(report.ablation_json(results), cfg.output(args.out))


def cmd_kappa(args, cfg):
    records = agreement.read_annotations(args.annotations)
    pairs = agreement.pairwise_agreement(records)
    out = [{"coders": list(k), **v} for k, v in pairs.items()]
    for entry in out:
        print(f"{entry['coders'][0]}\t{entry['coders'][1]}\tkappa={entry['kappa']:.3f}\t"
              f"observed={entry['observed']:.3f}\tn={entry['items']}")
    if args.out:
        report.dump_json(out, cfg.output(args.out))


def cmd_vote(args, cfg):
    records = agreement.read_annotations(args.annotations)
    rows = []
    for item, recs in agreement.group_by_item(records).items():
        gold = agreement.majority_vote(recs)
        rows.append((item, str(gold.label.value if not gold.excluded else gold.label)))
    _write_rows(cfg.output(args.out), ("id", "label"), rows)
    kept = sum(r[1] != agreement.EXCLUDED for r in rows)
    log.info("%d items voted, %d excluded", len(rows), len(rows) - kept)


def cmd_sample(args, cfg):
    res = _resources(cfg, vectors=False)
    posts = read_posts(args.input)
    docs = pipeline.preprocess_posts(posts, res.emoticons, cfg.workers)
    labels = [baseline.trinary(s) for s in pipeline.baseline_scores(docs, res.lexicon)]
    sample = sample_for_annotation(posts, labels, args.n_per_cell, cfg.seed)
    _write_rows(cfg.output(args.out), ("id", "post_type", "text", "baseline_label"),
                ((p.id, p.post_type.code, p.body, l.value) for p, l in sample))
    log.info("sampled %d posts", len(sample))


# --- parser ------------------------------------------------------------------

def _common():
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("shared options")
    g.add_argument("--config", help="JSON file with RunConfig keys; flags override it")
    g.add_argument("--lexicon-dir", help=f"lexicon directory (default ${LEXICON_ENV})")
    g.add_argument("--vectors", help="word2vec text-format embedding file")
    g.add_argument("--model", help="model bundle (JSON)")
    g.add_argument("--seed", type=int)
    g.add_argument("--C", "-C", type=float, dest="C", help="SVM cost parameter")
    g.add_argument("--c-grid", type=_float_list, help="comma-separated C values for tuning")
    g.add_argument("--folds", type=int)
    g.add_argument("--train-fraction", type=float)
    g.add_argument("--feature-set", choices=sorted(FEATURE_SETS))
    g.add_argument("--workers", type=int)
    g.add_argument("--output-dir", help="directory for relative output paths")
    g.add_argument("--log-file", help="also log (with timestamps) to this file")
    g.add_argument("-v", "--verbose", action="store_true")
    return p


def build_parser():
    common = _common()
    parser = argparse.ArgumentParser(prog="devsenti",
                                     description="Sentiment polarity toolkit for developer posts.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, func, help):
        p = sub.add_parser(name, parents=[common], help=help, description=help)
        p.set_defaults(func=func)
        return p

    p = add("preprocess", cmd_preprocess, "strip markup and tokenize posts")
    p.add_argument("input", help="CSV with id,post_type,text")
    p.add_argument("--out", required=True, help="cleaned CSV")
    p.add_argument("--tokens", help="token-line corpus for embedding training")

    p = add("train-dsm", cmd_train_dsm, "train word embeddings on a token-line corpus")
    p.add_argument("corpus")
    p.add_argument("--out", required=True)
    d = TrainParams()
    p.add_argument("--arch", choices=(CBOW, SKIPGRAM), default=d.architecture)
    p.add_argument("--dim", type=int, default=d.dim)
    p.add_argument("--min-count", type=int, default=d.min_count)
    p.add_argument("--window", type=int, default=d.window)
    p.add_argument("--negative", type=int, default=d.negative_samples)
    p.add_argument("--sample", type=float, default=d.subsample_threshold)
    p.add_argument("--epochs", type=int, default=d.epochs)
    p.add_argument("--alpha", type=float, default=d.alpha)

    p = add("baseline", cmd_baseline, "lexicon-based (p, n) scores and trinary labels")
    p.add_argument("input")
    p.add_argument("--out", required=True, help="CSV with id,p,n,label")
    p.add_argument("--explain", action="store_true", help="print a scoring trace per post")

    p = add("extract", cmd_extract, "write sparse feature vectors")
    p.add_argument("input")
    p.add_argument("--out", required=True)
    p.add_argument("--schema", help="existing schema to reuse, or where to save the new one")
    p.add_argument("--labeled", action="store_true", help="input has a label column")

    p = add("train", cmd_train, "train the polarity classifier")
    p.add_argument("input", help="CSV with id,post_type,text,label")
    p.add_argument("--holdout", action="store_true",
                   help="train on a stratified --train-fraction split and score the rest")
    p.add_argument("--report", help="JSON report for the held-out split")

    p = add("tune", cmd_tune, "choose C by stratified cross-validation")
    p.add_argument("input")
    p.add_argument("--out", help="JSON result (default: stdout)")

    p = add("classify", cmd_classify, "label posts (baseline labels when no --model)")
    p.add_argument("input")
    p.add_argument("--out", required=True, help="CSV with id,label")

    p = add("evaluate", cmd_evaluate, "score predictions against gold labels")
    p.add_argument("--gold", required=True, help="CSV with id,label")
    p.add_argument("--pred", required=True, help="CSV with id,label")
    p.add_argument("--out", help="JSON report")

    p = add("ablate", cmd_ablate, "compare incremental feature settings on one split")
    p.add_argument("input")
    p.add_argument("--settings", help="comma-separated feature sets, in order")
    p.add_argument("--contingency", choices=("correctness", "labels"), default="correctness")
    p.add_argument("--out", help="JSON report")

    p = add("kappa", cmd_kappa, "pairwise weighted kappa between coders")
    p.add_argument("annotations", help="CSV with item_id,coder_id,emotions,polarity")
    p.add_argument("--out", help="JSON report")

    p = add("vote", cmd_vote, "majority-vote gold labels from three annotations per item")
    p.add_argument("annotations")
    p.add_argument("--out", required=True, help="CSV with id,label")

    p = add("sample", cmd_sample, "stratified sample for annotation")
    p.add_argument("input")
    p.add_argument("--n-per-cell", type=int, required=True)
    p.add_argument("--out", required=True)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    _setup_logging(args.verbose, args.log_file)
    logging.captureWarnings(True)
    try:
        cfg = _config(args)
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            args.func(args, cfg)
    except (ValueError, OSError, KeyError) as exc:
        log.error("%s", exc)
        return 1
    finally:
        logging.captureWarnings(False)
    return 0


if __name__ == "__main__":
    sys.exit(main())
