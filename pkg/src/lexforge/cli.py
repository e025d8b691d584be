"""Command-line pipeline: mine, align, induce, train-filter, align-mlp, eval, tier, demo."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import nn
from .alignmlp import infer_alignment, train_alignment_classifier
from .corpus import Bitext, FormatError, SentencePair, count_frequencies, load_bitext, load_sentences, write_bitext
from .embed import FileEmbeddings, SyntheticEmbedder, load_contextual, write_word_vectors
from .evaluation import bli_f1, corpus_aer, p_at_1, read_gold_alignments, top1_from_scored, write_gold_alignments
from .induce import (Lexicon, induce_unsupervised, induce_weak, infer_lexicon, score_pairs,
                     train_filter, tune_thresholds)
from .mine import mine_bitext, mined_to_bitext, tier_bitext
from .pipeline import align_bitext, align_both, bitext_token_vectors, corpus_vectors
from .simalign import read_pharaoh, write_pharaoh
from .stats import accumulate_stats, write_stats
from .synthetic import cipher_fixture, tier_fixture

log = logging.getLogger("lexforge")


class CliError(Exception):
    pass


# -- shared helpers --

def _threads_default():
    try:
        return max(1, int(os.environ.get("LEXFORGE_THREADS", "1")))
    except ValueError:
        return 1


def _require(path, what):
    if path is None:
        raise CliError(f"missing {what}")
    if not Path(path).exists():
        raise CliError(f"{what} not found: {path}")
    return path


def _provider(args):
    if getattr(args, "embeddings", None):
        return FileEmbeddings.load(_require(args.embeddings, "embeddings file"))
    if getattr(args, "synthetic_seed", None) is not None:
        concept_map, lang_map = {}, {}
        if args.concept_map:
            with open(_require(args.concept_map, "concept map"), encoding="utf-8") as f:
                for lineno, line in enumerate(f, 1):
                    cols = line.rstrip("\n").split("\t")
                    if not line.strip():
                        continue
                    if len(cols) not in (2, 3):
                        raise FormatError("expected 'token<TAB>concept[<TAB>lang]'", lineno, args.concept_map)
                    concept_map[cols[0]] = cols[1]
                    if len(cols) == 3:
                        lang_map[cols[0]] = cols[2]
        return SyntheticEmbedder(args.synthetic_seed, args.dim, concept_map, lang_map)
    raise CliError("need --embeddings or --synthetic-seed")


def _train_config(args):
    return nn.TrainConfig(learning_rate=args.lr, epochs=args.epochs,
                          batch_size=args.batch_size or None, seed=args.seed)


def _write_json(path, doc):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(doc, f, indent=2, sort_keys=True)
        f.write("\n")


def _load_bitext(args):
    bt = load_bitext(_require(args.bitext, "bitext"))
    if len(bt) == 0:
        raise CliError("empty bitext")
    return bt


def _token_vectors(args, bitext, provider):
    src_ctx = load_contextual(args.src_ctx) if getattr(args, "src_ctx", None) else None
    tgt_ctx = load_contextual(args.tgt_ctx) if getattr(args, "tgt_ctx", None) else None
    return bitext_token_vectors(bitext, provider, src_ctx, tgt_ctx)


def _stats(args, bitext, provider, token_vecs=None):
    token_vecs = token_vecs or _token_vectors(args, bitext, provider)
    alignments = align_bitext(token_vecs, args.align_method, threads=args.threads)
    fs = ft = None
    if getattr(args, "freq_src", None):
        fs = count_frequencies(load_sentences(_require(args.freq_src, "source frequency corpus")))
    if getattr(args, "freq_tgt", None):
        ft = count_frequencies(load_sentences(_require(args.freq_tgt, "target frequency corpus")))
    return accumulate_stats(bitext, alignments, args.coc_mode, args.threads, fs, ft)


# -- subcommands --

def cmd_mine(args):
    src = load_sentences(_require(args.src, "source corpus"))
    tgt = load_sentences(_require(args.tgt, "target corpus"))
    if not src or not tgt:
        raise CliError("empty corpus")
    provider = _provider(args)
    S, T = corpus_vectors(provider, src), corpus_vectors(provider, tgt)
    pairs = mine_bitext(S, T, args.k, args.keep_fraction, args.min_score,
                        args.bidirectional, args.threads)
    write_bitext(mined_to_bitext(pairs, src, tgt), args.out)
    scores = np.array([p.score for p in pairs])
    qs = {f"q{int(q * 100)}": float(np.quantile(scores, q)) for q in (0.0, 0.25, 0.5, 0.75, 1.0)} if len(pairs) else {}
    print(f"retained {len(pairs)} pairs")
    if qs:
        print("score quantiles: " + " ".join(f"{k}={v:.4f}" for k, v in qs.items()))
    if args.report:
        _write_json(args.report, {"retained": len(pairs), "quantiles": qs,
                                  "src_sentences": len(src), "tgt_sentences": len(tgt)})
    return 0


def cmd_align(args):
    bitext = _load_bitext(args)
    token_vecs = _token_vectors(args, bitext, _provider(args))
    alignments = align_bitext(token_vecs, args.method, args.iterations, args.threads)
    write_pharaoh(args.out, alignments)
    print(f"aligned {len(alignments)} sentence pairs ({sum(map(len, alignments))} links)")
    return 0


def cmd_induce(args):
    t0 = time.perf_counter()
    bitext = _load_bitext(args)
    provider = _provider(args)
    stats = _stats(args, bitext, provider)
    if args.stats_out:
        write_stats(args.stats_out, stats)
    report = {"mode": args.mode, "sentence_pairs": len(bitext), "type_pairs": len(stats)}
    if args.mode == "unsup":
        lex = induce_unsupervised(stats, args.lam)
        report["lambda"] = args.lam
    else:
        if not args.seed_lexicon:
            raise CliError("weak mode needs --seed-lexicon")
        seed = Lexicon.load(_require(args.seed_lexicon, "seed lexicon"))
        if len(seed) == 0:
            raise CliError("seed lexicon is empty")
        if args.model:
            model, extra = nn.load_params(_require(args.model, "model checkpoint"))
            probs = score_pairs(model, stats, provider)
            if "delta" in extra:
                delta, n = extra["delta"], extra["n"]
            else:
                th, _, _ = tune_thresholds(probs, seed)
                delta, n = th.delta, th.n
            lex = infer_lexicon(probs, delta, n)
            report.update(delta=delta, n=n)
        else:
            lex, _, _, info = induce_weak(stats, provider, seed, _train_config(args),
                                          args.dev_split, max_negatives=args.max_negatives)
            report.update(info)
    lex.save(args.out)
    report["entries"] = len(lex)
    report["seconds"] = round(time.perf_counter() - t0, 3)
    print(f"induced {len(lex)} lexicon entries ({args.mode})")
    if args.report:
        _write_json(args.report, report)
    return 0


def cmd_train_filter(args):
    bitext = _load_bitext(args)
    provider = _provider(args)
    stats = _stats(args, bitext, provider)
    seed = Lexicon.load(_require(args.seed_lexicon, "seed lexicon"))
    if len(seed) == 0:
        raise CliError("seed lexicon is empty")
    model, info = train_filter(stats, provider, seed, _train_config(args), args.max_negatives)
    th, f1, _ = tune_thresholds(score_pairs(model, stats, provider), seed)
    info.update(delta=th.delta, n=th.n, tune_f1=f1)
    nn.save_params(args.model_out, model, {"delta": th.delta, "n": th.n})
    print(f"trained filter on {info['positives']} positives / {info['negatives']} negatives; "
          f"delta={th.delta} n={th.n} seed-F1={f1:.3f}")
    if args.report:
        _write_json(args.report, info)
    return 0


def cmd_align_mlp(args):
    bitext = _load_bitext(args)
    provider = _provider(args)
    token_vecs = _token_vectors(args, bitext, provider)
    stats = _stats(args, bitext, provider, token_vecs)
    if args.model:
        model, _ = nn.load_params(_require(args.model, "model checkpoint"))
        if model.head != "ternary":
            raise CliError("align-mlp needs a ternary checkpoint")
    else:
        a_arg, a_iter = align_both(token_vecs, args.iterations, args.threads)
        model = train_alignment_classifier(bitext, a_arg, a_iter, stats, token_vecs,
                                           _train_config(args), args.zero_ratio)
        if args.model_out:
            nn.save_params(args.model_out, model)
    alignments = [infer_alignment(model, pair, sv, tv, stats)
                  for pair, (sv, tv) in zip(bitext, token_vecs)]
    write_pharaoh(args.out, alignments)
    print(f"aligned {len(alignments)} sentence pairs ({sum(map(len, alignments))} links)")
    return 0


def _eval_lexicon_metrics(args):
    pred = Lexicon.load(_require(args.pred, "prediction file"))
    gold = Lexicon.load(_require(args.gold, "gold file"))
    if len(gold) == 0:
        raise CliError("gold lexicon is empty")
    if args.metric == "bli-f1":
        p, r, f = bli_f1(pred.pairs(), gold.pairs(), args.recall_mode)
        return {"precision": p, "recall": r, "f1": f}
    top1 = top1_from_scored((s, t, sc if sc is not None else 0.0)
                            for (s, t), sc in pred.scores.items())
    return {"p@1": p_at_1(top1, gold.pairs())}


def cmd_eval(args):
    if args.metric == "aer":
        preds = read_pharaoh(_require(args.pred, "prediction file"))
        golds = read_gold_alignments(_require(args.gold, "gold file"), len(preds))
        result = {"aer": corpus_aer(preds, golds)}
    else:
        result = _eval_lexicon_metrics(args)
    width = max(len(k) for k in result)
    print(f"{'metric':<{width}}  value")
    for k, v in result.items():
        print(f"{k:<{width}}  {v:.3f}")
    print(json.dumps(result, sort_keys=True))
    if args.json_out:
        _write_json(args.json_out, result)
    return 0


def cmd_tier(args):
    bitext = _load_bitext(args)
    provider = _provider(args)
    gold = Lexicon.load(_require(args.gold, "gold lexicon"))
    ordered = Bitext(sorted(bitext.pairs, key=lambda p: -p.score))
    rows = []
    for k, tier in enumerate(tier_bitext(ordered, args.n_tiers), 1):
        row = {"tier": k, "pairs": len(tier), "precision": 0.0, "recall": 0.0, "f1": 0.0,
               "min_score": None, "max_score": None}
        if len(tier):
            stats = _stats(args, tier, provider)
            lex = induce_unsupervised(stats, args.lam)
            p, r, f = bli_f1(lex.pairs(), gold.pairs())
            row.update(precision=p, recall=r, f1=f,
                       min_score=min(x.score for x in tier), max_score=max(x.score for x in tier))
        rows.append(row)
    print("tier  pairs  precision  recall  f1")
    for r in rows:
        print(f"{r['tier']:>4}  {r['pairs']:>5}  {r['precision']:>9.3f}  {r['recall']:>6.3f}  {r['f1']:.3f}")
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as f:
            f.write("tier\tpairs\tprecision\trecall\tf1\n")
            for r in rows:
                f.write(f"{r['tier']}\t{r['pairs']}\t{r['precision']:.6f}\t{r['recall']:.6f}\t{r['f1']:.6f}\n")
    if args.report:
        _write_json(args.report, {"tiers": rows})
    return 0


def cmd_demo(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if args.kind == "tier":
        fx = tier_fixture(args.seed, n_pairs=args.planted, n_concepts=args.concepts)
    else:
        fx = cipher_fixture(args.seed, n_concepts=args.concepts, n_planted=args.planted,
                            n_distractors=args.distractors)
    provider = fx.embedder()
    for name, corpus in (("src.txt", fx.src_corpus), ("tgt.txt", fx.tgt_corpus)):
        with open(out / name, "w", encoding="utf-8", newline="\n") as f:
            f.writelines(" ".join(s) + "\n" for s in corpus)
    write_word_vectors(out / "embeddings.vec", fx.src_vocab + fx.tgt_vocab, provider)
    fx.gold.save(out / "gold.tsv")
    seed, held = fx.split_gold(args.seed_fraction)
    seed.save(out / "seed.tsv")
    held.save(out / "heldout.tsv")
    planted = sorted(fx.planted.items())
    write_bitext(Bitext([SentencePair(fx.src_corpus[i], fx.tgt_corpus[j]) for i, j in planted]),
                 out / "parallel.tsv")
    write_gold_alignments(out / "parallel.gold", [fx.gold_alignments[i] for i, _ in planted])
    print(f"wrote {args.kind} fixture to {out} ({len(fx.src_corpus)}+{len(fx.tgt_corpus)} sentences, "
          f"{len(planted)} planted pairs, {len(fx.gold)} gold entries)")
    return 0


# -- argument parsing --

def _add_embedding_args(p):
    g = p.add_argument_group("embeddings")
    g.add_argument("--embeddings", help="word vectors in text format")
    g.add_argument("--synthetic-seed", type=int, help="use the synthetic embedder with this seed")
    g.add_argument("--concept-map", help="TSV token, concept[, lang] for the synthetic embedder")
    g.add_argument("--dim", type=int, default=64)


def _add_ctx_args(p):
    p.add_argument("--src-ctx", help="JSON-lines contextual vectors for bitext source sides")
    p.add_argument("--tgt-ctx", help="JSON-lines contextual vectors for bitext target sides")


def _add_stats_args(p):
    p.add_argument("--align-method", choices=("argmax", "itermax"), default="itermax")
    p.add_argument("--coc-mode", choices=("min", "binary"), default="min")
    p.add_argument("--freq-src", help="count source frequencies from this corpus instead of the bitext")
    p.add_argument("--freq-tgt", help="count target frequencies from this corpus instead of the bitext")


def _add_train_args(p):
    p.add_argument("--lr", type=float, default=5e-4)
    p.add_argument("--epochs", type=int, default=50)
    p.add_argument("--batch-size", type=int, default=32, help="0 means full batch")
    p.add_argument("--max-negatives", type=int)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value file; flags override it")
    common.add_argument("--threads", type=int, default=_threads_default())
    common.add_argument("--seed", type=int, default=13)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="lexforge", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    subs = {}

    def add(name, fn, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=fn)
        subs[name] = p
        return p

    p = add("mine", cmd_mine, "mine bitext from two monolingual corpora")
    p.add_argument("--src")
    p.add_argument("--tgt")
    p.add_argument("--out", required=True)
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--keep-fraction", type=float, default=0.2)
    p.add_argument("--min-score", type=float, default=1.0)
    p.add_argument("--bidirectional", action="store_true")
    p.add_argument("--report")
    _add_embedding_args(p)

    p = add("align", cmd_align, "word-align a bitext (Pharaoh output)")
    p.add_argument("--bitext")
    p.add_argument("--out", required=True)
    p.add_argument("--method", choices=("argmax", "itermax"), default="itermax")
    p.add_argument("--iterations", type=int, default=2)
    _add_embedding_args(p)
    _add_ctx_args(p)

    p = add("induce", cmd_induce, "induce a lexicon from a bitext")
    p.add_argument("--bitext")
    p.add_argument("--out", required=True)
    p.add_argument("--mode", choices=("unsup", "weak"), default="unsup")
    p.add_argument("--seed-lexicon")
    p.add_argument("--model", help="trained filter checkpoint (weak mode)")
    p.add_argument("--lambda", dest="lam", type=float, default=20.0)
    p.add_argument("--dev-split", type=float)
    p.add_argument("--stats-out")
    p.add_argument("--report")
    _add_embedding_args(p)
    _add_ctx_args(p)
    _add_stats_args(p)
    _add_train_args(p)

    p = add("train-filter", cmd_train_filter, "train the weakly supervised lexicon filter")
    p.add_argument("--bitext")
    p.add_argument("--seed-lexicon")
    p.add_argument("--model-out", required=True)
    p.add_argument("--report")
    _add_embedding_args(p)
    _add_ctx_args(p)
    _add_stats_args(p)
    _add_train_args(p)

    p = add("align-mlp", cmd_align_mlp, "train/apply the ternary alignment classifier")
    p.add_argument("--bitext")
    p.add_argument("--out", required=True)
    p.add_argument("--model", help="existing ternary checkpoint")
    p.add_argument("--model-out")
    p.add_argument("--iterations", type=int, default=2)
    p.add_argument("--zero-ratio", type=float, help="subsample label-0 pairs to this ratio")
    _add_embedding_args(p)
    _add_ctx_args(p)
    _add_stats_args(p)
    _add_train_args(p)

    p = add("eval", cmd_eval, "score predictions against gold files")
    p.add_argument("--metric", choices=("bli-f1", "p1", "aer"), default="bli-f1")
    p.add_argument("--pred")
    p.add_argument("--gold")
    p.add_argument("--recall-mode", choices=("source", "pair"), default="source")
    p.add_argument("--json-out")

    p = add("tier", cmd_tier, "per-quality-tier induction F1 of a scored bitext")
    p.add_argument("--bitext")
    p.add_argument("--gold")
    p.add_argument("--n-tiers", type=int, default=5)
    p.add_argument("--lambda", dest="lam", type=float, default=20.0)
    p.add_argument("--out")
    p.add_argument("--report")
    _add_embedding_args(p)
    _add_stats_args(p)

    p = add("demo", cmd_demo, "write a synthetic fixture with a planted lexicon")
    p.add_argument("--out", required=True)
    p.add_argument("--kind", choices=("cipher", "tier"), default="cipher")
    p.add_argument("--concepts", type=int, default=200)
    p.add_argument("--planted", type=int, default=100)
    p.add_argument("--distractors", type=int, default=400)
    p.add_argument("--seed-fraction", type=float, default=0.3)
    return parser, subs


def read_config(path) -> dict:
    cfg = {}
    with open(_require(path, "config file"), encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise FormatError("expected key=value", lineno, path)
            key, value = (x.strip() for x in line.split("=", 1))
            cfg[key.replace("-", "_")] = value
    return cfg


def _apply_config(sub, cfg):
    known = {a.dest: a for a in sub._actions}
    defaults = {}
    for key, value in cfg.items():
        if key == "lambda":
            key = "lam"
        action = known.get(key)
        if action is None:
            raise CliError(f"unknown config key {key!r}")
        if isinstance(action, (argparse._StoreTrueAction, argparse._StoreFalseAction)):
            defaults[key] = value.lower() in ("1", "true", "yes", "on")
        elif action.type is not None:
            defaults[key] = action.type(value)
        else:
            defaults[key] = value
    # config values also satisfy required flags
    for key in defaults:
        known[key].required = False
    sub.set_defaults(**defaults)


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, subs = build_parser()
    command = next((a for a in argv if not a.startswith("-")), None)
    config = None
    for k, a in enumerate(argv):
        if a == "--config" and k + 1 < len(argv):
            config = argv[k + 1]
        elif a.startswith("--config="):
            config = a.split("=", 1)[1]
    try:
        if config and command in subs:
            _apply_config(subs[command], read_config(config))
    except (CliError, FormatError, OSError, ValueError) as e:
        print(f"lexforge: error: {e}", file=sys.stderr)
        return 2
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.threads < 1:
        args.threads = 1
    try:
        return args.func(args)
    except (CliError, FormatError, OSError, ValueError, ZeroDivisionError) as e:
        print(f"lexforge: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
