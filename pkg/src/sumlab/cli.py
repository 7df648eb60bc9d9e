"""Command-line entry point.

Subcommands: clean, dedup, sample, charset, noise, build-dataset, stats,
rouge, abstractivity, repetition, baseline, and bws {init, serve, score,
export}. Every file-producing run writes a deterministic manifest (command,
config hash, seed, input digests) beside its outputs. Streams accept "-" for
stdin/stdout. Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import functools
import json
import multiprocessing
import os
import sys
from contextlib import contextmanager
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import baselines, corpus, dataset, metrics, noising
from .manifest import write_run_manifest


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # Usage errors must exit 1 (argparse defaults to 2, which we reserve for
    # data errors).
    def error(self, message):
        raise UsageError(message)


@contextmanager
def _open_in(path: str):
    if path == "-":
        yield sys.stdin
    else:
        with open(path, "r", encoding="utf-8") as fp:
            yield fp


@contextmanager
def _open_out(path: str):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fp:
            yield fp


def _emit_json(path: str, obj) -> None:
    with _open_out(path) as fp:
        fp.write(json.dumps(obj, ensure_ascii=False, indent=2) + "\n")


def _pmap(fn, items, jobs: int):
    if jobs <= 1:
        yield from map(fn, items)
        return
    with multiprocessing.Pool(jobs) as pool:
        yield from pool.imap(fn, items, chunksize=256)


def _clean_record(line: str, default_source: str) -> dict | None:
    line = line.strip()
    if not line:
        return None
    obj = json.loads(line)
    source = obj.get("source", default_source)
    doc = corpus.clean_document(obj["text"], source)
    if doc is None:
        return {"rejected": True}
    return {"id": doc.id, "source": doc.source, "text": doc.text}


def cmd_clean(args) -> int:
    worker = functools.partial(_clean_record, default_source=args.source)
    kept = rejected = 0
    with _open_in(args.infile) as fin, _open_out(args.out) as fout:
        for record in _pmap(worker, fin, args.jobs):
            if record is None:
                continue
            if record.get("rejected"):
                rejected += 1
                continue
            fout.write(json.dumps(record, ensure_ascii=False) + "\n")
            kept += 1
    print(f"kept {kept}, rejected {rejected}", file=sys.stderr)
    write_run_manifest(
        args.argv,
        {"source": args.source, "jobs": args.jobs},
        None,
        [args.infile],
        [args.out],
    )
    return 0


def cmd_dedup(args) -> int:
    with _open_in(args.infile) as fin, _open_out(args.out) as fout:
        n = corpus.write_documents(fout, corpus.deduplicate(corpus.read_documents(fin)))
    print(f"wrote {n} documents", file=sys.stderr)
    write_run_manifest(args.argv, {}, None, [args.infile], [args.out])
    return 0


def cmd_sample(args) -> int:
    with _open_in(args.infile) as fin:
        result = corpus.sample_for_vocab(
            corpus.read_documents(fin), args.target_bytes, args.seed
        )
    with _open_out(args.out) as fout:
        corpus.write_documents(fout, result.documents)
    if result.undersized:
        print(
            f"warning: corpus ({result.total_bytes} bytes) smaller than target "
            f"({args.target_bytes}); emitted everything",
            file=sys.stderr,
        )
    write_run_manifest(
        args.argv,
        {"target_bytes": args.target_bytes, "undersized": result.undersized},
        args.seed,
        [args.infile],
        [args.out],
    )
    return 0


def cmd_charset(args) -> int:
    with _open_in(args.infile) as fin:
        chars = corpus.character_coverage(corpus.read_documents(fin), args.coverage)
    _emit_json(args.out, {"coverage": args.coverage, "characters": chars})
    write_run_manifest(
        args.argv, {"coverage": args.coverage}, None, [args.infile], [args.out]
    )
    return 0


def cmd_stats_corpus(args) -> int:
    with _open_in(args.before) as fb:
        before = list(corpus.read_documents(fb))
    with _open_in(args.after) as fa:
        after = list(corpus.read_documents(fa))
    _emit_json(args.out, corpus.corpus_stats(before, after).to_dict())
    write_run_manifest(args.argv, {}, None, [args.before, args.after], [args.out])
    return 0


def cmd_stats_dataset(args) -> int:
    with _open_in(args.task) as fp:
        rows = dataset.read_task(fp)
    stats = dataset.dataset_stats((r["source"], r["target"]) for r in rows)
    _emit_json(args.out, stats.to_dict())
    write_run_manifest(args.argv, {}, None, [args.task], [args.out])
    return 0


def _noise_record(indexed: tuple[int, str], cfg_json: str, base_seed: int) -> str | None:
    index, line = indexed
    line = line.strip()
    if not line:
        return None
    obj = json.loads(line)
    cfg = noising.NoiseConfig.from_dict(json.loads(cfg_json))
    doc_seed = int(np.random.SeedSequence([base_seed, index]).generate_state(1)[0])
    pair = noising.corrupt(obj["text"], replace(cfg, seed=doc_seed))
    return json.dumps(pair.to_dict(), ensure_ascii=False)


def cmd_noise(args) -> int:
    cfg_obj = {}
    if args.config:
        with _open_in(args.config) as fp:
            cfg_obj = json.load(fp)
    cfg_obj.pop("seed", None)
    noising.NoiseConfig.from_dict(cfg_obj)  # validate before spinning up workers
    worker = functools.partial(
        _noise_record, cfg_json=json.dumps(cfg_obj), base_seed=args.seed
    )
    n = 0
    with _open_in(args.infile) as fin, _open_out(args.out) as fout:
        for out_line in _pmap(worker, enumerate(fin), args.jobs):
            if out_line is None:
                continue
            fout.write(out_line + "\n")
            n += 1
    print(f"wrote {n} pairs", file=sys.stderr)
    write_run_manifest(
        args.argv,
        {"noise": cfg_obj, "jobs": args.jobs},
        args.seed,
        [p for p in (args.infile, args.config) if p],
        [args.out],
    )
    return 0


def cmd_build_dataset(args) -> int:
    with _open_in(args.infile) as fp:
        articles = dataset.read_articles(fp)
    result = dataset.build_dataset(
        articles,
        test_n=args.test,
        valid_n=args.valid,
        novelty_quantile=args.novelty_quantile,
        seed=args.seed,
        novelty_applies_to=args.novelty_applies_to,
    )
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "title.jsonl", "w", encoding="utf-8") as fp:
        dataset.write_task(fp, result.title)
    with open(out_dir / "abstract.jsonl", "w", encoding="utf-8") as fp:
        dataset.write_task(fp, result.abstract)
    with open(out_dir / "ncc.jsonl", "w", encoding="utf-8") as fp:
        for row in result.ncc:
            fp.write(json.dumps(row, ensure_ascii=False) + "\n")
    (out_dir / "build_report.json").write_text(
        json.dumps(result.report.to_dict(), ensure_ascii=False, indent=2) + "\n",
        encoding="utf-8",
    )
    print(json.dumps(result.report.to_dict(), ensure_ascii=False), file=sys.stderr)
    write_run_manifest(
        args.argv,
        {
            "test": args.test,
            "valid": args.valid,
            "novelty_quantile": args.novelty_quantile,
            "novelty_applies_to": args.novelty_applies_to,
        },
        args.seed,
        [args.infile],
        [out_dir],
    )
    return 0


def _read_texts(path: str) -> list[str]:
    """Texts from JSONL: raw strings, or objects with text/target/prediction."""
    texts = []
    with _open_in(path) as fp:
        for lineno, line in enumerate(fp, 1):
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            if isinstance(obj, str):
                texts.append(obj)
            elif isinstance(obj, dict):
                for key in ("text", "target", "prediction"):
                    if key in obj:
                        texts.append(obj[key])
                        break
                else:
                    raise ValueError(f"line {lineno} of {path}: no text field")
            else:
                raise ValueError(f"line {lineno} of {path}: expected string or object")
    return texts


def cmd_rouge(args) -> int:
    cands = _read_texts(args.cand)
    refs = _read_texts(args.ref)
    report = metrics.rouge_report(cands, refs)
    _emit_json(args.out, report)
    write_run_manifest(args.argv, {}, None, [args.cand, args.ref], [args.out])
    return 0


def _summary_doc_pairs(args) -> tuple[list[str], list[str], list[str]]:
    if args.task:
        with _open_in(args.task) as fp:
            rows = dataset.read_task(fp)
        return [r["target"] for r in rows], [r["source"] for r in rows], [args.task]
    if not args.summaries:
        raise UsageError("either --task or --summaries is required")
    summaries = _read_texts(args.summaries)
    documents = _read_texts(args.documents) if args.documents else []
    inputs = [p for p in (args.summaries, args.documents) if p]
    return summaries, documents, inputs


def cmd_abstractivity(args) -> int:
    summaries, documents, inputs = _summary_doc_pairs(args)
    if not documents:
        raise UsageError("abstractivity needs --task or both --summaries and --documents")
    report = metrics.abstractivity_report(summaries, documents, args.max_n)
    _emit_json(args.out, report.to_dict())
    write_run_manifest(args.argv, {"max_n": args.max_n}, None, inputs, [args.out])
    return 0


def cmd_repetition(args) -> int:
    summaries, _, inputs = _summary_doc_pairs(args)
    _emit_json(
        args.out,
        {"repetition_pct": round(100 * metrics.corpus_repetition(summaries), 2)},
    )
    write_run_manifest(args.argv, {}, None, inputs, [args.out])
    return 0


def _predict_row(row: dict, method: str, n: int) -> dict:
    if method == "lead":
        pred = baselines.lead(row["source"], n)
    else:
        pred = baselines.ext_oracle(row["source"], row["target"])
    return {"doc_id": row.get("doc_id", ""), "prediction": pred}


def cmd_baseline(args) -> int:
    with _open_in(args.task) as fp:
        rows = dataset.read_task(fp)
    subset = [r for r in rows if r.get("split", args.split) == args.split]
    if not subset:
        raise ValueError(f"no rows in split {args.split!r}")
    worker = functools.partial(_predict_row, method=args.method, n=args.n)
    predictions = list(_pmap(worker, subset, args.jobs))
    with _open_out(args.out) as fp:
        for p in predictions:
            fp.write(json.dumps(p, ensure_ascii=False) + "\n")
    report = metrics.rouge_report(
        [p["prediction"] for p in predictions], [r["target"] for r in subset]
    )
    _emit_json(args.report, {"method": args.method, "split": args.split, "rouge": report})
    write_run_manifest(
        args.argv,
        {"method": args.method, "n": args.n, "split": args.split},
        None,
        [args.task],
        [args.out, args.report],
    )
    return 0


def cmd_bws_init(args) -> int:
    from .bws.models import StudyManifest
    from .bws.store import StudyStore

    with _open_in(args.manifest) as fp:
        manifest = StudyManifest.model_validate(json.load(fp))
    study = StudyStore(args.data).create(manifest)
    print(study.study_id)
    return 0


def cmd_bws_serve(args) -> int:
    import uvicorn

    from .bws.service import create_app

    app = create_app(args.data, ui_dir=args.ui)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def _single_study_id(store, requested: str | None) -> str:
    if requested:
        return requested
    ids = store.study_ids()
    if len(ids) != 1:
        raise ValueError(f"--study required; data dir holds {len(ids)} studies")
    return ids[0]


def cmd_bws_score(args) -> int:
    from .bws.store import StudyStore

    store = StudyStore(args.data)
    study_id = _single_study_id(store, args.study)
    if store.get(study_id) is None:
        raise ValueError(f"unknown study {study_id!r}")
    report = store.score(study_id)
    _emit_json(args.out, json.loads(report.model_dump_json()))
    return 0


def cmd_bws_export(args) -> int:
    from .bws.store import StudyStore

    store = StudyStore(args.data)
    study_id = _single_study_id(store, args.study)
    if store.get(study_id) is None:
        raise ValueError(f"unknown study {study_id!r}")
    with _open_out(args.out) as fp:
        for line in store.export(study_id):
            fp.write(line + "\n")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="sumlab")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_jobs(p):
        p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)

    p = sub.add_parser("clean", help="clean raw text records into documents")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", default="-")
    p.add_argument("--source", default="other", choices=corpus.SOURCES)
    add_jobs(p)
    p.set_defaults(func=cmd_clean)

    p = sub.add_parser("dedup", help="drop exact-duplicate documents")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_dedup)

    p = sub.add_parser("sample", help="random byte-budgeted corpus sample")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", default="-")
    p.add_argument("--target-bytes", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("charset", help="character set reaching a coverage target")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", default="-")
    p.add_argument("--coverage", type=float, default=0.9995)
    p.set_defaults(func=cmd_charset)

    p = sub.add_parser("noise", help="generate (corrupted, original) token pairs")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", default="-")
    p.add_argument("--config", help="JSON file mirroring the noise config fields")
    p.add_argument("--seed", type=int, default=0)
    add_jobs(p)
    p.set_defaults(func=cmd_noise)

    p = sub.add_parser("build-dataset", help="build title/abstract/ncc tasks from articles")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--test", type=int, default=10_000)
    p.add_argument("--valid", type=int, default=10_000)
    p.add_argument("--novelty-quantile", type=float, default=0.10)
    p.add_argument(
        "--novelty-applies-to", choices=("abstract", "both"), default="abstract"
    )
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_build_dataset)

    p = sub.add_parser("stats", help="corpus or dataset statistics")
    stats_sub = p.add_subparsers(dest="stats_kind", required=True)
    ps = stats_sub.add_parser("corpus")
    ps.add_argument("--before", required=True)
    ps.add_argument("--after", required=True)
    ps.add_argument("--out", default="-")
    ps.set_defaults(func=cmd_stats_corpus)
    ps = stats_sub.add_parser("dataset")
    ps.add_argument("--task", required=True)
    ps.add_argument("--out", default="-")
    ps.set_defaults(func=cmd_stats_dataset)

    p = sub.add_parser("rouge", help="corpus-mean ROUGE-1/2/L report")
    p.add_argument("--cand", required=True)
    p.add_argument("--ref", required=True)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_rouge)

    for name, fn in (("abstractivity", cmd_abstractivity), ("repetition", cmd_repetition)):
        p = sub.add_parser(name)
        p.add_argument("--task")
        p.add_argument("--summaries")
        p.add_argument("--documents")
        p.add_argument("--out", default="-")
        if name == "abstractivity":
            p.add_argument("--max-n", type=int, default=4)
        p.set_defaults(func=fn)

    p = sub.add_parser("baseline", help="run LEAD / EXT-ORACLE over a task file")
    p.add_argument("--task", required=True)
    p.add_argument("--method", required=True, choices=baselines.METHODS)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--split", default="test")
    p.add_argument("--out", default="-", help="predictions JSONL")
    p.add_argument("--report", default="-", help="evaluation report JSON")
    add_jobs(p)
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("bws", help="best-worst-scaling study tools")
    bws_sub = p.add_subparsers(dest="bws_command", required=True)
    pb = bws_sub.add_parser("init")
    pb.add_argument("--manifest", required=True)
    pb.add_argument("--data", required=True)
    pb.set_defaults(func=cmd_bws_init)
    pb = bws_sub.add_parser("serve")
    pb.add_argument("--data", required=True)
    pb.add_argument("--host", default="127.0.0.1")
    pb.add_argument("--port", type=int, default=8000)
    pb.add_argument("--ui", help="directory of built UI assets to mount at /ui")
    pb.set_defaults(func=cmd_bws_serve)
    pb = bws_sub.add_parser("score")
    pb.add_argument("--data", required=True)
    pb.add_argument("--study")
    pb.add_argument("--out", default="-")
    pb.set_defaults(func=cmd_bws_score)
    pb = bws_sub.add_parser("export")
    pb.add_argument("--data", required=True)
    pb.add_argument("--study")
    pb.add_argument("--out", default="-")
    pb.set_defaults(func=cmd_bws_export)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 1
    args.argv = list(argv) if argv is not None else sys.argv[1:]
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
