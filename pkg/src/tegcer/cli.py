"""Command-line interface: train, eval, suggest, serve, synth."""

from __future__ import annotations

import csv
import sys

import click

from .classifier import NetworkConfig, evaluate
from .corpus import build_dataset, load_corpus
from .diagnostics import CompilerConfig
from .model_io import load_model, save_model
from .pipeline import featurize, train_from_corpus
from .suggester import build_index, suggest
from . import synth as synth_mod


def _compiler_config(fixtures: str | None) -> CompilerConfig:
    return CompilerConfig(fixture_path=fixtures)


@click.group()
def main():
    """Compilation-error feedback engine."""


@main.command()
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--min-class-size", default=10, show_default=True)
@click.option("--epochs", default=6, show_default=True)
@click.option("--hidden", default=512, show_default=True)
@click.option("--dropout", default=0.2, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--fixtures", default=None, type=click.Path(exists=True),
              help="Recorded-diagnostics fixture; no compiler needed.")
def train(corpus_path, out_path, min_class_size, epochs, hidden, dropout, seed, fixtures):
    """Train a model from a JSONL corpus of (buggy, repaired) pairs."""
    pairs, report = load_corpus(corpus_path)
    for rec in report:
        click.echo(f"skipped corpus line {rec['line']}: {rec['reason']}", err=True)
    config = NetworkConfig(hidden_units=hidden, dropout_rate=dropout,
                           epochs=epochs, seed=seed)
    model, build = train_from_corpus(
        pairs, config, min_class_size=min_class_size,
        compiler=_compiler_config(fixtures),
    )
    save_model(model, out_path)
    click.echo(f"examples: {len(build.examples)}  classes: {len(build.class_table)}  "
               f"skipped: {len(build.skipped)}")
    click.echo(f"best epoch {model.metrics['best_epoch']}  "
               f"val Pred@1 {model.metrics['val_pred1']:.4f}")
    click.echo(f"model written to {out_path}")


@main.command("eval")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--min-class-size", default=10, show_default=True)
@click.option("--fixtures", default=None, type=click.Path(exists=True))
def eval_cmd(model_path, corpus_path, min_class_size, fixtures):
    """Relabel a corpus and report Pred@k plus a per-class CSV table."""
    model = load_model(model_path)
    pairs, _ = load_corpus(corpus_path)
    build = build_dataset(pairs, min_class_size=min_class_size,
                          compiler=_compiler_config(fixtures))
    # Map this corpus's classes onto the model's frozen table.
    mapped = []
    for ex in build.examples:
        key = build.class_table.by_id(ex.class_id).key
        model_id = model.class_table.id_for(key)
        if model_id is not None:
            mapped.append((ex, model_id))
    if not mapped:
        raise click.ClickException("no examples map onto the model's class table")
    _, data = featurize([ex for ex, _ in mapped], vocab=model.vocab)
    data = [(x, model_id) for (x, _), (_, model_id) in zip(data, mapped)]
    report = evaluate(model, data)
    for k in sorted(report.pred_at_k):
        click.echo(f"Pred@{k}: {report.pred_at_k[k]:.4f}")
    writer = csv.writer(sys.stdout)
    writer.writerow(["class_id", "templates", "repair", "precision", "recall",
                     "support", "top_confusion"])
    for cid in sorted(report.per_class):
        prec, rec, support, confusion = report.per_class[cid]
        cls = model.class_table.by_id(cid)
        writer.writerow([cid, " ".join(f"E_{t}" for t in cls.templates),
                         cls.repair.render(), f"{prec:.2f}", f"{rec:.2f}",
                         support, confusion if confusion is not None else ""])


@main.command("suggest")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True),
              help="Corpus used to build the example index.")
@click.option("--top-k", default=3, show_default=True)
@click.option("--examples", "examples_per_page", default=3, show_default=True)
@click.option("--min-class-size", default=10, show_default=True)
@click.option("--fixtures", default=None, type=click.Path(exists=True))
@click.argument("source_file", type=click.Path(exists=True))
def suggest_cmd(model_path, corpus_path, top_k, examples_per_page, min_class_size,
                fixtures, source_file):
    """Print ranked example fixes for each erroneous line of SOURCE_FILE."""
    model = load_model(model_path)
    pairs, _ = load_corpus(corpus_path)
    build = build_dataset(pairs, min_class_size=min_class_size,
                          compiler=_compiler_config(fixtures))
    index = build_index(build.examples)
    with open(source_file, encoding="utf-8") as fh:
        source = fh.read()
    suggestions = suggest(source, model, index, compiler=_compiler_config(fixtures),
                          examples_per_page=examples_per_page, top_k=top_k)
    if not suggestions:
        click.echo("program compiles cleanly")
        return
    for s in suggestions:
        click.echo(f"line {s.line_no}:")
        for msg in s.diagnostics:
            click.echo(f"  error: {msg}")
        for cid, prob in s.predicted[:top_k]:
            cls = model.class_table.by_id(cid)
            click.echo(f"  class {cid} (p={prob:.3f}): {cls.repair.render()}")
        for e in s.examples:
            click.echo(f"    - {e.erroneous!r} -> {e.repaired!r}")


@main.command("serve")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--addr", default="127.0.0.1:8000", show_default=True)
@click.option("--min-class-size", default=10, show_default=True)
@click.option("--fixtures", default=None, type=click.Path(exists=True))
def serve_cmd(model_path, corpus_path, addr, min_class_size, fixtures):
    """Run the HTTP feedback service."""
    import uvicorn

    from .service import create_app

    model = load_model(model_path)
    pairs, _ = load_corpus(corpus_path)
    build = build_dataset(pairs, min_class_size=min_class_size,
                          compiler=_compiler_config(fixtures))
    index = build_index(build.examples)
    app = create_app(model, index, compiler=_compiler_config(fixtures))
    host, _, port = addr.partition(":")
    uvicorn.run(app, host=host, port=int(port or 8000))


@main.command("synth")
@click.option("--out", "corpus_path", required=True, type=click.Path())
@click.option("--fixtures", "fixture_path", required=True, type=click.Path())
@click.option("--pairs", "min_pairs", default=1000, show_default=True)
@click.option("--seed", default=1234, show_default=True)
def synth_cmd(corpus_path, fixture_path, min_pairs, seed):
    """Generate a synthetic mutation corpus plus its diagnostics fixture."""
    pairs = synth_mod.generate_pairs(min_pairs=min_pairs, seed=seed)
    synth_mod.write_corpus(pairs, corpus_path, fixture_path)
    click.echo(f"wrote {len(pairs)} pairs to {corpus_path}")
