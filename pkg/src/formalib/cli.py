"""Command-line surface: every platform capability without the service.

Machine-readable output goes to stdout (the same canonical bytes the HTTP
API serves), diagnostics to stderr.  Exit codes: 0 success, 1 user error,
2 internal error.
"""

from __future__ import annotations

import sys
from dataclasses import replace
from pathlib import Path

import click

from . import wire
from .config import load_config
from .corpus import CorpusRepository, plan_rebase, read_corpus_dir
from .depgraph import export_dot, export_json
from .errors import FormalibError
from .lsi import rank
from .namesearch import query as name_query


def _repo(ctx: click.Context) -> CorpusRepository:
    return CorpusRepository(ctx.obj)


def _loaded_repo(ctx: click.Context) -> CorpusRepository:
    repo = _repo(ctx)
    if repo.load() is None:
        raise FormalibError(
            f"no corpus in data directory {repo.data_dir}; run 'ingest' first"
        )
    return repo


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="JSON config file (same one the service uses).")
@click.option("--data", "data_dir", type=click.Path(), default=None,
              help="Data directory; overrides the config file.")
@click.pass_context
def cli(ctx: click.Context, config_path: str | None, data_dir: str | None):
    config = load_config(config_path)
    if data_dir is not None:
        config = replace(config, data_dir=Path(data_dir))
    ctx.obj = config


@cli.command()
@click.argument("directory", type=click.Path(exists=True, file_okay=False))
@click.option("--label", required=True, help="Version label for this corpus.")
@click.option("--data", "data_dir", type=click.Path(), default=None,
              help="Data directory (same as the global --data).")
@click.pass_context
def ingest(ctx: click.Context, directory: str, label: str, data_dir: str | None):
    """Parse DIRECTORY and persist a servable corpus state."""
    if data_dir is not None:
        ctx.obj = replace(ctx.obj, data_dir=Path(data_dir))
    repo = _repo(ctx)
    state = repo.ingest(directory, label)
    for warning in state.warnings:
        click.echo(f"warning: {warning}", err=True)
    sys.stdout.write(
        wire.canonical_json(
            {
                "version_label": state.version_label,
                "corpus_hash": state.corpus_hash,
                "articles": len(state.articles),
                "items": len(state.anchors),
                "lsi_rebuilt": repo.last_lsi_rebuilt,
            }
        )
    )


@cli.group()
def graph():
    """Dependency graph queries."""


@graph.command("export")
@click.argument("fmt", type=click.Choice(["dot", "json", "sfdp"]))
@click.option("--reduced", is_flag=True, default=False)
@click.pass_context
def graph_export(ctx: click.Context, fmt: str, reduced: bool):
    """Print the dependency graph as DOT or JSON."""
    state = _loaded_repo(ctx).require_state()
    g = state.reduced if reduced else state.graph
    if fmt == "json":
        sys.stdout.write(export_json(g))
    else:
        sys.stdout.write(export_dot(g, sfdp=fmt == "sfdp"))


@graph.command("layers")
@click.pass_context
def graph_layers(ctx: click.Context):
    """Print the name -> layer table."""
    state = _loaded_repo(ctx).require_state()
    sys.stdout.write(wire.layers_table(state))


@cli.group()
def search():
    """Name and theorem search."""


@search.command("names")
@click.argument("text")
@click.option("--kind", type=click.Choice(["article", "symbol"]), default=None)
@click.option("--limit", type=int, default=50)
@click.pass_context
def search_names(ctx: click.Context, text: str, kind: str | None, limit: int):
    state = _loaded_repo(ctx).require_state()
    entries = name_query(state.names, text, kind_filter=kind, limit=limit)
    sys.stdout.write(wire.canonical_json(wire.name_results_payload(entries)))


@search.command("theorems")
@click.argument("text")
@click.option("--limit", type=int, default=20)
@click.pass_context
def search_theorems(ctx: click.Context, text: str, limit: int):
    state = _loaded_repo(ctx).require_state()
    results = rank(state.lsi_model, state.lsi_matrix, text, limit)
    sys.stdout.write(
        wire.canonical_json(wire.theorem_results_payload(state, results))
    )


@cli.group()
def comments():
    """Annotation maintenance."""


@comments.command("rebase")
@click.argument("old_dir", type=click.Path(exists=True, file_okay=False))
@click.argument("new_dir", type=click.Path(exists=True, file_okay=False))
@click.pass_context
def comments_rebase(ctx: click.Context, old_dir: str, new_dir: str):
    """Dry-run a library update: report merge conflicts, mutate nothing."""
    repo = _repo(ctx)
    old_sources = read_corpus_dir(old_dir)
    new_sources = read_corpus_dir(new_dir)
    plans = plan_rebase(old_sources, repo.comments, new_sources)
    conflicted = [p for p in plans if p.status != "clean"]
    payload = {
        "conflicts": sum(max(p.conflict_count, 1) for p in conflicted),
        "conflicted_articles": [
            {"article": p.article, "anchors": list(p.commented_anchors)}
            for p in conflicted
        ],
        "comments_carried": sum(
            len(p.commented_anchors) for p in plans if p.status == "clean"
        ),
    }
    sys.stdout.write(wire.canonical_json(payload))


@cli.command()
@click.option("--config", "config_path", type=click.Path(exists=True), required=True)
def serve(config_path: str):
    """Start the HTTP service."""
    import uvicorn

    from .service import create_app

    config = load_config(config_path)
    repo = CorpusRepository(config)
    repo.load()
    app = create_app(repo)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")


def main() -> None:
    try:
        cli(standalone_mode=False)
    except click.exceptions.Abort:
        sys.exit(1)
    except click.ClickException as err:
        err.show()
        sys.exit(1)
    except FormalibError as err:
        print(f"error: {err}", file=sys.stderr)
        sys.exit(1)
    except Exception as err:  # noqa: BLE001 - last-resort diagnostic
        print(f"internal error: {err}", file=sys.stderr)
        sys.exit(2)


if __name__ == "__main__":
    main()
