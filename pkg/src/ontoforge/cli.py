"""Command-line front end.

Exit codes: 0 success, 1 QC gate failure, 2 usage error, 3 input parse
error, 4 incoherent ontology, 5 I/O or network error.
"""

from __future__ import annotations

import logging
import shutil
import sys
from datetime import date as Date
from pathlib import Path

import click

from . import errors
from .config import FORMATS, PRODUCTS, load_config
from .io import emit_functional, load_ontology, parse_seed_file
from .model import Ontology, PrefixMap, default_prefix_map, is_native, merge, signature
from .modules import METHODS, ExtractionRequest, extract, refresh_import
from .qc import SEVERITIES, CheckConfig, emit_report_tsv, filter_report, gate, parse_report_tsv, run_checks
from .reasoner import classify
from .release import load_import_modules, load_project, plan_from_config, prepare_release, working_ontology
from .scaffold import seed_repo, update_repo
from .templates import (
    compile_pattern,
    compile_table_template,
    load_pattern,
    parse_filler_table,
)

logger = logging.getLogger("ontoforge")

EXIT_OK = 0
EXIT_GATE = 1
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_INCOHERENT = 4
EXIT_IO = 5


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, errors.ReleaseStepError):
        return exit_code_for(exc.cause)
    if isinstance(exc, errors.QCGateFailed):
        return EXIT_GATE
    if isinstance(exc, errors.IncoherentOntology):
        return EXIT_INCOHERENT
    if isinstance(exc, (errors.UnknownImportId, errors.TargetNotEmpty, click.UsageError)):
        return EXIT_USAGE
    if isinstance(
        exc,
        (
            errors.ParseError,
            errors.UnknownPrefix,
            errors.InvalidConfig,
            errors.TemplateError,
            errors.NotAProject,
            errors.Inexpressible,
            errors.UnsupportedConstruct,
            UnicodeDecodeError,
        ),
    ):
        return EXIT_PARSE
    if isinstance(exc, (errors.MirrorUnavailable, OSError)):
        return EXIT_IO
    return EXIT_PARSE if isinstance(exc, (errors.OntoforgeError, ValueError)) else EXIT_IO


def _date(ctx, param, value):
    if value is None:
        return None
    try:
        return Date.fromisoformat(value)
    except ValueError:
        raise click.BadParameter(f"{value!r} is not a YYYY-MM-DD date") from None


def _resolve(ctx: click.Context, path: str | Path) -> Path:
    path = Path(path)
    return path if path.is_absolute() else ctx.obj["workdir"] / path


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option(
    "--workdir",
    "-w",
    type=click.Path(file_okay=False, path_type=Path),
    default=".",
    show_default=True,
    help="Project directory; relative paths resolve against it.",
)
@click.option("--quiet", "-q", is_flag=True, help="Only log errors.")
@click.option("--verbose", "-v", is_flag=True, help="Log debug detail.")
@click.pass_context
def cli(ctx: click.Context, workdir: Path, quiet: bool, verbose: bool) -> None:
    """Ontology lifecycle workflows: seed, release, QC, imports and templates."""
    level = logging.ERROR if quiet else logging.DEBUG if verbose else logging.WARNING
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr, force=True)
    ctx.ensure_object(dict)
    ctx.obj["workdir"] = workdir.resolve()


@cli.command()
@click.option("-C", "--config", "config_path", required=True, type=click.Path(dir_okay=False), help="project YAML")
@click.argument("directory", required=False)
@click.option("--date", "release_date", callback=_date, help="Date for the initial release.")
@click.option("--no-release", is_flag=True, help="Skip the initial release.")
@click.pass_context
def seed(ctx, config_path, directory, release_date, no_release):
    """Create a new project from a YAML config."""
    cfg = load_config(_resolve(ctx, config_path))
    target = _resolve(ctx, directory or cfg.id)
    files = seed_repo(cfg, target, release=not no_release, release_date=release_date)
    for entry in files.entries:
        click.echo(f"{'managed' if entry.managed else 'user'}\t{entry.path}")


@cli.command("update-repo")
@click.pass_context
def update_repo_cmd(ctx):
    """Regenerate managed files from project.yaml."""
    root = ctx.obj["workdir"]
    cfg = load_project(root)
    summary = update_repo(cfg, root)
    for line in summary.lines():
        click.echo(line)
    for path in summary.skipped:
        click.echo(f"warning: {path} lacks the generated marker and was not updated", err=True)


@cli.command()
@click.option("--date", "release_date", callback=_date, help="Pin the release date (YYYY-MM-DD).")
@click.option("--product", "products", multiple=True, type=click.Choice(PRODUCTS))
@click.option("--format", "formats", multiple=True, type=click.Choice(FORMATS))
@click.option("--force", is_flag=True, help="Write products even when the QC gate fails.")
@click.option("--pin-imports", is_flag=True, help="Use the existing import modules as they are.")
@click.pass_context
def release(ctx, release_date, products, formats, force, pin_imports):
    """Run the release workflow into release/."""
    root = ctx.obj["workdir"]
    cfg = load_project(root)
    plan = plan_from_config(
        cfg,
        products=list(products) or None,
        formats=list(formats) or None,
        release_date=release_date,
        force=force,
        pin_imports=pin_imports,
    )
    artifacts = prepare_release(root, plan, cfg)
    for entry in artifacts.manifest:
        click.echo(f"{entry.filename}\t{entry.sha256}")
    for note in artifacts.notes:
        click.echo(f"note: {note}", err=True)
    if not gate(artifacts.qc_report):
        click.echo("QC gate failed; products written because of --force", err=True)
        ctx.exit(EXIT_GATE)


@cli.command()
@click.option("--output", "-o", default="reports/qc-report.tsv", show_default=True)
@click.option("--input", "input_path", help="Check a single ontology file instead of the project.")
@click.pass_context
def qc(ctx, output, input_path):
    """Run the quality checks and write a TSV report."""
    root = ctx.obj["workdir"]
    if input_path:
        o = load_ontology(_resolve(ctx, input_path))
        has_project = (root / "project.yaml").exists()
        cfg = load_project(root).check_config() if has_project else CheckConfig()
    else:
        project = load_project(root)
        o = merge([working_ontology(root, project), *load_import_modules(root, project)])
        cfg = project.check_config()
    report = run_checks(o, classify(o), cfg)
    _write(_resolve(ctx, output), emit_report_tsv(report))
    counts = report.summary
    click.echo(" ".join(f"{k}={counts[k]}" for k in SEVERITIES), err=True)
    ctx.exit(EXIT_OK if gate(report) else EXIT_GATE)


@cli.command("refresh-imports")
@click.option("--import", "import_ids", multiple=True, help="Refresh only these imports.")
@click.option("--date", "stamp_date", callback=_date, help="Date stamped on the modules.")
@click.option("--offline", is_flag=True, help="Reuse cached mirrors instead of fetching sources.")
@click.pass_context
def refresh_imports(ctx, import_ids, stamp_date, offline):
    """Re-extract import modules from their sources."""
    root = ctx.obj["workdir"]
    cfg = load_project(root)
    ids = list(import_ids) or [imp.id for imp in cfg.imports]
    working = working_ontology(root, cfg)
    extra = [iri for iri, _ in signature(working) if not is_native(iri, [cfg.base_iri])]
    for import_id in ids:
        path = refresh_import(root, import_id, cfg, stamp_date, download=not offline, extra_seeds=extra)
        click.echo(str(path.relative_to(root)) if path.is_relative_to(root) else str(path))


@cli.command("extract-module")
@click.option("--method", required=True, type=click.Choice(METHODS))
@click.option("--input", "input_path", required=True)
@click.option("--terms", "terms_path", required=True)
@click.option("--output", required=True)
@click.option("--relation", "relations", multiple=True, help="Relation IRI or CURIE (relation method).")
@click.pass_context
def extract_module(ctx, method, input_path, terms_path, output, relations):
    """Extract a module for the terms in a seed file."""
    source = load_ontology(_resolve(ctx, input_path))
    pm = default_prefix_map().merged(source.prefix_map)
    seeds = parse_seed_file(_resolve(ctx, terms_path).read_text(encoding="utf-8"), pm)
    for err in seeds.errors:
        click.echo(f"{terms_path}: {err}", err=True)
    if (method == "relation") != bool(relations):
        raise click.UsageError("--relation is required for, and only allowed with, --method relation")
    rels = [pm.expand(r) for r in relations]
    result = extract(source, ExtractionRequest(method, seeds.terms, rels))
    for missing in result.missing:
        click.echo(f"warning: {missing}", err=True)
    _write(_resolve(ctx, output), emit_functional(result.module))


@cli.group()
def template():
    """Template compilation."""


def _prefix_option(ctx, param, values):
    out = {}
    for value in values:
        name, sep, iri = value.partition("=")
        if not sep:
            raise click.BadParameter(f"{value!r} is not NAME=IRI")
        out[name] = iri
    return out


@template.command("compile")
@click.option("--pattern", "pattern_path")
@click.option("--data", "data_path")
@click.option("--table", "table_path")
@click.option("--output", required=True)
@click.option("--prefix", "prefixes", multiple=True, callback=_prefix_option, help="Extra NAME=IRI prefix.")
@click.pass_context
def template_compile(ctx, pattern_path, data_path, table_path, output, prefixes):
    """Compile a design pattern (--pattern/--data) or a table template (--table)."""
    if bool(table_path) == bool(pattern_path or data_path) or (pattern_path is None) != (data_path is None):
        raise click.UsageError("give either --pattern with --data, or --table")
    root = ctx.obj["workdir"]
    cfg = load_project(root) if (root / "project.yaml").exists() else None
    base = cfg.prefix_map() if cfg else default_prefix_map()
    pm = PrefixMap({**dict(base), **prefixes})
    if table_path:
        axioms = compile_table_template(_resolve(ctx, table_path).read_text(encoding="utf-8"), pm)
    else:
        labels = None
        if cfg is not None:
            labels = merge([working_ontology(root, cfg), *load_import_modules(root, cfg)])
        pattern = load_pattern(_resolve(ctx, pattern_path).read_text(encoding="utf-8"), source=pattern_path)
        table = parse_filler_table(_resolve(ctx, data_path).read_text(encoding="utf-8"))
        axioms = compile_pattern(pattern, table, pm, labels)
    _write(_resolve(ctx, output), emit_functional(Ontology(prefix_map=pm, axioms=tuple(axioms))))


@cli.command()
@click.option("--input", "input_path", default="release/qc-report.tsv", show_default=True)
@click.option("--min-severity", type=click.Choice(SEVERITIES), default="INFO", show_default=True)
@click.pass_context
def report(ctx, input_path, min_severity):
    """Print a saved QC report, keeping rows at or above a severity."""
    text = _resolve(ctx, input_path).read_text(encoding="utf-8")
    try:
        parsed = parse_report_tsv(text)
    except ValueError as exc:
        raise errors.ParseError(str(exc), source=input_path) from None
    click.echo(emit_report_tsv(filter_report(parsed, min_severity)), nl=False)
    ctx.exit(EXIT_OK if gate(parsed) else EXIT_GATE)


@cli.command()
@click.pass_context
def clean(ctx):
    """Delete release/ and temporary directories."""
    root = ctx.obj["workdir"]
    for name in ("release", "tmp"):
        target = root / name
        if target.is_dir():
            shutil.rmtree(target)
            click.echo(f"removed {name}/")


def main(argv: list[str] | None = None) -> int:
    try:
        result = cli.main(args=argv, prog_name="ontoforge", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return EXIT_USAGE
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return EXIT_USAGE
    except errors.QCGateFailed as exc:
        counts = exc.report.summary
        click.echo(f"error: {exc} (ERROR={counts['ERROR']} WARN={counts['WARN']})", err=True)
        return EXIT_GATE
    except (errors.OntoforgeError, OSError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        return exit_code_for(exc)
    return result if isinstance(result, int) else EXIT_OK


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
