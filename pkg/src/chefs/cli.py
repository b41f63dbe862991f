"""Command-line entry point: discovery -> ingest -> store -> reports/plots.

Flags mirror config-file keys one to one; flags override the file. Human
summaries go to stdout, line-delimited JSON events to stderr, so the tool
pipes cleanly. Exit codes: 0 success, 1 fatal I/O or unknown name,
2 schema conflict, 3 validation failure.
"""

from __future__ import annotations

import json
import os
import sys
import time
from pathlib import Path

import click

from . import analytics
from .ingest import IngestError, MalformedFileError, SchemaConflictError
from .model import ChefsError, HazardCategory
from .pipeline import RunConfig, run_ingest, run_validate
from .store import Store
from .svgcharts import plot_report
from .synth import CorpusPlan, default_plan, generate_corpus, oracle_aggregate

EXIT_OK = 0
EXIT_FATAL = 1
EXIT_SCHEMA_CONFLICT = 2
EXIT_VALIDATION = 3

STORE_ENV_VAR = "CHEFS_STORE"


def log_event(event: str, **fields) -> None:
    payload = {"event": event, **fields}
    print(json.dumps(payload, sort_keys=True, default=str), file=sys.stderr)


def _path_or_none(value) -> "Path | None":
    return Path(value) if value else None


def build_config(config_file, **flags) -> RunConfig:
    """Config file first, then explicit flags on top."""
    values: dict = {}
    if config_file:
        values.update(json.loads(Path(config_file).read_text("utf-8")))
    for key, value in flags.items():
        if value is not None:
            values[key] = value
    path_keys = (
        "input_root",
        "store_root",
        "output_dir",
        "synonyms_path",
        "schema_path",
        "param_catalogue",
        "product_catalogue",
        "grouping_dictionary",
    )
    kwargs = {}
    for key, value in values.items():
        kwargs[key] = Path(value) if key in path_keys and value is not None else value
    if kwargs.get("store_root") is None and os.environ.get(STORE_ENV_VAR):
        kwargs["store_root"] = Path(os.environ[STORE_ENV_VAR])
    return RunConfig(**kwargs)


def _check_paths(config: RunConfig, need_input: bool, need_store: bool) -> None:
    if need_input:
        if config.input_root is None or not Path(config.input_root).is_dir():
            raise IngestError(f"input root not found: {config.input_root}")
    if need_store and config.store_root is None:
        raise IngestError(f"no store root given (flag, config, or ${STORE_ENV_VAR})")


common_options = [
    click.option("--config", "config_file", type=click.Path(), default=None, help="JSON config file."),
    click.option("--input", "input_root", type=click.Path(), default=None, help="Raw-file directory."),
    click.option("--store", "store_root", type=click.Path(), default=None, help="Store root (default $CHEFS_STORE)."),
    click.option("--output", "output_dir", type=click.Path(), default=None, help="Output directory."),
    click.option("--synonyms", "synonyms_path", type=click.Path(), default=None),
    click.option("--schema", "schema_path", type=click.Path(), default=None),
    click.option("--param-catalogue", "param_catalogue", type=click.Path(), default=None),
    click.option("--product-catalogue", "product_catalogue", type=click.Path(), default=None),
    click.option("--grouping-dictionary", "grouping_dictionary", type=click.Path(), default=None),
    click.option("--jobs", type=int, default=None, help="Parallel workers (results identical for any value)."),
]


def with_common_options(fn):
    for option in reversed(common_options):
        fn = option(fn)
    return fn


@click.group()
def main() -> None:
    """Batch ETL engine and analytics for food-safety monitoring data."""


@main.command("ingest")
@with_common_options
@click.option("--overwrite", is_flag=True, default=False, help="Replace existing partitions.")
def cmd_ingest(config_file, overwrite, **flags) -> None:
    """Discover, harmonize and load raw files into a store."""
    config = build_config(config_file, overwrite=overwrite or None, **flags)
    try:
        _check_paths(config, need_input=True, need_store=True)
        started = time.perf_counter()
        result = run_ingest(config)
    except SchemaConflictError as exc:
        log_event("schema_conflict", error=str(exc))
        click.echo(f"schema conflict: {exc}")
        sys.exit(EXIT_SCHEMA_CONFLICT)
    except (MalformedFileError, IngestError, OSError) as exc:
        log_event("fatal", error=str(exc))
        click.echo(f"fatal: {exc}")
        sys.exit(EXIT_FATAL)
    stats = result.stats
    log_event(
        "ingest_done",
        seconds=round(time.perf_counter() - started, 3),
        rows_read=stats.rows_read,
        results=stats.results_emitted,
        samples=stats.samples_emitted,
        duplicates_removed=stats.duplicates_removed,
        rows_malformed=stats.rows_malformed,
        unknown_eval_codes=stats.unknown_eval_codes,
        skipped=len(result.skipped),
    )
    click.echo(
        f"ingested {stats.rows_read} rows from {len(stats.files)} files: "
        f"{stats.results_emitted} results, {stats.samples_emitted} samples, "
        f"{stats.duplicates_removed} duplicates removed, {stats.rows_malformed} malformed"
    )
    click.echo(f"store: {config.store_root} (stats in _ingest_stats.json)")
    sys.exit(EXIT_OK)


@main.command("validate")
@with_common_options
def cmd_validate(config_file, **flags) -> None:
    """Round-trip validate the store against its source files."""
    config = build_config(config_file, **flags)
    try:
        _check_paths(config, need_input=True, need_store=True)
        reports = run_validate(config)
    except (IngestError, ChefsError, OSError) as exc:
        log_event("fatal", error=str(exc))
        click.echo(f"fatal: {exc}")
        sys.exit(EXIT_FATAL)
    out_dir = Path(config.output_dir) if config.output_dir else Path(config.store_root)
    out_dir.mkdir(parents=True, exist_ok=True)
    payload = {
        "config": config.echo(),
        "partitions": [r.to_json_dict() for r in reports],
    }
    (out_dir / "validation_report.json").write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    mismatches = sum(r.total_mismatches + r.missing_rows + r.unexpected_rows for r in reports)
    dirty = [r for r in reports if not r.clean]
    log_event("validate_done", partitions=len(reports), mismatches=mismatches, dirty=len(dirty))
    for report in reports:
        status = "ok" if report.clean else "MISMATCH"
        click.echo(
            f"{report.key[0]}/{report.key[1]}/{report.key[2]}: {status} "
            f"({report.rows_compared} rows compared, {report.total_mismatches} mismatches, "
            f"{report.removed_duplicates} duplicates accounted)"
        )
    if dirty:
        click.echo(f"validation FAILED: {mismatches} discrepancies")
        sys.exit(EXIT_VALIDATION)
    click.echo("validation clean: no information altered or lost")
    sys.exit(EXIT_OK)


def _report_from_opts(maps, name: str, opts: dict) -> analytics.AggregateReport:
    hazard = opts.get("hazard")
    year_range = (opts["year_from"], opts["year_to"])
    if name == "yearly_trend":
        return analytics.yearly_trend(maps, hazard, year_range)
    if name == "top_contaminants":
        return analytics.top_contaminants(maps, _require_hazard(hazard), opts["n"])
    if name == "hazard_product_table":
        return analytics.hazard_product_table(maps, _require_hazard(hazard), opts["n1"], opts["n2"])
    if name == "product_hazard_table":
        return analytics.product_hazard_table(maps, _require_hazard(hazard), opts["n1"], opts["n2"])
    if name == "ontology_group_stats":
        return analytics.ontology_group_stats(maps, opts["level"], hazard, opts.get("parent"))
    if name == "product_category_stats":
        return analytics.product_category_stats(maps, hazard)
    if name == "country_stats":
        return analytics.country_stats(maps, opts["top"])
    if name == "sampling_strategy_breakdown":
        return analytics.sampling_strategy_breakdown(maps, opts["group_by"])
    if name == "trade_links":
        return analytics.trade_links(maps, opts["min_samples"], opts["top"], year_range)
    if name == "unknown_origin_trend":
        return analytics.unknown_origin_trend(maps)
    if name == "results_per_sample_distribution":
        return analytics.results_per_sample_distribution(maps)
    if name == "contaminant_overlap":
        return analytics.contaminant_overlap(maps)
    raise KeyError(name)


def _require_hazard(hazard) -> HazardCategory:
    if hazard is None:
        raise click.UsageError("--hazard is required for this report")
    return HazardCategory.from_code(hazard)


report_options = [
    click.option("--hazard", type=click.Choice([h.value for h in HazardCategory]), default=None),
    click.option("--n", type=int, default=10, help="Row budget for top-N reports."),
    click.option("--n1", type=int, default=3, help="Outer top-N for cross tables."),
    click.option("--n2", type=int, default=3, help="Inner top-N for cross tables."),
    click.option("--level", type=int, default=1),
    click.option("--parent", type=str, default=None),
    click.option("--top", type=int, default=None),
    click.option("--min-samples", "min_samples", type=int, default=100),
    click.option("--year-from", "year_from", type=int, default=2000),
    click.option("--year-to", "year_to", type=int, default=2024),
    click.option("--group-by", "group_by", type=click.Choice(analytics.STRATEGY_GROUPINGS), default="overall"),
]


def with_report_options(fn):
    for option in reversed(report_options):
        fn = option(fn)
    return fn


def _compute_report(name, config_file, flags, ropts) -> tuple:
    config = build_config(config_file, **flags)
    _check_paths(config, need_input=False, need_store=True)
    if name not in analytics.REPORTS:
        known = ", ".join(sorted(analytics.REPORTS))
        raise click.ClickException(f"unknown report {name!r}; valid names: {known}")
    store = Store(config.store_root)
    maps = analytics.build_maps(
        store, dictionary_path=config.grouping_dictionary, jobs=max(1, config.jobs)
    )
    if ropts.get("top") is None:
        ropts["top"] = 15 if name == "country_stats" else 20
    report = _report_from_opts(maps, name, ropts)
    report.meta["config"] = config.echo()
    report.meta["store_checksum"] = store.checksum()
    return config, report


@main.command("report")
@click.argument("name")
@with_common_options
@with_report_options
def cmd_report(name, config_file, **all_flags) -> None:
    """Compute one named report and write it as CSV + JSON."""
    ropts = {k: all_flags.pop(k) for k in (
        "hazard", "n", "n1", "n2", "level", "parent", "top", "min_samples",
        "year_from", "year_to", "group_by",
    )}
    try:
        config, report = _compute_report(name, config_file, all_flags, ropts)
    except click.ClickException:
        raise
    except (ChefsError, OSError) as exc:
        log_event("fatal", error=str(exc))
        click.echo(f"fatal: {exc}")
        sys.exit(EXIT_FATAL)
    out_dir = Path(config.output_dir) if config.output_dir else Path.cwd()
    paths = report.write(out_dir)
    if name == "trade_links":
        paths.append(_write_edge_list(report, out_dir))
    log_event("report_done", name=name, rows=len(report.rows))
    for path in paths:
        click.echo(str(path))
    sys.exit(EXIT_OK)


def _write_edge_list(report, out_dir: Path) -> Path:
    """Chord-data edge list: origin,destination,samples,noncompliant,pct."""
    import csv as _csv

    path = out_dir / f"{report.name}_edges.csv"
    cols = {name: i for i, name in enumerate(report.columns)}
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = _csv.writer(fh, lineterminator="\n")
        writer.writerow(("origin", "destination", "samples", "noncompliant", "pct"))
        for row in report.rows:
            writer.writerow(
                (
                    row[cols["origin"]],
                    row[cols["destination"]],
                    row[cols["samples"]],
                    row[cols["noncompliant_samples"]],
                    row[cols["pct"]],
                )
            )
    return path


@main.command("plot")
@click.argument("name")
@with_common_options
@with_report_options
def cmd_plot(name, config_file, **all_flags) -> None:
    """Compute one named report and render it as a simple SVG."""
    ropts = {k: all_flags.pop(k) for k in (
        "hazard", "n", "n1", "n2", "level", "parent", "top", "min_samples",
        "year_from", "year_to", "group_by",
    )}
    try:
        config, report = _compute_report(name, config_file, all_flags, ropts)
        svg = plot_report(report)
    except click.ClickException:
        raise
    except ValueError as exc:
        click.echo(f"unplottable: {exc}")
        sys.exit(EXIT_FATAL)
    except (ChefsError, OSError) as exc:
        log_event("fatal", error=str(exc))
        click.echo(f"fatal: {exc}")
        sys.exit(EXIT_FATAL)
    out_dir = Path(config.output_dir) if config.output_dir else Path.cwd()
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{report.name}.svg"
    path.write_text(svg, encoding="utf-8")
    log_event("plot_done", name=name, path=str(path))
    click.echo(str(path))
    sys.exit(EXIT_OK)


@main.group("synth")
def synth_group() -> None:
    """Synthetic corpus generation and the brute-force oracle."""


@synth_group.command("generate")
@click.option("--plan", "plan_path", type=click.Path(), default=None, help="Plan JSON; omit for the seeded default plan.")
@click.option("--seed", type=int, default=1)
@click.option("--rows", type=int, default=100_000, help="Approximate total rows for the default plan.")
@click.option("--output", "output_dir", type=click.Path(), required=True)
def cmd_synth_generate(plan_path, seed, rows, output_dir) -> None:
    """Generate a corpus plus its ground-truth ledger."""
    try:
        plan = CorpusPlan.load(plan_path) if plan_path else default_plan(seed, rows)
        corpus = generate_corpus(plan, output_dir)
    except (ChefsError, OSError) as exc:
        log_event("fatal", error=str(exc))
        click.echo(f"fatal: {exc}")
        sys.exit(EXIT_FATAL)
    totals = corpus.ledger.totals
    log_event("synth_done", files=len(plan.files), **totals)
    click.echo(
        f"generated {len(plan.files)} files, {totals['rows_read']} rows "
        f"({totals['results']} results, {totals['duplicates_removed']} duplicates, "
        f"{totals['rows_malformed']} malformed) in {corpus.files_dir}"
    )
    click.echo(f"ledger: {corpus.ledger_path}")
    sys.exit(EXIT_OK)


@synth_group.command("oracle")
@click.option("--input", "input_root", type=click.Path(), required=True)
@click.option("--output", "output_path", type=click.Path(), required=True)
@click.option("--param-catalogue", "param_catalogue", type=click.Path(), default=None)
@click.option("--product-catalogue", "product_catalogue", type=click.Path(), default=None)
def cmd_synth_oracle(input_root, output_path, param_catalogue, product_catalogue) -> None:
    """Recompute every statistic by naive groupby over the raw files."""
    try:
        maps, per_file, totals = oracle_aggregate(
            input_root,
            param_catalogue_path=param_catalogue,
            product_catalogue_path=product_catalogue,
        )
    except (ChefsError, OSError) as exc:
        log_event("fatal", error=str(exc))
        click.echo(f"fatal: {exc}")
        sys.exit(EXIT_FATAL)
    payload = {"maps": maps.canonical(), "per_file": per_file, "totals": totals}
    Path(output_path).write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    log_event("oracle_done", **totals)
    click.echo(f"oracle aggregates written to {output_path}")
    sys.exit(EXIT_OK)


if __name__ == "__main__":
    main()
