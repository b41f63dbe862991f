"""End-to-end orchestration: discover -> ingest -> store -> validate.

Files are ingested one worker per file; merging happens in sorted
manifest order regardless of completion order, result ids are deduplicated
globally in that same order, and every output (partition CSVs, manifests,
stats JSON) is explicitly sorted. Consequently any permutation of the
input file list and any ``jobs`` value produce byte-identical stores.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import store as store_mod
from .catalog import Catalogue, load_catalogue
from .ingest import (
    FileManifestEntry,
    IngestedFile,
    IngestError,
    IngestStats,
    SynonymTable,
    discover_files,
    ingest_file,
    load_synonyms,
)
from .model import ChefsError
from .schema import CoreSchema, load_core_schema
from .store import Store, ValidationReport, round_trip_validate, write_partition


@dataclass
class RunConfig:
    """Run-wide configuration; flags mirror these keys one to one.

    ``echo()`` returns the semantic subset embedded in outputs for
    provenance: execution knobs (jobs) are excluded so reruns at any
    parallelism stay byte-identical.
    """

    input_root: "Path | None" = None
    store_root: "Path | None" = None
    output_dir: "Path | None" = None
    synonyms_path: "Path | None" = None
    schema_path: "Path | None" = None
    param_catalogue: "Path | None" = None
    product_catalogue: "Path | None" = None
    grouping_dictionary: "Path | None" = None
    year_from: int = 2000
    year_to: int = 2024
    min_samples: int = 100
    top_n: int = 20
    jobs: int = 1
    overwrite: bool = False

    def echo(self) -> dict:
        def p(value):
            return str(value) if value is not None else None

        return {
            "input_root": p(self.input_root),
            "store_root": p(self.store_root),
            "output_dir": p(self.output_dir),
            "synonyms_path": p(self.synonyms_path),
            "schema_path": p(self.schema_path),
            "param_catalogue": p(self.param_catalogue),
            "product_catalogue": p(self.product_catalogue),
            "grouping_dictionary": p(self.grouping_dictionary),
            "year_from": self.year_from,
            "year_to": self.year_to,
            "min_samples": self.min_samples,
            "top_n": self.top_n,
        }


@dataclass
class PipelineResult:
    store: Store
    stats: IngestStats
    skipped: list[tuple[Path, str]]
    partitions: list = field(default_factory=list)


def _load_catalogues(config: RunConfig) -> tuple["Catalogue | None", "Catalogue | None"]:
    param_cat = (
        load_catalogue(config.param_catalogue, "PARAM") if config.param_catalogue else None
    )
    product_cat = (
        load_catalogue(config.product_catalogue, "MATRIX_FOODEX2")
        if config.product_catalogue
        else None
    )
    return param_cat, product_cat


_WORKER_CACHE: dict = {}


def _ingest_worker(args) -> IngestedFile:
    entry, synonyms_path, schema_path, param_path, product_path = args
    key = (synonyms_path, schema_path, param_path, product_path)
    cached = _WORKER_CACHE.get(key)
    if cached is None:
        synonyms = load_synonyms(synonyms_path)
        schema = load_core_schema(schema_path)
        param_cat = load_catalogue(param_path, "PARAM") if param_path else None
        product_cat = load_catalogue(product_path, "MATRIX_FOODEX2") if product_path else None
        cached = (synonyms, schema, param_cat, product_cat)
        _WORKER_CACHE[key] = cached
    synonyms, schema, param_cat, product_cat = cached
    return ingest_file(
        entry,
        synonyms=synonyms,
        schema=schema,
        param_catalogue=param_cat,
        product_catalogue=product_cat,
    )


@dataclass
class _PartitionAccumulator:
    samples: dict = field(default_factory=dict)
    sample_order: dict = field(default_factory=dict)  # sample_id -> (file_idx, row)
    results: list = field(default_factory=list)  # (rec, file_name, extra_cols)
    extra_columns: set = field(default_factory=set)
    sources: list = field(default_factory=list)
    duplicate_rows: list = field(default_factory=list)
    malformed_rows: list = field(default_factory=list)
    conflicts: list = field(default_factory=list)
    rows_read: int = 0
    rows_malformed: int = 0
    duplicates_removed: int = 0


def run_ingest(
    config: RunConfig,
    entries: "list[FileManifestEntry] | None" = None,
) -> PipelineResult:
    """Ingest a file set into a store.

    ``entries`` defaults to the discovered manifest; passing a permuted
    list is allowed and does not change any output byte.
    """
    if config.store_root is None:
        raise IngestError("store_root is required")
    skipped: list[tuple[Path, str]] = []
    if entries is None:
        if config.input_root is None:
            raise IngestError("input_root is required")
        entries, skipped = discover_files(config.input_root)
    # Sorted manifest order is the canonical processing order.
    entries = sorted(entries, key=lambda e: e.path.as_posix())

    jobs = max(1, config.jobs)
    if jobs > 1 and len(entries) > 1:
        args = [
            (
                entry,
                config.synonyms_path,
                config.schema_path,
                config.param_catalogue,
                config.product_catalogue,
            )
            for entry in entries
        ]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            ingested = list(pool.map(_ingest_worker, args))
    else:
        synonyms = load_synonyms(config.synonyms_path)
        schema = load_core_schema(config.schema_path)
        param_cat, product_cat = _load_catalogues(config)
        ingested = [
            ingest_file(
                entry,
                synonyms=synonyms,
                schema=schema,
                param_catalogue=param_cat,
                product_catalogue=product_cat,
            )
            for entry in entries
        ]

    stats = IngestStats()
    partitions: dict[tuple, _PartitionAccumulator] = {}
    seen_results: set[str] = set()
    seen_samples: set[str] = set()

    for file_idx, item in enumerate(ingested):
        fstats = item.stats
        part = partitions.setdefault(item.partition_key, _PartitionAccumulator())
        part.sources.append(item.entry.name)
        part.rows_read += fstats.rows_read
        part.rows_malformed += fstats.rows_malformed
        part.duplicates_removed += fstats.duplicates_removed
        part.extra_columns.update(item.extra_columns)
        part.duplicate_rows.extend(
            (item.entry.name, row, rid) for row, rid in item.duplicate_rows
        )
        part.malformed_rows.extend(
            (item.entry.name, row, reason) for row, reason in item.malformed_rows
        )
        part.conflicts.extend(item.conflicts)

        new_samples = 0
        for sample_id, record in item.samples.items():
            order = (file_idx, record.src_row)
            if sample_id not in part.samples:
                part.samples[sample_id] = record
                part.sample_order[sample_id] = order
            elif part.samples[sample_id].watched != record.watched:
                fstats.conflicting_sample_cells += 1
                if len(part.conflicts) < 10 * store_mod.MISMATCH_CAP:
                    part.conflicts.append(
                        (
                            sample_id,
                            record.src_file,
                            record.src_row,
                            part.samples[sample_id].watched,
                            record.watched,
                        )
                    )
            if sample_id not in seen_samples:
                seen_samples.add(sample_id)
                new_samples += 1
        fstats.samples_emitted = new_samples

        kept = 0
        for rec in item.results:
            rid = rec[0]
            if rid in seen_results:
                # Cross-file duplicate: first occurrence (sorted order) won.
                fstats.duplicates_removed += 1
                part.duplicates_removed += 1
                part.duplicate_rows.append((item.entry.name, rec[4], rid))
                continue
            seen_results.add(rid)
            kept += 1
            part.results.append((rec, item.entry.name, item.extra_columns))
        fstats.results_emitted = kept
        stats.add(fstats)

    written = []
    schema = load_core_schema(config.schema_path)
    for key in sorted(partitions):
        part = partitions[key]
        rest_cols = tuple(sorted(part.extra_columns))
        positions = {name: i for i, name in enumerate(rest_cols)}
        aligned_results = []
        for rec, file_name, extra_cols in part.results:
            extras = [None] * len(rest_cols)
            for name, value in zip(extra_cols, rec[3]):
                extras[positions[name]] = value
            aligned_results.append((rec[0], rec[1], rec[2], tuple(extras), file_name, rec[4]))
        counts = {
            "samples": len(part.samples),
            "results": len(aligned_results),
            "rows_read": part.rows_read,
            "rows_malformed": part.rows_malformed,
            "duplicates_removed": part.duplicates_removed,
        }
        written.append(
            write_partition(
                config.store_root,
                key,
                part.samples,
                aligned_results,
                rest_cols,
                counts,
                part.sources,
                part.duplicate_rows,
                part.malformed_rows,
                part.conflicts,
                schema=schema,
                overwrite=config.overwrite,
            )
        )

    store = Store(config.store_root)
    stats_payload = stats.to_json_dict()
    stats_payload["skipped"] = sorted(
        [{"path": p.name, "reason": reason} for p, reason in skipped],
        key=lambda item: item["path"],
    )
    stats_payload["config"] = config.echo()
    (Path(config.store_root) / "_ingest_stats.json").write_text(
        json.dumps(stats_payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return PipelineResult(store=store, stats=stats, skipped=skipped, partitions=written)


def run_validate(config: RunConfig) -> list[ValidationReport]:
    """Round-trip validate every partition against its source files."""
    if config.store_root is None or config.input_root is None:
        raise ChefsError("store_root and input_root are required")
    entries, _ = discover_files(config.input_root)
    by_key: dict[tuple, list[FileManifestEntry]] = {}
    for entry in entries:
        by_key.setdefault(entry.partition_key, []).append(entry)
    synonyms = load_synonyms(config.synonyms_path)
    schema = load_core_schema(config.schema_path)
    store = Store(config.store_root)
    reports = []
    for partition in store.list_partitions():
        sources = by_key.get(partition.key, [])
        report = round_trip_validate(store, partition, sources, synonyms, schema)
        available = {entry.name for entry in sources}
        report.sources_missing = sorted(set(partition.sources) - available)
        reports.append(report)
    return reports
