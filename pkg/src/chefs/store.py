"""Partitioned on-disk store with a core/rest variable split.

Layout: ``store/<hazard>/<country>/<year>/`` holding core and rest CSV
tables for samples and results, diagnostics sidecars, and a JSON manifest
with row counts and checksums. Core tables carry the essential variables;
everything else lives in rest tables keyed by the same ids, so joining
core and rest on id is loss-free.

Partitions are written atomically (temp dir + rename) and are immutable
once their manifest exists; readers ignore directories without one.
Canonical ordering (rows sorted by id, fixed column order, fixed CSV
dialect) makes exports byte-stable, which round-trip validation and the
determinism guarantees rely on.
"""

from __future__ import annotations

import csv
import hashlib
import json
import os
import shutil
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Iterator, Mapping

from . import ingest as ingest_mod
from .ingest import (
    RESULT_CORE_ORDER,
    SAMPLE_CORE_ORDER,
    FileManifestEntry,
    SampleRecord,
    SynonymTable,
)
from .kernels import canon_text, normalize_row
from .model import ChefsError, ComplianceClass, classify_evaluation, effective_year
from .schema import CoreSchema, default_schema


class StoreError(ChefsError):
    pass


PartitionKey = tuple[str, str, int]

MANIFEST_NAME = "manifest.json"
CORE_SAMPLES = "core_samples.csv"
REST_SAMPLES = "rest_samples.csv"
CORE_RESULTS = "core_results.csv"
REST_RESULTS = "rest_results.csv"
DUPLICATES = "duplicates.csv"
MALFORMED = "malformed.csv"
CONFLICTS = "conflicts.csv"

PARTITION_FILES = (
    CORE_SAMPLES,
    REST_SAMPLES,
    CORE_RESULTS,
    REST_RESULTS,
    DUPLICATES,
    MALFORMED,
    CONFLICTS,
)

CORE_SAMPLE_HEADER = ("sample_id", *SAMPLE_CORE_ORDER)
CORE_RESULT_HEADER = ("result_id", "sample_id", *RESULT_CORE_ORDER, "hazard")

#: Source provenance columns appended to rest_results; they align each
#: stored result with its original file row for round-trip comparison.
SRC_FILE_COL = "_src_file"
SRC_ROW_COL = "_src_row"

_CSV_KWARGS = dict(lineterminator="\n", quoting=csv.QUOTE_MINIMAL)


def _write_csv(path: Path, header: Iterable[str], rows: Iterable[Iterable]) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, **_CSV_KWARGS)
        writer.writerow(list(header))
        for row in rows:
            writer.writerow(["" if cell is None else cell for cell in row])


def _file_sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with path.open("rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


@dataclass(frozen=True)
class Partition:
    """A finalized partition: key, location, counts and file checksums."""

    key: PartitionKey
    path: Path
    counts: Mapping[str, int]
    checksums: Mapping[str, str]
    sources: tuple[str, ...]
    schema_version: str

    @property
    def hazard(self) -> str:
        return self.key[0]


def partition_dir(root: Path, key: PartitionKey) -> Path:
    hazard, country, year = key
    return root / hazard / country / str(year)


def write_partition(
    root: "Path | str",
    key: PartitionKey,
    samples: Mapping[str, SampleRecord],
    results: list[tuple],
    extra_columns: tuple[str, ...],
    counts: Mapping[str, int],
    sources: Iterable[str],
    duplicate_rows: list[tuple[str, int, str]],
    malformed_rows: list[tuple[str, int, str]],
    conflicts: list[tuple],
    schema: "CoreSchema | None" = None,
    overwrite: bool = False,
) -> Partition:
    """Atomically persist one partition.

    ``results`` rows are (result_id, sample_id, core_cells, extra_cells,
    src_file, src_row) with extra_cells aligned to ``extra_columns``.
    Referential integrity (every result's sample present) must hold.
    """
    schema = schema or default_schema()
    root = Path(root)
    hazard = key[0]
    final_dir = partition_dir(root, key)
    if final_dir.exists():
        if not overwrite:
            raise StoreError(f"partition already exists: {final_dir}")
        shutil.rmtree(final_dir)
    final_dir.parent.mkdir(parents=True, exist_ok=True)
    tmp_dir = final_dir.parent / f".tmp-{key[2]}-{uuid.uuid4().hex[:8]}"
    tmp_dir.mkdir()

    try:
        for rec in results:
            if rec[1] not in samples:
                raise StoreError(f"result {rec[0]} references missing sample {rec[1]}")

        sample_rows = sorted(samples.values(), key=lambda r: r.sample_id)
        _write_csv(
            tmp_dir / CORE_SAMPLES,
            CORE_SAMPLE_HEADER,
            ((r.sample_id, *r.core) for r in sample_rows),
        )
        rest_sample_cols = schema.sample_rest
        _write_csv(
            tmp_dir / REST_SAMPLES,
            ("sample_id", *rest_sample_cols),
            ((r.sample_id, *(r.samp_code if col == "samp_code" else None for col in rest_sample_cols)) for r in sample_rows),
        )

        result_rows = sorted(results, key=lambda rec: rec[0])
        _write_csv(
            tmp_dir / CORE_RESULTS,
            CORE_RESULT_HEADER,
            ((rec[0], rec[1], *rec[2], hazard) for rec in result_rows),
        )
        rest_cols = tuple(sorted(extra_columns))
        _write_csv(
            tmp_dir / REST_RESULTS,
            ("result_id", *rest_cols, SRC_FILE_COL, SRC_ROW_COL),
            ((rec[0], *rec[3], rec[4], rec[5]) for rec in result_rows),
        )

        _write_csv(
            tmp_dir / DUPLICATES,
            ("src_file", "src_row", "result_id"),
            sorted(duplicate_rows),
        )
        _write_csv(
            tmp_dir / MALFORMED,
            ("src_file", "src_row", "reason"),
            sorted(malformed_rows),
        )
        _write_csv(
            tmp_dir / CONFLICTS,
            ("sample_id", "src_file", "src_row", "detail"),
            sorted((c[0], c[1], c[2], json.dumps({"kept": c[3], "seen": c[4]}, sort_keys=True)) for c in conflicts),
        )

        checksums = {name: _file_sha256(tmp_dir / name) for name in PARTITION_FILES}
        manifest = {
            "schema_version": schema.version,
            "checksum_algorithm": schema.file_checksum,
            "key": {"hazard": key[0], "country": key[1], "year": key[2]},
            "counts": dict(sorted(counts.items())),
            "sources": sorted(sources),
            "rest_result_columns": list(rest_cols),
            "checksums": checksums,
        }
        (tmp_dir / MANIFEST_NAME).write_text(
            json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
        os.replace(tmp_dir, final_dir)
    except Exception:
        shutil.rmtree(tmp_dir, ignore_errors=True)
        raise

    return Partition(
        key=key,
        path=final_dir,
        counts=dict(counts),
        checksums=checksums,
        sources=tuple(sorted(sources)),
        schema_version=schema.version,
    )


class Store:
    """Read-side handle over a store root. Partitions without a manifest
    (aborted writes) are invisible to all readers."""

    def __init__(self, root: "Path | str"):
        self.root = Path(root)

    def list_partitions(self) -> list[Partition]:
        partitions = []
        if not self.root.is_dir():
            return partitions
        for manifest_path in sorted(self.root.glob("*/*/*/" + MANIFEST_NAME)):
            payload = json.loads(manifest_path.read_text("utf-8"))
            key = (
                payload["key"]["hazard"],
                payload["key"]["country"],
                int(payload["key"]["year"]),
            )
            partitions.append(
                Partition(
                    key=key,
                    path=manifest_path.parent,
                    counts=payload["counts"],
                    checksums=payload["checksums"],
                    sources=tuple(payload["sources"]),
                    schema_version=str(payload["schema_version"]),
                )
            )
        partitions.sort(key=lambda p: p.key)
        return partitions

    def checksum(self) -> str:
        """Single hex digest over all partition checksums, byte-stable."""
        digest = hashlib.sha256()
        for partition in self.list_partitions():
            digest.update(repr(partition.key).encode())
            for name in sorted(partition.checksums):
                digest.update(name.encode())
                digest.update(partition.checksums[name].encode())
        return digest.hexdigest()

    def read_csv(self, partition: Partition, name: str) -> tuple[list[str], list[list[str]]]:
        path = partition.path / name
        with path.open(newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader, [])
            return header, [row for row in reader]

    def iter_core(
        self, partition: Partition
    ) -> Iterator[tuple[list[str], dict[str, list[str]]]]:
        """Yield (core result row, samples-by-id map) for one partition."""
        _, sample_rows = self.read_csv(partition, CORE_SAMPLES)
        samples = {row[0]: row for row in sample_rows}
        _, result_rows = self.read_csv(partition, CORE_RESULTS)
        for row in result_rows:
            yield row, samples


SELECTIONS = ("results_with_sample_context", "noncompliant_results", "per_year_hazard_counts")

#: Joined row column order for the row-level selections.
SELECTION_HEADER = (
    "result_id",
    "sample_id",
    *RESULT_CORE_ORDER,
    "hazard",
    *SAMPLE_CORE_ORDER,
)

_R_EVAL = CORE_RESULT_HEADER.index("eval_code")
_S_YEAR = CORE_SAMPLE_HEADER.index("sampling_year")
_S_DATE = CORE_SAMPLE_HEADER.index("sampling_date")
_S_COUNTRY = CORE_SAMPLE_HEADER.index("sampling_country")


def _row_passes(result_row: list[str], sample_row: list[str], filters: Mapping) -> bool:
    for name, wanted in filters.items():
        if name == "year":
            year = effective_year(sample_row[_S_YEAR] or None, sample_row[_S_DATE] or None)
            if year != int(wanted):
                return False
        elif name == "hazard":
            if result_row[-1] != str(wanted):
                return False
        elif name == "sampling_country":
            if sample_row[_S_COUNTRY] != wanted:
                return False
        elif name == "eval_class":
            cls = classify_evaluation(result_row[_R_EVAL] or None)
            if cls.value != str(wanted):
                return False
        else:
            raise StoreError(f"unknown filter {name!r}")
    return True


def read_selection(
    store: Store,
    name: str,
    filters: "Mapping | None" = None,
) -> Iterator[tuple]:
    """Stream a predefined selection in deterministic order
    (partition key, then result id)."""
    filters = dict(filters or {})
    if name not in SELECTIONS:
        raise StoreError(
            f"unknown selection {name!r}; available: {', '.join(SELECTIONS)}"
        )
    if name == "noncompliant_results":
        filters["eval_class"] = ComplianceClass.NON_COMPLIANT.value
        name = "results_with_sample_context"

    if name == "results_with_sample_context":
        for partition in store.list_partitions():
            for result_row, samples in store.iter_core(partition):
                sample_row = samples[result_row[1]]
                if filters and not _row_passes(result_row, sample_row, filters):
                    continue
                yield (*result_row, *sample_row[1:])
        return

    # per_year_hazard_counts
    counts: dict[tuple[int, str], list[int]] = {}
    for partition in store.list_partitions():
        for result_row, samples in store.iter_core(partition):
            sample_row = samples[result_row[1]]
            if filters and not _row_passes(result_row, sample_row, filters):
                continue
            year = effective_year(sample_row[_S_YEAR] or None, sample_row[_S_DATE] or None)
            if year is None:
                continue
            cell = counts.setdefault((year, result_row[-1]), [0, 0])
            cell[0] += 1
            if classify_evaluation(result_row[_R_EVAL] or None) is ComplianceClass.NON_COMPLIANT:
                cell[1] += 1
    for (year, hazard) in sorted(counts):
        total, noncompliant = counts[(year, hazard)]
        yield (year, hazard, total, noncompliant)


@dataclass(frozen=True, slots=True)
class CellMismatch:
    src_file: str
    src_row: int
    column: str
    source_value: "str | None"
    store_value: "str | None"


@dataclass
class ValidationReport:
    """Round-trip comparison outcome for one partition.

    Mismatches are report content, not failures; the list is capped but
    ``total_mismatches`` counts everything.
    """

    key: PartitionKey
    rows_compared: int = 0
    total_mismatches: int = 0
    mismatches: list[CellMismatch] = field(default_factory=list)
    missing_rows: int = 0
    unexpected_rows: int = 0
    removed_duplicates: int = 0
    removed_duplicate_ids: list[str] = field(default_factory=list)
    malformed_skipped: int = 0
    sources_missing: list[str] = field(default_factory=list)

    @property
    def clean(self) -> bool:
        return (
            self.total_mismatches == 0
            and self.missing_rows == 0
            and self.unexpected_rows == 0
            and not self.sources_missing
        )

    def to_json_dict(self) -> dict:
        return {
            "key": {"hazard": self.key[0], "country": self.key[1], "year": self.key[2]},
            "rows_compared": self.rows_compared,
            "total_mismatches": self.total_mismatches,
            "missing_rows": self.missing_rows,
            "unexpected_rows": self.unexpected_rows,
            "removed_duplicates": self.removed_duplicates,
            "malformed_skipped": self.malformed_skipped,
            "sources_missing": self.sources_missing,
            "clean": self.clean,
            "mismatches": [
                {
                    "src_file": m.src_file,
                    "src_row": m.src_row,
                    "column": m.column,
                    "source_value": m.source_value,
                    "store_value": m.store_value,
                }
                for m in self.mismatches
            ],
        }


#: Columns whose value domain is canonicalized text; the source side is
#: canonicalized the same way before comparison.
_CANONICALIZED_COLUMNS = frozenset({"eval_code", "strategy"})

MISMATCH_CAP = 100


def round_trip_validate(
    store: Store,
    partition: Partition,
    sources: list[FileManifestEntry],
    synonyms: "SynonymTable | None" = None,
    schema: "CoreSchema | None" = None,
    cap: int = MISMATCH_CAP,
) -> ValidationReport:
    """Reconstruct the long format from core+rest and compare it cell by
    cell against the canonicalized sources.

    Comparison covers exactly the columns present in each source file
    (canonical names for mapped columns, source names for the rest);
    removed duplicates and malformed rows are accounted via the
    partition's diagnostics sidecars.
    """
    schema = schema or default_schema()
    synonyms = synonyms or ingest_mod.load_synonyms()
    report = ValidationReport(key=partition.key)

    _, sample_core_rows = store.read_csv(partition, CORE_SAMPLES)
    sample_cells: dict[str, dict[str, str]] = {}
    for row in sample_core_rows:
        sample_cells[row[0]] = {
            name: row[i + 1] for i, name in enumerate(SAMPLE_CORE_ORDER) if row[i + 1]
        }
    rest_header, rest_sample_rows = store.read_csv(partition, REST_SAMPLES)
    for row in rest_sample_rows:
        cells = sample_cells.setdefault(row[0], {})
        for i, name in enumerate(rest_header[1:], start=1):
            if row[i]:
                cells[name] = row[i]

    _, core_result_rows = store.read_csv(partition, CORE_RESULTS)
    rest_res_header, rest_result_rows = store.read_csv(partition, REST_RESULTS)
    by_src: dict[tuple[str, int], dict[str, str]] = {}
    extra_names = rest_res_header[1:-2]
    for core_row, rest_row in zip(core_result_rows, rest_result_rows):
        if core_row[0] != rest_row[0]:
            raise StoreError(f"core/rest id misalignment in {partition.path}")
        cells = {
            name: core_row[i + 2]
            for i, name in enumerate(RESULT_CORE_ORDER)
            if core_row[i + 2]
        }
        for i, name in enumerate(extra_names, start=1):
            if rest_row[i]:
                cells[name] = rest_row[i]
        cells.update(sample_cells.get(core_row[1], {}))
        by_src[(rest_row[-2], int(rest_row[-1]))] = cells

    _, dup_rows = store.read_csv(partition, DUPLICATES)
    duplicates = {(row[0], int(row[1])): row[2] for row in dup_rows}
    _, mal_rows = store.read_csv(partition, MALFORMED)
    malformed = {(row[0], int(row[1])) for row in mal_rows}

    visited: set[tuple[str, int]] = set()
    for entry in sorted(sources, key=lambda e: e.name):
        with ingest_mod.open_source(entry.path) as fh:
            reader = csv.reader(fh)
            file_header = next(reader, None)
            if file_header is None:
                continue
            mapping = ingest_mod.resolve_columns(file_header, synonyms, entry.era, schema)
            columns: list[tuple[str, int]] = list(mapping.resolved.items())
            columns += [(name, i) for name, i in mapping.unmapped_sources]
            row_no = 0
            for row in reader:
                row_no += 1
                src_key = (entry.name, row_no)
                if len(row) != mapping.ncols:
                    if src_key not in malformed:
                        report.missing_rows += 1
                    else:
                        report.malformed_skipped += 1
                    continue
                normalize_row_cells(row)
                stored = by_src.get(src_key)
                if stored is None:
                    if src_key in duplicates:
                        report.removed_duplicates += 1
                        if len(report.removed_duplicate_ids) < cap:
                            report.removed_duplicate_ids.append(duplicates[src_key])
                    elif src_key in malformed:
                        report.malformed_skipped += 1
                    else:
                        report.missing_rows += 1
                    continue
                visited.add(src_key)
                report.rows_compared += 1
                for column, idx in columns:
                    value = row[idx]
                    if value is not None and column in _CANONICALIZED_COLUMNS:
                        value = canon_text(value)
                    stored_value = stored.get(column)
                    if value != stored_value:
                        report.total_mismatches += 1
                        if len(report.mismatches) < cap:
                            report.mismatches.append(
                                CellMismatch(entry.name, row_no, column, value, stored_value)
                            )

    source_names = {entry.name for entry in sources}
    for src_key in by_src:
        if src_key[0] in source_names and src_key not in visited:
            report.unexpected_rows += 1
    return report


def normalize_row_cells(row: list) -> None:
    """Missing-token normalization without presence counting."""
    normalize_row(row, [0] * len(row))
