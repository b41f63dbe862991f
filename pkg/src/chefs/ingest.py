"""Streaming ingest: discovery, schema harmonization, sample/result split.

Raw monitoring files are long-format CSVs, one analytical result per row,
with sample fields repeated across adjacent rows and column names that
vary between files and eras. Ingest resolves each header to canonical
variable names via a synonym table, normalizes missing-value tokens,
recovers the 1:n sample/result relation, assigns content-derived ids,
and deduplicates results, all in a single streaming pass per file.

Sample identity: a row with a sample code is keyed by that code; a
codeless row joins the current ordinal run, which advances whenever any
sample-level cell changes between consecutive valid rows (malformed rows
are skipped before identity processing). Ids are content hashes, so
re-ingesting the same data reproduces the same ids regardless of file
order or parallelism.
"""

from __future__ import annotations

import csv
import gzip
import hashlib
import io
import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Mapping

from .catalog import Catalogue
from .kernels import canon_text, make_key, normalize_row
from .model import (
    MAX_YEAR,
    MIN_YEAR,
    ChefsError,
    ComplianceClass,
    HazardCategory,
    SamplingStrategy,
    classify_evaluation,
)
from .schema import CoreSchema, default_schema


class IngestError(ChefsError):
    pass


class MalformedFileError(IngestError):
    """The file cannot be ingested at all (empty or unusable header)."""


class SchemaConflictError(IngestError):
    """Two source columns resolve to the same canonical variable."""


#: Era cutoff when no sidecar says otherwise: reporting year < 2016 -> SSD1.
SSD2_FIRST_YEAR = 2016

#: Conflict diagnostics are capped; duplicate/malformed row lists are kept
#: complete because round-trip validation consumes them.
CONFLICT_CAP = 1000

_FILENAME_RE = re.compile(r"^(CC|PEST|VMPR)_([A-Z]{2,3})_(\d{4})$")

#: Canonical sample-level cells watched for sample-boundary detection and
#: conflict checks, in store column order (after samp_code).
SAMPLE_CORE_ORDER = (
    "product_id",
    "product_full_name",
    "origin_country",
    "sampling_country",
    "sampling_year",
    "sampling_date",
    "strategy",
)

RESULT_CORE_ORDER = (
    "contaminant_id",
    "contaminant_full_name",
    "result_value",
    "loq",
    "eval_code",
    "analysis_date",
)


def era_for_year(year: int) -> str:
    return "SSD1" if year < SSD2_FIRST_YEAR else "SSD2"


@dataclass(frozen=True, slots=True)
class FileManifestEntry:
    """One discovered input file with its (hazard, country, year) identity."""

    path: Path
    hazard: HazardCategory
    country: str
    year: int
    era: str
    size_bytes: int

    @property
    def partition_key(self) -> tuple[str, str, int]:
        return (self.hazard.value, self.country, self.year)

    @property
    def name(self) -> str:
        return self.path.name


def _entry_from_sidecar(path: Path, meta: dict) -> FileManifestEntry:
    hazard = HazardCategory.from_code(str(meta["hazard"]))
    country = str(meta["country"]).upper()
    year = int(meta["year"])
    era = str(meta.get("era") or era_for_year(year))
    return FileManifestEntry(path, hazard, country, year, era, path.stat().st_size)


def discover_files(root: "Path | str") -> tuple[list[FileManifestEntry], list[tuple[Path, str]]]:
    """Build a deterministic (lexicographically sorted) file manifest.

    Files named ``<HAZARD>_<COUNTRY>_<YEAR>.csv[.gz]`` parse directly; a
    ``<file>.meta.json`` sidecar overrides or supplies the metadata.
    Anything else is skipped with a reason.
    """
    root = Path(root)
    if not root.is_dir():
        raise IngestError(f"input root is not a readable directory: {root}")
    entries: list[FileManifestEntry] = []
    skipped: list[tuple[Path, str]] = []
    for path in sorted(root.rglob("*"), key=lambda p: p.as_posix()):
        if not path.is_file() or path.name.endswith(".meta.json"):
            continue
        name = path.name
        if name.endswith(".csv.gz"):
            stem = name[: -len(".csv.gz")]
        elif name.endswith(".csv"):
            stem = name[: -len(".csv")]
        else:
            skipped.append((path, "not a .csv or .csv.gz file"))
            continue
        sidecar = path.with_name(name + ".meta.json")
        if sidecar.exists():
            try:
                meta = json.loads(sidecar.read_text("utf-8"))
                entries.append(_entry_from_sidecar(path, meta))
                continue
            except (KeyError, ValueError) as exc:
                skipped.append((path, f"bad sidecar: {exc}"))
                continue
        match = _FILENAME_RE.match(stem)
        if match is None:
            skipped.append((path, "filename does not follow HAZARD_COUNTRY_YEAR and no sidecar"))
            continue
        hazard = HazardCategory.from_code(match.group(1))
        year = int(match.group(3))
        entries.append(
            FileManifestEntry(
                path, hazard, match.group(2), year, era_for_year(year), path.stat().st_size
            )
        )
    return entries, skipped


class SynonymTable:
    """Source-column to canonical-variable mapping, optionally era-bound."""

    def __init__(self, rows: Iterable[tuple[str, str, "str | None"]]):
        self._by_source: dict[str, list[tuple["str | None", str]]] = {}
        for source, canonical, era in rows:
            self._by_source.setdefault(source.lower(), []).append((era, canonical))

    def lookup(self, source_lower: str, era: "str | None") -> "str | None":
        for row_era, canonical in self._by_source.get(source_lower, ()):
            if row_era is None or row_era == era:
                return canonical
        return None


def load_synonyms(path: "Path | str | None" = None) -> SynonymTable:
    """Load a synonym CSV (header: source_name,canonical_name,era); None
    loads the packaged default."""
    if path is None:
        from importlib import resources

        text = resources.files("chefs.data").joinpath("column_synonyms.csv").read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    reader = csv.DictReader(io.StringIO(text))
    rows = []
    for row in reader:
        if not row.get("source_name"):
            continue
        era = (row.get("era") or "").strip() or None
        rows.append((row["source_name"].strip(), row["canonical_name"].strip(), era))
    return SynonymTable(rows)


@dataclass(frozen=True)
class ColumnMapping:
    """Resolution of one file's header to canonical variables."""

    resolved: Mapping[str, int]
    unmapped_sources: tuple[tuple[str, int], ...]
    missing_canonicals: tuple[str, ...]
    ncols: int
    era: str

    def variable_names(self) -> list[str]:
        """Column-index-aligned stat keys: canonical names where mapped,
        source names otherwise."""
        names = [""] * self.ncols
        for canonical, idx in self.resolved.items():
            names[idx] = canonical
        for source, idx in self.unmapped_sources:
            names[idx] = source
        return names


def resolve_columns(
    header: list[str],
    synonyms: SynonymTable,
    era: str,
    schema: "CoreSchema | None" = None,
) -> ColumnMapping:
    """Resolve a header via exact canonical-name match, then synonyms.

    Unresolved source columns are preserved (routed to the rest store),
    never dropped. Two sources resolving to one canonical variable is a
    SchemaConflictError.
    """
    schema = schema or default_schema()
    if not header or all(not (h or "").strip() for h in header):
        raise MalformedFileError("empty header")
    canonical_names = schema.canonical_names
    resolved: dict[str, int] = {}
    sources: dict[str, str] = {}
    unmapped: list[tuple[str, int]] = []
    for idx, raw in enumerate(header):
        name = (raw or "").strip()
        if idx == 0:
            name = name.lstrip("﻿")
        if not name:
            unmapped.append((f"column_{idx}", idx))
            continue
        lower = name.lower()
        canonical = lower if lower in canonical_names else synonyms.lookup(lower, era)
        if canonical is None:
            unmapped.append((name, idx))
            continue
        if canonical in resolved:
            raise SchemaConflictError(
                f"columns {sources[canonical]!r} and {name!r} both map to {canonical!r}"
            )
        resolved[canonical] = idx
        sources[canonical] = name
    return ColumnMapping(
        resolved=resolved,
        unmapped_sources=tuple(unmapped),
        missing_canonicals=tuple(sorted(canonical_names - resolved.keys())),
        ncols=len(header),
        era=era,
    )


def make_ids(
    cells: Mapping[str, "str | None"],
    reporting_year: int,
    ordinal: int = 0,
) -> tuple[str, str]:
    """Content-derived (sample_id, result_id) for one harmonized row.

    The sample id hashes the reported sample code when present, else the
    (country, reporting year, product, date, strategy, ordinal) tuple;
    the result id hashes the sample id plus the result-level fields.
    Absent fields hash as a fixed marker, so ids are total and stable.
    """
    code = cells.get("samp_code")
    if code is not None:
        sample_id = make_key(("code", code))
    else:
        sample_id = make_key(
            (
                "key",
                cells.get("sampling_country"),
                str(reporting_year),
                cells.get("product_id"),
                cells.get("sampling_date"),
                cells.get("strategy"),
                str(ordinal),
            )
        )
    result_id = make_key(
        (
            sample_id,
            cells.get("contaminant_id"),
            cells.get("analysis_date"),
            cells.get("result_value"),
            cells.get("loq"),
            cells.get("eval_code"),
        )
    )
    return sample_id, result_id


def dedup(records: Iterable, key=None) -> tuple[list, int]:
    """Drop records whose key was already seen; first occurrence wins.

    Returns (kept records, removed count)."""
    if key is None:
        key = lambda rec: rec[0]
    seen: set = set()
    kept: list = []
    removed = 0
    for rec in records:
        k = key(rec)
        if k in seen:
            removed += 1
        else:
            seen.add(k)
            kept.append(rec)
    return kept, removed


@dataclass
class FileStats:
    """Per-file ingest counters; conservation holds per file:
    results_emitted + duplicates_removed + rows_malformed == rows_read."""

    path: str
    rows_read: int = 0
    rows_malformed: int = 0
    duplicates_removed: int = 0
    samples_emitted: int = 0
    results_emitted: int = 0
    unknown_eval_codes: int = 0
    unknown_eval_texts: list[str] = field(default_factory=list)
    unrecognized_strategies: int = 0
    unparsable_values: int = 0
    malformed_years: int = 0
    conflicting_sample_cells: int = 0
    enrichment_misses: int = 0
    missing_rate_per_variable: dict[str, float] = field(default_factory=dict)
    present_counts: dict[str, int] = field(default_factory=dict)
    sha256: str = ""

    def to_json_dict(self) -> dict:
        return {
            "path": self.path,
            "rows_read": self.rows_read,
            "rows_malformed": self.rows_malformed,
            "duplicates_removed": self.duplicates_removed,
            "samples_emitted": self.samples_emitted,
            "results_emitted": self.results_emitted,
            "unknown_eval_codes": self.unknown_eval_codes,
            "unknown_eval_texts": sorted(self.unknown_eval_texts),
            "unrecognized_strategies": self.unrecognized_strategies,
            "unparsable_values": self.unparsable_values,
            "malformed_years": self.malformed_years,
            "conflicting_sample_cells": self.conflicting_sample_cells,
            "enrichment_misses": self.enrichment_misses,
            "missing_rate_per_variable": {
                k: self.missing_rate_per_variable[k]
                for k in sorted(self.missing_rate_per_variable)
            },
            "sha256": self.sha256,
        }


@dataclass
class IngestStats:
    """Aggregated ingest counters across files."""

    files: list[FileStats] = field(default_factory=list)

    def add(self, stats: FileStats) -> None:
        self.files.append(stats)

    @property
    def rows_read(self) -> int:
        return sum(f.rows_read for f in self.files)

    @property
    def rows_malformed(self) -> int:
        return sum(f.rows_malformed for f in self.files)

    @property
    def duplicates_removed(self) -> int:
        return sum(f.duplicates_removed for f in self.files)

    @property
    def samples_emitted(self) -> int:
        return sum(f.samples_emitted for f in self.files)

    @property
    def results_emitted(self) -> int:
        return sum(f.results_emitted for f in self.files)

    @property
    def unknown_eval_codes(self) -> int:
        return sum(f.unknown_eval_codes for f in self.files)

    def missing_rate_per_variable(self) -> dict[str, float]:
        present: dict[str, int] = {}
        rows: dict[str, int] = {}
        for f in self.files:
            for var, count in f.present_counts.items():
                present[var] = present.get(var, 0) + count
                rows[var] = rows.get(var, 0) + f.rows_read
        return {
            var: 1.0 - (present[var] / rows[var]) if rows[var] else 0.0
            for var in sorted(present)
        }

    def to_json_dict(self) -> dict:
        return {
            "totals": {
                "rows_read": self.rows_read,
                "rows_malformed": self.rows_malformed,
                "duplicates_removed": self.duplicates_removed,
                "samples_emitted": self.samples_emitted,
                "results_emitted": self.results_emitted,
                "unknown_eval_codes": self.unknown_eval_codes,
                "missing_rate_per_variable": self.missing_rate_per_variable(),
            },
            "files": [f.to_json_dict() for f in sorted(self.files, key=lambda f: f.path)],
        }


@dataclass
class SampleRecord:
    """Sample-level cells captured from the first row bearing the key."""

    sample_id: str
    core: tuple  # aligned to SAMPLE_CORE_ORDER
    samp_code: "str | None"
    src_file: str
    src_row: int

    @property
    def watched(self) -> tuple:
        return (self.samp_code, *self.core)


@dataclass
class IngestedFile:
    """Everything ingest extracted from one file, ready for partitioning.

    ``results`` rows are tuples of
    (result_id, sample_id, core_cells, extra_cells, src_row) with
    core_cells aligned to RESULT_CORE_ORDER and extra_cells aligned to
    ``extra_columns``.
    """

    entry: FileManifestEntry
    mapping: ColumnMapping
    samples: dict[str, SampleRecord]
    results: list[tuple]
    extra_columns: tuple[str, ...]
    stats: FileStats
    duplicate_rows: list[tuple[int, str]]
    malformed_rows: list[tuple[int, str]]
    conflicts: list[tuple]

    @property
    def partition_key(self) -> tuple[str, str, int]:
        return self.entry.partition_key

    def iter_pairs(self) -> Iterator[tuple[SampleRecord, tuple]]:
        """Yield (sample, result) pairs in source-row order."""
        for rec in self.results:
            yield self.samples[rec[1]], rec


#: Sentinel distinguishing "not cached yet" from a cached None lookup.
_MISS = object()


def open_source(path: Path):
    """Open a CSV source, transparently decompressing .gz files."""
    if path.name.endswith(".gz"):
        return io.TextIOWrapper(gzip.open(path, "rb"), encoding="utf-8-sig", newline="")
    return path.open(newline="", encoding="utf-8-sig")


def _checksum(path: Path) -> str:
    digest = hashlib.sha256()
    with path.open("rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def ingest_file(
    entry: FileManifestEntry,
    synonyms: "SynonymTable | None" = None,
    schema: "CoreSchema | None" = None,
    mapping: "ColumnMapping | None" = None,
    param_catalogue: "Catalogue | None" = None,
    product_catalogue: "Catalogue | None" = None,
) -> IngestedFile:
    """Stream one file into samples, results and per-file statistics.

    Rows are processed in constant memory; sample fields come from the
    first row bearing a given sample key, and later rows with conflicting
    sample-level values are flagged, not overwritten. Full-name columns
    absent from the file (not merely empty cells) are enriched from the
    provided catalogues.
    """
    schema = schema or default_schema()
    synonyms = synonyms or load_synonyms()
    stats = FileStats(path=entry.name, sha256=_checksum(entry.path))

    with open_source(entry.path) as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise MalformedFileError(f"{entry.name}: empty file")
        if mapping is None:
            mapping = resolve_columns(header, synonyms, entry.era, schema)
        ncols = mapping.ncols
        resolved = mapping.resolved
        for required in ("product_id", "contaminant_id"):
            if required not in resolved:
                raise MalformedFileError(f"{entry.name}: required column {required!r} unmappable")

        idx = {name: resolved.get(name) for name in (*SAMPLE_CORE_ORDER, *RESULT_CORE_ORDER, "samp_code")}
        i_code = idx["samp_code"]
        i_prod = idx["product_id"]
        i_prodname = idx["product_full_name"]
        i_orig = idx["origin_country"]
        i_country = idx["sampling_country"]
        i_year = idx["sampling_year"]
        i_date = idx["sampling_date"]
        i_strat = idx["strategy"]
        i_cont = idx["contaminant_id"]
        i_contname = idx["contaminant_full_name"]
        i_val = idx["result_value"]
        i_loq = idx["loq"]
        i_eval = idx["eval_code"]
        i_adate = idx["analysis_date"]

        country_default = entry.country if i_country is None else None
        enrich_contaminant = i_contname is None and param_catalogue is not None
        enrich_product = i_prodname is None and product_catalogue is not None

        present = [0] * ncols
        canon_cache: dict[str, str] = {}
        unknown_texts: set[str] = set()
        unrecognized_strats: set[str] = set()
        name_cache: dict[str, "str | None"] = {}

        samples: dict[str, SampleRecord] = {}
        by_code: dict[str, str] = {}
        results: list[tuple] = []
        seen_ids: set[str] = set()
        duplicate_rows: list[tuple[int, str]] = []
        malformed_rows: list[tuple[int, str]] = []
        conflicts: list[tuple] = []
        extra_cols = tuple(name for name, _ in mapping.unmapped_sources)
        extra_idx = tuple(i for _, i in mapping.unmapped_sources)

        ordinal = -1
        last_watched: "tuple | None" = None
        year_str = str(entry.year)
        row_no = 0

        for row in reader:
            row_no += 1
            stats.rows_read += 1
            if len(row) != ncols:
                stats.rows_malformed += 1
                malformed_rows.append((row_no, f"expected {ncols} cells, got {len(row)}"))
                continue
            normalize_row(row, present)

            product_id = row[i_prod]
            contaminant_id = row[i_cont]
            country = row[i_country] if i_country is not None else country_default
            if product_id is None or contaminant_id is None or country is None:
                stats.rows_malformed += 1
                missing = [
                    name
                    for name, value in (
                        ("product_id", product_id),
                        ("contaminant_id", contaminant_id),
                        ("sampling_country", country),
                    )
                    if value is None
                ]
                malformed_rows.append((row_no, "missing " + ", ".join(missing)))
                continue

            samp_code = row[i_code] if i_code is not None else None
            origin = row[i_orig] if i_orig is not None else None
            samp_year = row[i_year] if i_year is not None else None
            samp_date = row[i_date] if i_date is not None else None

            raw_strategy = row[i_strat] if i_strat is not None else None
            if raw_strategy is None:
                strategy = None
            else:
                strategy = canon_cache.get(raw_strategy)
                if strategy is None:
                    strategy = canon_text(raw_strategy)
                    canon_cache[raw_strategy] = strategy
                    if not SamplingStrategy.is_recognized(strategy):
                        unrecognized_strats.add(strategy)

            product_name = row[i_prodname] if i_prodname is not None else None
            if product_name is None and enrich_product:
                product_name = name_cache.get("p:" + product_id, _MISS)
                if product_name is _MISS:
                    term = product_catalogue.get(product_id, entry.era)
                    product_name = term.full_name if term else None
                    name_cache["p:" + product_id] = product_name
                    if term is None:
                        stats.enrichment_misses += 1

            core = (product_id, product_name, origin, country, samp_year, samp_date, strategy)
            watched = (samp_code, *core)

            if samp_code is not None:
                sample_id = by_code.get(samp_code)
                if sample_id is None:
                    sample_id = make_key(("code", samp_code))
                    by_code[samp_code] = sample_id
            else:
                if watched != last_watched:
                    ordinal += 1
                sample_id = make_key(
                    ("key", country, year_str, product_id, samp_date, strategy, str(ordinal))
                )
            last_watched = watched

            record = samples.get(sample_id)
            if record is None:
                samples[sample_id] = SampleRecord(sample_id, core, samp_code, entry.name, row_no)
            elif record.watched != watched:
                stats.conflicting_sample_cells += 1
                if len(conflicts) < CONFLICT_CAP:
                    conflicts.append((sample_id, entry.name, row_no, record.watched, watched))

            raw_eval = row[i_eval] if i_eval is not None else None
            if raw_eval is None:
                eval_code = None
            else:
                eval_code = canon_cache.get(raw_eval)
                if eval_code is None:
                    eval_code = canon_text(raw_eval)
                    canon_cache[raw_eval] = eval_code

            value = row[i_val] if i_val is not None else None
            loq = row[i_loq] if i_loq is not None else None
            analysis_date = row[i_adate] if i_adate is not None else None

            contaminant_name = row[i_contname] if i_contname is not None else None
            if contaminant_name is None and enrich_contaminant:
                contaminant_name = name_cache.get("c:" + contaminant_id, _MISS)
                if contaminant_name is _MISS:
                    term = param_catalogue.get(contaminant_id, entry.era)
                    contaminant_name = term.full_name if term else None
                    name_cache["c:" + contaminant_id] = contaminant_name
                    if term is None:
                        stats.enrichment_misses += 1

            result_id = make_key(
                (sample_id, contaminant_id, analysis_date, value, loq, eval_code)
            )
            if result_id in seen_ids:
                stats.duplicates_removed += 1
                duplicate_rows.append((row_no, result_id))
                continue
            seen_ids.add(result_id)

            # Diagnostics count kept results only, so duplicates never
            # inflate the vocabulary-gap and parse counters.
            if eval_code is not None and classify_evaluation(eval_code) is ComplianceClass.UNKNOWN:
                stats.unknown_eval_codes += 1
                unknown_texts.add(eval_code)
            if value is not None and _DECIMAL_RE.match(value) is None:
                stats.unparsable_values += 1
            if strategy is not None and strategy in unrecognized_strats:
                stats.unrecognized_strategies += 1
            if samp_year is not None:
                try:
                    parsed_year = int(samp_year)
                except ValueError:
                    parsed_year = None
                if parsed_year is None or not MIN_YEAR <= parsed_year <= MAX_YEAR:
                    stats.malformed_years += 1

            extras = tuple(row[i] for i in extra_idx) if extra_idx else ()
            results.append(
                (
                    result_id,
                    sample_id,
                    (contaminant_id, contaminant_name, value, loq, eval_code, analysis_date),
                    extras,
                    row_no,
                )
            )

    stats.results_emitted = len(results)
    stats.samples_emitted = len(samples)
    stats.unknown_eval_texts = sorted(unknown_texts)
    variable_names = mapping.variable_names()
    stats.present_counts = {
        variable_names[i]: present[i] for i in range(ncols) if variable_names[i]
    }
    if stats.rows_read:
        stats.missing_rate_per_variable = {
            name: 1.0 - count / stats.rows_read for name, count in stats.present_counts.items()
        }
    return IngestedFile(
        entry=entry,
        mapping=mapping,
        samples=samples,
        results=results,
        extra_columns=extra_cols,
        stats=stats,
        duplicate_rows=duplicate_rows,
        malformed_rows=malformed_rows,
        conflicts=conflicts,
    )


_DECIMAL_RE = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")
