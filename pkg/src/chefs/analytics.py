"""Read-side analytics over the store: trends, cross tables, groupings,
country statistics and trade-flow links.

A single scan over the partitions builds an AggregateMaps state (counts
only); every report is then a pure shaping function over that state, so
rankings, tie-breaks and fractions are computed in exactly one place.
Partitions can be scanned in parallel; merging is order-independent and
all report rows are explicitly sorted, so outputs are byte-stable for any
job count.

Fractions are kept at full precision in report rows ([0, 1] ratios);
rounding happens only at presentation (CLI summaries, plots).
"""

from __future__ import annotations

import csv
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping, Sequence

from .aggregates import AggregateMaps
from .catalog import (
    GroupingDictionary,
    MalformedPathError,
    load_grouping_dictionary,
    parse_param_path,
)
from .model import (
    ChefsError,
    ComplianceClass,
    HazardCategory,
    SamplingStrategy,
    classify_evaluation,
    effective_year,
)
from .store import Partition, Store

#: Ontology bucket for contaminants whose full name is absent or malformed.
UNPARSED_GROUP = "unparsed"

DEFAULT_YEAR_RANGE = (2000, 2024)


class AnalyticsError(ChefsError):
    pass


def _onto_groups(full_name: "str | None") -> tuple[str, str]:
    if not full_name:
        return (UNPARSED_GROUP, UNPARSED_GROUP)
    try:
        path = parse_param_path(full_name)
    except MalformedPathError:
        return (UNPARSED_GROUP, UNPARSED_GROUP)
    level2 = path.segments[1] if path.depth >= 2 else path.leaf
    return (path.segments[0], level2)


def _leaf(full_name: "str | None", fallback: str) -> str:
    if not full_name:
        return fallback
    try:
        return parse_param_path(full_name).leaf
    except MalformedPathError:
        return full_name


def scan_partition(
    partition: Partition, dictionary: "GroupingDictionary | None" = None
) -> tuple[AggregateMaps, dict[str, tuple]]:
    """Aggregate one partition into (counter maps, sample partials).

    Sample partials are keyed by sample id and merged across partitions by
    the caller, since a sample can appear in several partitions when files
    share reported sample codes.
    """
    dictionary = dictionary or load_grouping_dictionary()
    maps = AggregateMaps()
    store = Store(partition.path.parents[2])

    _, sample_rows = store.read_csv(partition, "core_samples.csv")
    hazard_enum = HazardCategory.from_code(partition.key[0])
    samples: dict[str, tuple] = {}
    sample_meta: dict[str, tuple] = {}
    sort_key = partition.key
    for row in sample_rows:
        origin = row[3] or None
        country = row[4] or ""
        year = effective_year(row[5] or None, row[6] or None)
        strategy = SamplingStrategy.parse(row[7] or None).label
        product_id = row[1] or ""
        product_name = row[2] or None
        category = dictionary.assign(product_name, hazard_enum)
        sample_meta[row[0]] = (country, year, strategy, product_id, product_name, category)
        samples[row[0]] = (sort_key, origin, country, year, strategy, 0, 0, {})

    onto_cache: dict[str, tuple[str, str]] = {}
    nc_cache: dict[str, bool] = {}
    _, result_rows = store.read_csv(partition, "core_results.csv")
    for row in result_rows:
        sid = row[1]
        hazard = row[8]
        eval_code = row[6]
        nc = nc_cache.get(eval_code)
        if nc is None:
            nc = classify_evaluation(eval_code or None) is ComplianceClass.NON_COMPLIANT
            nc_cache[eval_code] = nc
        cname = row[3] or None
        groups = onto_cache.get(row[3])
        if groups is None:
            groups = _onto_groups(cname)
            onto_cache[row[3]] = groups
        country, year, strategy, product_id, product_name, category = sample_meta[sid]
        maps.tally_result(
            hazard=hazard,
            year=year,
            contaminant_id=row[2],
            contaminant_name=cname,
            product_id=product_id,
            product_name=product_name,
            onto_groups=groups,
            category=category,
            country=country,
            strategy=strategy,
            noncompliant=nc,
        )
        rec = samples[sid]
        hazard_counts = rec[7]
        hazard_counts[hazard] = hazard_counts.get(hazard, 0) + 1
        samples[sid] = (
            rec[0],
            rec[1],
            rec[2],
            rec[3],
            rec[4],
            rec[5] + 1,
            rec[6] | (1 if nc else 0),
            hazard_counts,
        )
    return maps, samples


def _merge_samples(into: dict[str, tuple], other: dict[str, tuple]) -> None:
    for sid, rec in other.items():
        mine = into.get(sid)
        if mine is None:
            into[sid] = rec
            continue
        # Field owner is the lexicographically smallest partition key;
        # counts and the noncompliance flag merge commutatively.
        owner = mine if mine[0] <= rec[0] else rec
        hazard_counts = dict(mine[7])
        for hazard, count in rec[7].items():
            hazard_counts[hazard] = hazard_counts.get(hazard, 0) + count
        into[sid] = (
            owner[0],
            owner[1],
            owner[2],
            owner[3],
            owner[4],
            mine[5] + rec[5],
            mine[6] | rec[6],
            hazard_counts,
        )


def _scan_worker(args) -> tuple[AggregateMaps, dict[str, tuple]]:
    partition, dictionary_path = args
    return scan_partition(partition, load_grouping_dictionary(dictionary_path))


def build_maps(
    store: Store,
    dictionary: "GroupingDictionary | None" = None,
    dictionary_path: "Path | None" = None,
    jobs: int = 1,
) -> AggregateMaps:
    """Scan every partition and fold the results into one exact state.

    ``jobs`` > 1 scans partitions in separate processes; merge order is
    the sorted partition order either way, so outputs are identical for
    any job count.
    """
    partitions = store.list_partitions()
    maps = AggregateMaps()
    samples: dict[str, tuple] = {}
    if jobs > 1 and len(partitions) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            partials = list(
                pool.map(_scan_worker, [(p, dictionary_path) for p in partitions])
            )
    else:
        dictionary = dictionary or load_grouping_dictionary(dictionary_path)
        partials = [scan_partition(p, dictionary) for p in partitions]
    for partial_maps, partial_samples in partials:
        maps.merge_counters(partial_maps)
        _merge_samples(samples, partial_samples)
    # The counter merge above also summed sample-level fields once per
    # partition; recompute them from the merged, deduplicated samples.
    maps.strategy_overall = {}
    maps.strategy_country = {}
    maps.samples_per_hazard = {}
    maps.samples_total = 0
    maps.trade = {}
    maps.origin_by_year = {}
    maps.rps_histogram = {}
    for rec in samples.values():
        _, origin, country, year, strategy, n_results, nc, hazard_counts = rec
        maps.tally_sample(
            origin=origin,
            destination=country,
            year=year,
            strategy=strategy,
            hazards=hazard_counts.keys(),
            n_results=n_results,
            noncompliant=bool(nc),
        )
    return maps


@dataclass
class AggregateReport:
    """Named, typed output of one analytics operation."""

    name: str
    params: dict
    columns: tuple[str, ...]
    rows: list[tuple]
    meta: dict = field(default_factory=dict)

    def to_csv_text(self) -> str:
        import io

        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow(["" if cell is None else cell for cell in row])
        return buf.getvalue()

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "params": self.params,
            "columns": list(self.columns),
            "rows": [list(row) for row in self.rows],
            "meta": self.meta,
        }

    def write(self, out_dir: "Path | str") -> list[Path]:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        csv_path = out_dir / f"{self.name}.csv"
        json_path = out_dir / f"{self.name}.json"
        csv_path.write_text(self.to_csv_text(), encoding="utf-8")
        json_path.write_text(
            json.dumps(self.to_json_dict(), indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )
        return [csv_path, json_path]


def _ratio(noncompliant: int, total: int) -> float:
    return noncompliant / total if total else 0.0


def _hazard_code(hazard: "HazardCategory | str | None") -> "str | None":
    if hazard is None:
        return None
    return hazard.value if isinstance(hazard, HazardCategory) else str(hazard)


def yearly_trend(
    maps: AggregateMaps,
    hazard: "HazardCategory | str | None" = None,
    year_range: tuple[int, int] = DEFAULT_YEAR_RANGE,
) -> AggregateReport:
    """Per-year result totals and above-limit counts, per hazard.

    Undated samples are excluded here but remain in overall totals."""
    code = _hazard_code(hazard)
    lo, hi = year_range
    rows = []
    for (h, year), (total, nc) in sorted(maps.by_year.items(), key=lambda kv: (kv[0][1], kv[0][0])):
        if code is not None and h != code:
            continue
        if not lo <= year <= hi:
            continue
        rows.append((year, h, total, nc, _ratio(nc, total)))
    return AggregateReport(
        name="yearly_trend",
        params={"hazard": code, "year_from": lo, "year_to": hi},
        columns=("year", "hazard", "total_results", "noncompliant_results", "pct_noncompliant"),
        rows=rows,
    )


def top_contaminants(
    maps: AggregateMaps, hazard: "HazardCategory | str", n: int = 10
) -> AggregateReport:
    """Most-tested contaminants within a hazard category, with share of the
    category total and the above-limit fraction."""
    code = _hazard_code(hazard)
    hazard_total = maps.hazard_totals.get(code, [0, 0])[0]
    entries = [
        (cid, counts)
        for (h, cid), counts in maps.by_contaminant.items()
        if h == code
    ]
    entries.sort(key=lambda e: (-e[1][0], e[0]))
    rows = []
    for rank, (cid, (total, nc)) in enumerate(entries[:n], start=1):
        name = _leaf(maps.contaminant_names.get(cid), cid)
        rows.append((rank, cid, name, total, _ratio(total, hazard_total), nc, _ratio(nc, total)))
    return AggregateReport(
        name="top_contaminants",
        params={"hazard": code, "n": n},
        columns=(
            "rank",
            "contaminant_id",
            "contaminant_name",
            "total_results",
            "share_of_hazard",
            "noncompliant_results",
            "pct_noncompliant",
        ),
        rows=rows,
    )


def _cross_table(
    maps: AggregateMaps,
    hazard_code: str,
    outer_by: str,
    n_outer: int,
    n_inner: int,
) -> list[tuple]:
    """Shared shaping for the two hazard/product cross tables; rankings use
    total results descending with id-ascending tie-breaks."""
    if outer_by == "contaminant":
        outer_map, outer_names = maps.by_contaminant, maps.contaminant_names
        inner_names = maps.product_names
        pair_key = lambda outer, inner: (hazard_code, outer, inner)
    else:
        outer_map, outer_names = maps.by_product, maps.product_names
        inner_names = maps.contaminant_names
        pair_key = lambda outer, inner: (hazard_code, inner, outer)

    outers = [(oid, counts) for (h, oid), counts in outer_map.items() if h == hazard_code]
    outers.sort(key=lambda e: (-e[1][0], e[0]))
    inner_index: dict[str, list[tuple[str, list[int]]]] = {}
    for (h, cid, pid), counts in maps.pair.items():
        if h != hazard_code:
            continue
        outer, inner = (cid, pid) if outer_by == "contaminant" else (pid, cid)
        inner_index.setdefault(outer, []).append((inner, counts))

    rows = []
    for oid, (outer_total, _) in outers[:n_outer]:
        inners = inner_index.get(oid, [])
        inners.sort(key=lambda e: (-e[1][0], e[0]))
        oname = _leaf(outer_names.get(oid), oid)
        for iid, (total, nc) in inners[:n_inner]:
            rows.append(
                (
                    oid,
                    oname,
                    outer_total,
                    iid,
                    _leaf(inner_names.get(iid), iid),
                    total,
                    nc,
                    _ratio(nc, total),
                )
            )
    return rows


def hazard_product_table(
    maps: AggregateMaps,
    hazard: "HazardCategory | str",
    top_hazards: int = 3,
    top_products: int = 3,
) -> AggregateReport:
    """Top products per top contaminant within a hazard category."""
    code = _hazard_code(hazard)
    rows = _cross_table(maps, code, "contaminant", top_hazards, top_products)
    return AggregateReport(
        name="hazard_product_table",
        params={"hazard": code, "top_hazards": top_hazards, "top_products": top_products},
        columns=(
            "contaminant_id",
            "contaminant_name",
            "contaminant_total_results",
            "product_id",
            "product_name",
            "total_results",
            "noncompliant_results",
            "noncompliance_ratio",
        ),
        rows=rows,
    )


def product_hazard_table(
    maps: AggregateMaps,
    hazard: "HazardCategory | str",
    top_products: int = 3,
    top_hazards: int = 3,
) -> AggregateReport:
    """Top contaminants per top product within a hazard category."""
    code = _hazard_code(hazard)
    rows = _cross_table(maps, code, "product", top_products, top_hazards)
    return AggregateReport(
        name="product_hazard_table",
        params={"hazard": code, "top_products": top_products, "top_hazards": top_hazards},
        columns=(
            "product_id",
            "product_name",
            "product_total_results",
            "contaminant_id",
            "contaminant_name",
            "total_results",
            "noncompliant_results",
            "noncompliance_ratio",
        ),
        rows=rows,
    )


def ontology_group_stats(
    maps: AggregateMaps,
    level: int = 1,
    hazard: "HazardCategory | str | None" = None,
    parent: "str | None" = None,
) -> AggregateReport:
    """Contaminant totals grouped by ontology level 1 or 2; malformed full
    names aggregate under the 'unparsed' group."""
    if level not in (1, 2):
        raise AnalyticsError(f"level must be 1 or 2, got {level}")
    code = _hazard_code(hazard)
    agg: dict[tuple, list[int]] = {}
    if level == 1:
        for (h, g1), (total, nc) in maps.onto1.items():
            if code is not None and h != code:
                continue
            cell = agg.setdefault((g1,), [0, 0])
            cell[0] += total
            cell[1] += nc
    else:
        for (h, g1, g2), (total, nc) in maps.onto2.items():
            if code is not None and h != code:
                continue
            if parent is not None and g1 != parent:
                continue
            cell = agg.setdefault((g1, g2), [0, 0])
            cell[0] += total
            cell[1] += nc
    entries = sorted(agg.items(), key=lambda kv: (-kv[1][0], kv[0]))
    if level == 1:
        rows = [(g[0], t, nc, _ratio(nc, t)) for g, (t, nc) in entries]
        columns = ("group", "total_results", "noncompliant_results", "pct_noncompliant")
    else:
        rows = [(g[0], g[1], t, nc, _ratio(nc, t)) for g, (t, nc) in entries]
        columns = ("parent_group", "group", "total_results", "noncompliant_results", "pct_noncompliant")
    return AggregateReport(
        name="ontology_group_stats",
        params={"level": level, "hazard": code, "parent": parent},
        columns=columns,
        rows=rows,
    )


def product_category_stats(
    maps: AggregateMaps, hazard: "HazardCategory | str | None" = None
) -> AggregateReport:
    """Result totals per grouped product category."""
    code = _hazard_code(hazard)
    agg: dict[str, list[int]] = {}
    for (h, cat), (total, nc) in maps.category.items():
        if code is not None and h != code:
            continue
        cell = agg.setdefault(cat, [0, 0])
        cell[0] += total
        cell[1] += nc
    entries = sorted(agg.items(), key=lambda kv: (-kv[1][0], kv[0]))
    rows = [(cat, t, nc, _ratio(nc, t)) for cat, (t, nc) in entries]
    return AggregateReport(
        name="product_category_stats",
        params={"hazard": code},
        columns=("category", "total_results", "noncompliant_results", "pct_noncompliant"),
        rows=rows,
    )


def country_stats(maps: AggregateMaps, top_n: int = 15) -> AggregateReport:
    """Sampling countries ranked by all-hazard result totals, with the
    per-hazard breakdown attached as extra rows."""
    grand_total = sum(v[0] for v in maps.hazard_totals.values())
    totals: dict[str, list[int]] = {}
    for (country, _), (total, nc) in maps.country.items():
        cell = totals.setdefault(country, [0, 0])
        cell[0] += total
        cell[1] += nc
    ranked = sorted(totals.items(), key=lambda kv: (-kv[1][0], kv[0]))[:top_n]
    rows = []
    for rank, (country, (total, nc)) in enumerate(ranked, start=1):
        rows.append(
            (rank, country, "ALL", total, nc, _ratio(nc, total), _ratio(total, grand_total))
        )
        for hazard in sorted(h.value for h in HazardCategory):
            cell = maps.country.get((country, hazard))
            if cell is None:
                continue
            rows.append(
                (
                    rank,
                    country,
                    hazard,
                    cell[0],
                    cell[1],
                    _ratio(cell[1], cell[0]),
                    _ratio(cell[0], grand_total),
                )
            )
    return AggregateReport(
        name="country_stats",
        params={"top_n": top_n},
        columns=(
            "rank",
            "country",
            "hazard",
            "total_results",
            "noncompliant_results",
            "pct_noncompliant",
            "share_of_all_results",
        ),
        rows=rows,
    )


STRATEGY_GROUPINGS = ("overall", "per_year", "per_country_hazard")


def sampling_strategy_breakdown(maps: AggregateMaps, group_by: str = "overall") -> AggregateReport:
    """Distribution over sampling strategies.

    ``overall`` and ``per_country_hazard`` count unique samples;
    ``per_year`` counts analytical results with their above-limit share.
    Within every group the share column sums to 1.
    """
    if group_by not in STRATEGY_GROUPINGS:
        raise AnalyticsError(
            f"unknown group_by {group_by!r}; expected one of {STRATEGY_GROUPINGS}"
        )
    if group_by == "overall":
        total = maps.samples_total
        entries = sorted(maps.strategy_overall.items(), key=lambda kv: (-kv[1], kv[0]))
        rows = [(strategy, count, _ratio(count, total)) for strategy, count in entries]
        columns = ("strategy", "samples", "share")
    elif group_by == "per_year":
        group_totals: dict[tuple[int, str], int] = {}
        for (year, hazard, _), (total, _nc) in maps.strategy_year.items():
            group_totals[(year, hazard)] = group_totals.get((year, hazard), 0) + total
        rows = []
        for (year, hazard, strategy), (total, nc) in sorted(maps.strategy_year.items()):
            share = _ratio(total, group_totals[(year, hazard)])
            rows.append((year, hazard, strategy, total, nc, share, _ratio(nc, total)))
        columns = (
            "year",
            "hazard",
            "strategy",
            "results",
            "noncompliant_results",
            "share",
            "pct_noncompliant",
        )
    else:
        group_totals2: dict[tuple[str, str], int] = {}
        for (country, hazard, _), count in maps.strategy_country.items():
            group_totals2[(country, hazard)] = group_totals2.get((country, hazard), 0) + count
        rows = []
        for (country, hazard, strategy), count in sorted(maps.strategy_country.items()):
            rows.append(
                (country, hazard, strategy, count, _ratio(count, group_totals2[(country, hazard)]))
            )
        columns = ("country", "hazard", "strategy", "samples", "share")
    return AggregateReport(
        name="sampling_strategy_breakdown",
        params={"group_by": group_by},
        columns=columns,
        rows=rows,
    )


def trade_links(
    maps: AggregateMaps,
    min_samples: int = 100,
    top_n: int = 20,
    year_range: "tuple[int, int] | None" = DEFAULT_YEAR_RANGE,
) -> AggregateReport:
    """Origin-to-sampling-country links ranked by the share of samples with
    at least one above-limit result.

    Self-links are excluded; only links with strictly more than
    ``min_samples`` samples qualify. Ties break by sample count descending,
    then origin code, then destination code. With a year range, undated
    samples are excluded; pass ``year_range=None`` to include everything.
    """
    agg: dict[tuple[str, str], list[int]] = {}
    for (origin, dest, year), (count, nc) in maps.trade.items():
        if origin == dest:
            continue
        if year_range is not None:
            if year is None or not year_range[0] <= year <= year_range[1]:
                continue
        cell = agg.setdefault((origin, dest), [0, 0])
        cell[0] += count
        cell[1] += nc
    links = [
        (origin, dest, count, nc, _ratio(nc, count))
        for (origin, dest), (count, nc) in agg.items()
        if count > min_samples
    ]
    links.sort(key=lambda l: (-l[4], -l[2], l[0], l[1]))
    rows = [
        (rank, origin, dest, count, nc, pct)
        for rank, (origin, dest, count, nc, pct) in enumerate(links[:top_n], start=1)
    ]
    return AggregateReport(
        name="trade_links",
        params={
            "min_samples": min_samples,
            "top_n": top_n,
            "year_from": year_range[0] if year_range else None,
            "year_to": year_range[1] if year_range else None,
        },
        columns=("rank", "origin", "destination", "samples", "noncompliant_samples", "pct"),
        rows=rows,
    )


def unknown_origin_trend(maps: AggregateMaps) -> AggregateReport:
    """Per-year share of samples with unknown or absent origin country."""
    rows = [
        (year, total, unknown, _ratio(unknown, total))
        for year, (total, unknown) in sorted(maps.origin_by_year.items())
    ]
    return AggregateReport(
        name="unknown_origin_trend",
        params={},
        columns=("year", "total_samples", "unknown_origin_samples", "pct_unknown"),
        rows=rows,
    )


def results_per_sample_distribution(maps: AggregateMaps) -> AggregateReport:
    """Exact histogram of results-per-sample, with per-hazard means in the
    report metadata."""
    rows = [(k, maps.rps_histogram[k]) for k in sorted(maps.rps_histogram)]
    means = {}
    for hazard in sorted(maps.samples_per_hazard):
        n_samples = maps.samples_per_hazard[hazard]
        n_results = maps.hazard_totals.get(hazard, [0, 0])[0]
        means[hazard] = n_results / n_samples if n_samples else 0.0
    return AggregateReport(
        name="results_per_sample_distribution",
        params={},
        columns=("results_per_sample", "samples"),
        rows=rows,
        meta={
            "mean_results_per_sample": means,
            "samples_per_hazard": dict(sorted(maps.samples_per_hazard.items())),
        },
    )


def contaminant_overlap(maps: AggregateMaps) -> AggregateReport:
    """Unique contaminant ids by hazard-category membership cardinality,
    plus the pairwise overlaps."""
    sets = {h.value: maps.contaminant_ids.get(h.value, set()) for h in HazardCategory}
    unique = set().union(*sets.values())
    by_cardinality = {1: 0, 2: 0, 3: 0}
    for cid in unique:
        member = sum(1 for ids in sets.values() if cid in ids)
        by_cardinality[member] += 1
    n_unique = len(unique)
    rows = [
        ("unique_total", n_unique, 1.0 if n_unique else 0.0),
        ("in_1_category", by_cardinality[1], _ratio(by_cardinality[1], n_unique)),
        ("in_2_categories", by_cardinality[2], _ratio(by_cardinality[2], n_unique)),
        ("in_3_categories", by_cardinality[3], _ratio(by_cardinality[3], n_unique)),
    ]
    codes = sorted(sets)
    for i, a in enumerate(codes):
        for b in codes[i + 1 :]:
            count = len(sets[a] & sets[b])
            rows.append((f"pair_{a}_{b}", count, _ratio(count, n_unique)))
    return AggregateReport(
        name="contaminant_overlap",
        params={},
        columns=("bucket", "contaminant_ids", "pct_of_unique"),
        rows=rows,
    )


#: Report registry for the CLI: name -> (builder, accepted params).
REPORTS: dict[str, Callable[..., AggregateReport]] = {
    "yearly_trend": yearly_trend,
    "top_contaminants": top_contaminants,
    "hazard_product_table": hazard_product_table,
    "product_hazard_table": product_hazard_table,
    "ontology_group_stats": ontology_group_stats,
    "product_category_stats": product_category_stats,
    "country_stats": country_stats,
    "sampling_strategy_breakdown": sampling_strategy_breakdown,
    "trade_links": trade_links,
    "unknown_origin_trend": unknown_origin_trend,
    "results_per_sample_distribution": results_per_sample_distribution,
    "contaminant_overlap": contaminant_overlap,
}


def default_report_suite(maps: AggregateMaps) -> list[AggregateReport]:
    """Every report at its default parameters (used by acceptance testing
    and the batch reporting command)."""
    reports: list[AggregateReport] = [yearly_trend(maps)]
    for hazard in HazardCategory:
        reports.append(top_contaminants(maps, hazard, 10))
        reports.append(hazard_product_table(maps, hazard, 3, 3))
        reports.append(product_hazard_table(maps, hazard, 3, 3))
        reports.append(product_category_stats(maps, hazard))
    reports.append(ontology_group_stats(maps, level=1))
    reports.append(ontology_group_stats(maps, level=2))
    reports.append(country_stats(maps, 15))
    for grouping in STRATEGY_GROUPINGS:
        reports.append(sampling_strategy_breakdown(maps, grouping))
    reports.append(trade_links(maps, min_samples=100, top_n=20))
    reports.append(trade_links(maps, min_samples=5000, top_n=20))
    reports.append(unknown_origin_trend(maps))
    reports.append(results_per_sample_distribution(maps))
    reports.append(contaminant_overlap(maps))
    return reports
