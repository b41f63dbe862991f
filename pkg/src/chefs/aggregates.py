"""Shared shape for exact aggregate state.

The analytics engine (scanning the store), the brute-force oracle
(re-reading raw files) and the generator ledger (bookkeeping while
writing) all fill this same container through independent code paths;
acceptance testing compares the three for exact equality. All values are
integers; fractions are derived later, at report-shaping time.

Counter merging is commutative and associative, so partitions can be
scanned in parallel and merged in any order with identical outcomes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

SEP = "\x1f"

#: Year key used in serialized trade keys for undated samples.
_NO_YEAR = ""


@dataclass
class AggregateMaps:
    """Exact integer aggregates over one corpus/store.

    Value lists are [total, noncompliant] pairs unless noted.
    """

    hazard_totals: dict[str, list[int]] = field(default_factory=dict)
    by_year: dict[tuple[str, int], list[int]] = field(default_factory=dict)
    by_contaminant: dict[tuple[str, str], list[int]] = field(default_factory=dict)
    contaminant_names: dict[str, str] = field(default_factory=dict)
    by_product: dict[tuple[str, str], list[int]] = field(default_factory=dict)
    product_names: dict[str, str] = field(default_factory=dict)
    pair: dict[tuple[str, str, str], list[int]] = field(default_factory=dict)
    onto1: dict[tuple[str, str], list[int]] = field(default_factory=dict)
    onto2: dict[tuple[str, str, str], list[int]] = field(default_factory=dict)
    category: dict[tuple[str, str], list[int]] = field(default_factory=dict)
    country: dict[tuple[str, str], list[int]] = field(default_factory=dict)
    strategy_year: dict[tuple[int, str, str], list[int]] = field(default_factory=dict)
    strategy_overall: dict[str, int] = field(default_factory=dict)  # samples
    strategy_country: dict[tuple[str, str, str], int] = field(default_factory=dict)  # samples
    samples_per_hazard: dict[str, int] = field(default_factory=dict)
    samples_total: int = 0
    contaminant_ids: dict[str, set[str]] = field(default_factory=dict)
    trade: dict[tuple[str, str, "int | None"], list[int]] = field(default_factory=dict)  # samples
    origin_by_year: dict[int, list[int]] = field(default_factory=dict)  # [samples, unknown]
    rps_histogram: dict[int, int] = field(default_factory=dict)  # samples

    # -- tally helpers -----------------------------------------------------

    def tally_result(
        self,
        hazard: str,
        year: "int | None",
        contaminant_id: str,
        contaminant_name: "str | None",
        product_id: str,
        product_name: "str | None",
        onto_groups: tuple[str, str],
        category: str,
        country: str,
        strategy: str,
        noncompliant: bool,
    ) -> None:
        nc = 1 if noncompliant else 0
        _bump(self.hazard_totals, hazard, nc)
        if year is not None:
            _bump(self.by_year, (hazard, year), nc)
            _bump(self.strategy_year, (year, hazard, strategy), nc)
        _bump(self.by_contaminant, (hazard, contaminant_id), nc)
        _bump(self.by_product, (hazard, product_id), nc)
        _bump(self.pair, (hazard, contaminant_id, product_id), nc)
        _bump(self.onto1, (hazard, onto_groups[0]), nc)
        _bump(self.onto2, (hazard, onto_groups[0], onto_groups[1]), nc)
        _bump(self.category, (hazard, category), nc)
        _bump(self.country, (country, hazard), nc)
        self.contaminant_ids.setdefault(hazard, set()).add(contaminant_id)
        if contaminant_name:
            prev = self.contaminant_names.get(contaminant_id)
            if prev is None or contaminant_name < prev:
                self.contaminant_names[contaminant_id] = contaminant_name
        if product_name:
            prev = self.product_names.get(product_id)
            if prev is None or product_name < prev:
                self.product_names[product_id] = product_name

    def tally_sample(
        self,
        origin: "str | None",
        destination: str,
        year: "int | None",
        strategy: str,
        hazards: Iterable[str],
        n_results: int,
        noncompliant: bool,
    ) -> None:
        self.samples_total += 1
        self.strategy_overall[strategy] = self.strategy_overall.get(strategy, 0) + 1
        for hazard in hazards:
            self.samples_per_hazard[hazard] = self.samples_per_hazard.get(hazard, 0) + 1
            key = (destination, hazard, strategy)
            self.strategy_country[key] = self.strategy_country.get(key, 0) + 1
        unknown = origin is None or origin.upper() == "UNKNOWN"
        origin_norm = "UNKNOWN" if unknown else origin
        _bump(self.trade, (origin_norm, destination, year), 1 if noncompliant else 0)
        if year is not None:
            cell = self.origin_by_year.setdefault(year, [0, 0])
            cell[0] += 1
            if unknown:
                cell[1] += 1
        self.rps_histogram[n_results] = self.rps_histogram.get(n_results, 0) + 1

    def merge_counters(self, other: "AggregateMaps") -> None:
        """Fold another maps instance into this one (sample-level fields
        included; use only when sample id spaces are disjoint)."""
        for name in (
            "hazard_totals",
            "by_year",
            "by_contaminant",
            "by_product",
            "pair",
            "onto1",
            "onto2",
            "category",
            "country",
            "strategy_year",
        ):
            mine = getattr(self, name)
            for key, val in getattr(other, name).items():
                cell = mine.setdefault(key, [0, 0])
                cell[0] += val[0]
                cell[1] += val[1]
        for key, val in other.trade.items():
            cell = self.trade.setdefault(key, [0, 0])
            cell[0] += val[0]
            cell[1] += val[1]
        for key, val in other.origin_by_year.items():
            cell = self.origin_by_year.setdefault(key, [0, 0])
            cell[0] += val[0]
            cell[1] += val[1]
        for name in ("strategy_overall", "strategy_country", "samples_per_hazard", "rps_histogram"):
            mine = getattr(self, name)
            for key, val in getattr(other, name).items():
                mine[key] = mine.get(key, 0) + val
        self.samples_total += other.samples_total
        for hazard, ids in other.contaminant_ids.items():
            self.contaminant_ids.setdefault(hazard, set()).update(ids)
        for cid, name in other.contaminant_names.items():
            prev = self.contaminant_names.get(cid)
            if prev is None or name < prev:
                self.contaminant_names[cid] = name
        for pid, name in other.product_names.items():
            prev = self.product_names.get(pid)
            if prev is None or name < prev:
                self.product_names[pid] = name

    # -- serialization -----------------------------------------------------

    def canonical(self) -> dict:
        """Plain sorted-key structure; equal maps yield equal structures."""

        def join(parts) -> str:
            return SEP.join("" if p is None else str(p) for p in parts)

        def enc(mapping, tuple_keys: bool):
            if tuple_keys:
                items = {join(k): v for k, v in mapping.items()}
            else:
                items = {str(k): v for k, v in mapping.items()}
            return {k: items[k] for k in sorted(items)}

        return {
            "hazard_totals": enc(self.hazard_totals, False),
            "by_year": enc(self.by_year, True),
            "by_contaminant": enc(self.by_contaminant, True),
            "contaminant_names": enc(self.contaminant_names, False),
            "by_product": enc(self.by_product, True),
            "product_names": enc(self.product_names, False),
            "pair": enc(self.pair, True),
            "onto1": enc(self.onto1, True),
            "onto2": enc(self.onto2, True),
            "category": enc(self.category, True),
            "country": enc(self.country, True),
            "strategy_year": enc(self.strategy_year, True),
            "strategy_overall": enc(self.strategy_overall, False),
            "strategy_country": enc(self.strategy_country, True),
            "samples_per_hazard": enc(self.samples_per_hazard, False),
            "samples_total": self.samples_total,
            "contaminant_ids": {
                hazard: sorted(ids) for hazard, ids in sorted(self.contaminant_ids.items())
            },
            "trade": enc(self.trade, True),
            "origin_by_year": enc(self.origin_by_year, False),
            "rps_histogram": enc(self.rps_histogram, False),
        }

    @classmethod
    def from_canonical(cls, payload: dict) -> "AggregateMaps":
        maps = cls()

        def split(key: str) -> list[str]:
            return key.split(SEP)

        maps.hazard_totals = {k: list(v) for k, v in payload["hazard_totals"].items()}
        maps.by_year = {
            (p[0], int(p[1])): list(v)
            for k, v in payload["by_year"].items()
            for p in [split(k)]
        }
        maps.by_contaminant = {
            tuple(split(k)): list(v) for k, v in payload["by_contaminant"].items()
        }
        maps.contaminant_names = dict(payload["contaminant_names"])
        maps.by_product = {tuple(split(k)): list(v) for k, v in payload["by_product"].items()}
        maps.product_names = dict(payload["product_names"])
        maps.pair = {tuple(split(k)): list(v) for k, v in payload["pair"].items()}
        maps.onto1 = {tuple(split(k)): list(v) for k, v in payload["onto1"].items()}
        maps.onto2 = {tuple(split(k)): list(v) for k, v in payload["onto2"].items()}
        maps.category = {tuple(split(k)): list(v) for k, v in payload["category"].items()}
        maps.country = {tuple(split(k)): list(v) for k, v in payload["country"].items()}
        maps.strategy_year = {
            (int(p[0]), p[1], p[2]): list(v)
            for k, v in payload["strategy_year"].items()
            for p in [split(k)]
        }
        maps.strategy_overall = dict(payload["strategy_overall"])
        maps.strategy_country = {
            tuple(split(k)): v for k, v in payload["strategy_country"].items()
        }
        maps.samples_per_hazard = dict(payload["samples_per_hazard"])
        maps.samples_total = payload["samples_total"]
        maps.contaminant_ids = {
            hazard: set(ids) for hazard, ids in payload["contaminant_ids"].items()
        }
        maps.trade = {
            (p[0], p[1], int(p[2]) if p[2] != _NO_YEAR else None): list(v)
            for k, v in payload["trade"].items()
            for p in [split(k)]
        }
        maps.origin_by_year = {int(k): list(v) for k, v in payload["origin_by_year"].items()}
        maps.rps_histogram = {int(k): v for k, v in payload["rps_histogram"].items()}
        return maps


def _bump(mapping: dict, key, nc: int) -> None:
    cell = mapping.get(key)
    if cell is None:
        mapping[key] = [1, nc]
    else:
        cell[0] += 1
        cell[1] += nc


def maps_diff(a: AggregateMaps, b: AggregateMaps, limit: int = 20) -> list[str]:
    """Human-readable differences between two aggregate states (empty when
    exactly equal)."""
    ca, cb = a.canonical(), b.canonical()
    diffs: list[str] = []
    for section in ca:
        va, vb = ca[section], cb[section]
        if va == vb:
            continue
        if not isinstance(va, dict):
            diffs.append(f"{section}: {va!r} != {vb!r}")
            continue
        keys = set(va) | set(vb)
        for key in sorted(keys):
            if va.get(key) != vb.get(key):
                diffs.append(f"{section}[{key!r}]: {va.get(key)!r} != {vb.get(key)!r}")
                if len(diffs) >= limit:
                    return diffs
    return diffs
