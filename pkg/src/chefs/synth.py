"""Synthetic corpus generation with an exact ground-truth ledger, plus the
independent brute-force oracle used for acceptance testing.

The generator writes monitoring files in the exact ingest input format,
including deliberate schema variations (synonym headers, dropped columns,
gzip, sidecar metadata, files sharing a partition), planted duplicates,
malformed rows, unknown origins and vocabulary gaps. While writing it
book-keeps every statistic into a Ledger; no parsing, hashing or pipeline
code is involved, so the ledger is an independent statement of what the
corpus contains.

The oracle re-reads the written files with its own naive, single-threaded
walk (plain dict groupbys, no store, no parallelism) and produces the
same aggregate shape. Pipeline == oracle == ledger is the central
acceptance property.

Generation is deterministic: one seeded Mersenne Twister per file, keyed
by (corpus seed, file name), so corpora and ledgers are byte-identical
across runs and platforms.
"""

from __future__ import annotations

import csv
import gzip
import io
import json
import random
from dataclasses import dataclass, field
from datetime import date, timedelta
from pathlib import Path

from .aggregates import AggregateMaps
from .catalog import GroupingDictionary, load_catalogue, load_grouping_dictionary
from .ingest import discover_files, open_source
from .kernels import canon_text, make_key
from .model import (
    ChefsError,
    ComplianceClass,
    HazardCategory,
    SamplingStrategy,
    classify_evaluation,
)
from .schema import default_schema


class SynthError(ChefsError):
    pass


# --------------------------------------------------------------------------
# Default pools
# --------------------------------------------------------------------------

#: (id, full name) per hazard; ids beginning RF-9 are deliberately shared
#: between hazard pools (same id, same name) to exercise overlap counting.
DEFAULT_CONTAMINANTS: dict[str, tuple[tuple[str, str], ...]] = {
    "CC": (
        ("RF-0010", "chemical elements and derivatives::heavy metal elements::lead (pb)"),
        ("RF-0011", "chemical elements and derivatives::heavy metal elements::cadmium (cd)"),
        ("RF-0012", "chemical elements and derivatives::heavy metal elements::mercury (hg)"),
        ("RF-0020", "toxins::mycotoxins::aflatoxin b1"),
        ("RF-0021", "toxins::mycotoxins::aflatoxin b2"),
        ("RF-0022", "toxins::mycotoxins::ochratoxin a"),
        ("RF-0023", "toxins::biogenic amines::cadaverine"),
        ("RF-0024", "toxins::phytotoxins::atropine"),
        ("RF-0030", "process contaminants::acrylamide"),
        ("RF-0031", "process contaminants::mcpd esters::3-mcpd"),
        ("RF-0040", "persistent organic pollutants (pops) and other organic contaminants::dioxins and pcbs::pcb-153"),
        ("RF-0041", "persistent organic pollutants (pops) and other organic contaminants::dioxins and pcbs::pcb-138"),
        ("RF-0042", "persistent organic pollutants (pops) and other organic contaminants::dioxins and pcbs::pcb-101"),
        ("RF-9001", "chemical elements and derivatives::heavy metal elements::copper (cu)"),
        ("RF-9002", "process contaminants::semicarbazide"),
        ("RF-9101", "pesticides::organochlorines::lindane"),
        ("RF-9103", "toxins::marine biotoxins::okadaic acid"),
    ),
    "PEST": (
        ("RF-1010", "pesticides::organophosphates::chlorpyrifos"),
        ("RF-1011", "pesticides::organophosphates::diazinon"),
        ("RF-1012", "pesticides::organophosphates::pirimiphos-methyl"),
        ("RF-1013", "pesticides::fungicides::boscalid"),
        ("RF-1014", "pesticides::fungicides::procymidone"),
        ("RF-1015", "pesticides::carbamates::oxamyl"),
        ("RF-1016", "pesticides::herbicides::glyphosate"),
        ("RF-9001", "chemical elements and derivatives::heavy metal elements::copper (cu)"),
        ("RF-9002", "process contaminants::semicarbazide"),
        ("RF-9101", "pesticides::organochlorines::lindane"),
        ("RF-9102", "veterinary medicinal products::antiparasitics::ivermectin"),
    ),
    "VMPR": (
        ("RF-2010", "veterinary medicinal products::antibiotics::doxycycline"),
        ("RF-2011", "veterinary medicinal products::antibiotics::erythromycin"),
        ("RF-2012", "veterinary medicinal products::antibiotics::danofloxacin"),
        ("RF-2013", "veterinary medicinal products::antibiotics::benzylpenicillin (penicillin g)"),
        ("RF-2014", "veterinary medicinal products::hormones and growth promoters::clenbuterol"),
        ("RF-9001", "chemical elements and derivatives::heavy metal elements::copper (cu)"),
        ("RF-9002", "process contaminants::semicarbazide"),
        ("RF-9102", "veterinary medicinal products::antiparasitics::ivermectin"),
        ("RF-9103", "toxins::marine biotoxins::okadaic acid"),
    ),
}

#: (id, full name, category) where category is the hand-written expected
#: grouping outcome; a unit test pins the grouping dictionary to these.
DEFAULT_PRODUCTS: tuple[tuple[str, str, str], ...] = (
    ("P0101", "mtx::all lists::food::pome fruits::apples", "Fruits"),
    ("P0102", "mtx::all lists::food::citrus fruits::oranges", "Fruits"),
    ("P0103", "matrix::fruiting vegetables::sweet peppers/bell peppers", "Fruits"),
    ("P0104", "mtx::all lists::food::fruiting vegetables::sweet peppers", "Fruits"),
    ("P0201", "mtx::all lists::food::cereals::wheat grain", "Cereals and Grains"),
    ("P0202", "matrix::cereals::rice grain", "Cereals and Grains"),
    ("P0301", "matrix::swine meat::pig fresh meat", "Animal Meat and Tissues"),
    ("P0302", "matrix::swine meat::pig kidney", "Animal Meat and Tissues"),
    ("P0303", "matrix::swine meat::pig liver", "Animal Meat and Tissues"),
    ("P0304", "matrix::bovine meat::cow, ox or bull fresh meat", "Animal Meat and Tissues"),
    ("P0305", "matrix::poultry meat::chicken fresh meat", "Animal Meat and Tissues"),
    ("P0401", "mtx::all lists::food::eggs and egg products::whole eggs", "Eggs and Egg products"),
    ("P0402", "matrix::birds eggs::hen eggs", "Eggs and Egg products"),
    ("P0501", "mtx::all lists::food::milk::cow milk", "Milk and Dairy Products"),
    ("P0502", "mtx::all lists::food::cheese::gouda cheese", "Milk and Dairy Products"),
    ("P0601", "matrix::feed::compound feed for cattle", "Feed"),
    ("P0701", "mtx::all lists::food::tree nuts::pistachios", "Nuts and Seeds"),
    ("P0702", "mtx::all lists::food::oilseeds and oil fruits::peanuts", "Nuts and Seeds"),
    ("P0801", "mtx::all lists::food::pulses (dry)::lentils", "Legumes and Pulses"),
    ("P0901", "matrix::leaf vegetables, herbs and edible flowers::spinach", "Leafy Vegetables, Herbs and Flowers"),
    ("P1001", "mtx::all lists::food::root and tuber vegetables::potatoes", "Vegetables (Non-Leafy)"),
    ("P1101", "mtx::all lists::food::products of animal origin - fish, fish products and any other marine and freshwater food products::salmon", "Seafood and Fish Products"),
    ("P1201", "matrix::honey and other apicultural products::honey", "Apiculture Products"),
    ("P1301", "mtx::all lists::food::spices, dried::black pepper, dried", "Spices, Condiments and Additives"),
    ("P1401", "mtx::all lists::food::alcoholic beverages::red wine", "Alcoholic and Nonalcoholic Beverages"),
    ("P1501", "mtx::all lists::food::sugars and similar::white sugar", "Sugars and Sweeteners"),
    ("P1601", "mtx::all lists::food::infant formulae/follow-on formulae::infant formula powder", "Infant and Special Diet Foods"),
    ("P1701", "matrix::Other groups for hierarchies::game mammals meat", "Others"),
    ("P1801", "mtx::all lists::food::composite dishes::pizza", "Composites and Mixed Foods"),
    ("P1901", "matrix::non-food matrices::animal drinking water", "Food Matrices/ Non-Food / Technical / Simulation / Facet"),
    ("P2001", "mtx::all lists::food::fungi::cultivated mushrooms", "Microorganisms, Algae, Fungi, Moss, Lichen and Derived Materials"),
    ("P2101", "mtx::all lists::food::animal and vegetable fats and oils and primary derivatives thereof::olive oil", "animal and vegetable fats and oils"),
    ("P2201", "mtx::all lists::food::bakery products::wheat bread", "Bakery and Starchy Products"),
    ("P2301", "matrix::whey::sweet whey powder", "Milk and Dairy Products"),
    ("P2401", "matrix::Other non-food animal-related matrices::animal hair", "Food Matrices/ Non-Food / Technical / Simulation / Facet"),
)

#: (cell text, parsed bucket label, weight). The bucket label is the
#: independent ground truth for strategy statistics.
DEFAULT_STRATEGIES: tuple[tuple[str, str, float], ...] = (
    ("Objective Sampling", "objective sampling", 0.531),
    ("Selective Sampling", "selective sampling", 0.234),
    ("Suspect Sampling", "suspect sampling", 0.053),
    ("Convenient Sampling", "convenient sampling", 0.012),
    ("Other", "other", 0.165),
    ("Not specified", "not specified", 0.005),
)

DEFAULT_ORIGINS: tuple[str, ...] = (
    "DE", "FR", "IT", "NL", "PL", "ES", "CN", "EG", "TR", "VN", "KH", "LA", "BO", "IR", "NO",
)

NONCOMPLIANT_EVAL_CODES = (
    "greater than max permissible quantities",
    "detected",
    "non-compliant",
    "unsatisfactory",
)
_NC_WEIGHTS = (0.60, 0.35, 0.04, 0.01)

OTHER_EVAL_CODES = (
    "less than or equal to max permissible quantities",
    "result not evaluated",
    "not detected",
    "compliant",
    "compliant due to measurement uncertainty",
    "acceptable",
    "satisfactory",
)
_OTHER_WEIGHTS = (0.69, 0.24, 0.065, 0.0037, 0.0009, 0.0002, 0.0002)

UNKNOWN_EVAL_CODES = ("pending confirmation", "awaiting second analysis")

_MISSING_WRITE_TOKENS = ("", "", "", "", "NA", "null", "N/A")

HEADER_VARIANTS: dict[str, dict[str, str]] = {
    "canonical": {},
    "ssd1": {
        "samp_code": "sampCode",
        "sampling_country": "sampCountry",
        "origin_country": "origCountry",
        "product_id": "prodCode",
        "product_full_name": "prodText",
        "sampling_date": "sampD",
        "sampling_year": "sampY",
        "strategy": "progSampStrategy",
        "contaminant_id": "paramCode",
        "contaminant_full_name": "paramText",
        "result_value": "resVal",
        "loq": "resLOQ",
        "eval_code": "resEvaluation",
        "analysis_date": "analysisD",
    },
    "ssd2": {
        "samp_code": "sampId",
        "sampling_country": "sampcountry_id",
        "origin_country": "origcountry_id",
        "product_id": "foodex2_id",
        "product_full_name": "foodex2_fullname",
        "sampling_date": "sampDate",
        "sampling_year": "sampYear",
        "strategy": "sampstrategy_id",
        "contaminant_id": "param_id",
        "contaminant_full_name": "param_fullname",
        "result_value": "resValue",
        "loq": "res_loq",
        "eval_code": "evalcode_id",
        "analysis_date": "analysisDate",
    },
}

_CANONICAL_COLUMNS = (
    "samp_code",
    "sampling_country",
    "origin_country",
    "product_id",
    "product_full_name",
    "sampling_date",
    "sampling_year",
    "strategy",
    "contaminant_id",
    "contaminant_full_name",
    "result_value",
    "loq",
    "eval_code",
    "analysis_date",
)


# --------------------------------------------------------------------------
# Plans
# --------------------------------------------------------------------------


@dataclass
class FilePlan:
    hazard: str
    country: str
    year: int
    rows: int
    name: "str | None" = None  # defaults to HAZARD_COUNTRY_YEAR.csv
    header_variant: str = "canonical"
    with_sample_code: bool = True
    drop_columns: tuple[str, ...] = ()
    use_gzip: bool = False
    sidecar: bool = False
    origin_quota: dict[str, int] = field(default_factory=dict)
    extra_columns: tuple[str, ...] = ("sampSize", "labCode")

    def file_name(self) -> str:
        base = self.name or f"{self.hazard}_{self.country}_{self.year}.csv"
        return base + ".gz" if self.use_gzip else base

    def to_json_dict(self) -> dict:
        return {
            "hazard": self.hazard,
            "country": self.country,
            "year": self.year,
            "rows": self.rows,
            "name": self.name,
            "header_variant": self.header_variant,
            "with_sample_code": self.with_sample_code,
            "drop_columns": list(self.drop_columns),
            "use_gzip": self.use_gzip,
            "sidecar": self.sidecar,
            "origin_quota": dict(self.origin_quota),
            "extra_columns": list(self.extra_columns),
        }

    @classmethod
    def from_json_dict(cls, payload: dict) -> "FilePlan":
        return cls(
            hazard=payload["hazard"],
            country=payload["country"],
            year=int(payload["year"]),
            rows=int(payload["rows"]),
            name=payload.get("name"),
            header_variant=payload.get("header_variant", "canonical"),
            with_sample_code=payload.get("with_sample_code", True),
            drop_columns=tuple(payload.get("drop_columns", ())),
            use_gzip=payload.get("use_gzip", False),
            sidecar=payload.get("sidecar", False),
            origin_quota=dict(payload.get("origin_quota", {})),
            extra_columns=tuple(payload.get("extra_columns", ("sampSize", "labCode"))),
        )


@dataclass
class CorpusPlan:
    seed: int
    files: list[FilePlan]
    duplicate_rate: float = 0.03
    malformed_rate: float = 0.002
    noncompliance_rate: float = 0.02
    unknown_origin_rate: float = 0.08
    unknown_eval_rate: float = 0.001
    undated_rate: float = 0.02
    year_only_rate: float = 0.05
    prev_year_rate: float = 0.03
    value_missing_rate: float = 0.10
    loq_missing_rate: float = 0.30
    adate_missing_rate: float = 0.20
    extra_missing_rate: float = 0.50
    max_results_per_sample: int = 8
    origin_pool: tuple[str, ...] = DEFAULT_ORIGINS
    strategies: tuple[tuple[str, str, float], ...] = DEFAULT_STRATEGIES
    contaminants: dict[str, tuple[tuple[str, str], ...]] = field(
        default_factory=lambda: dict(DEFAULT_CONTAMINANTS)
    )
    products: tuple[tuple[str, str, str], ...] = DEFAULT_PRODUCTS

    def __post_init__(self) -> None:
        for rate_name in (
            "duplicate_rate",
            "malformed_rate",
            "noncompliance_rate",
            "unknown_origin_rate",
            "unknown_eval_rate",
            "undated_rate",
            "year_only_rate",
            "prev_year_rate",
        ):
            rate = getattr(self, rate_name)
            if not 0.0 <= rate <= 1.0:
                raise SynthError(f"{rate_name} must be within [0, 1], got {rate}")

    def to_json_dict(self) -> dict:
        return {
            "seed": self.seed,
            "files": [f.to_json_dict() for f in self.files],
            "rates": {
                "duplicate_rate": self.duplicate_rate,
                "malformed_rate": self.malformed_rate,
                "noncompliance_rate": self.noncompliance_rate,
                "unknown_origin_rate": self.unknown_origin_rate,
                "unknown_eval_rate": self.unknown_eval_rate,
                "undated_rate": self.undated_rate,
                "year_only_rate": self.year_only_rate,
                "prev_year_rate": self.prev_year_rate,
                "value_missing_rate": self.value_missing_rate,
                "loq_missing_rate": self.loq_missing_rate,
                "adate_missing_rate": self.adate_missing_rate,
                "extra_missing_rate": self.extra_missing_rate,
            },
            "max_results_per_sample": self.max_results_per_sample,
            "origin_pool": list(self.origin_pool),
            "strategies": [list(s) for s in self.strategies],
            "contaminants": {h: [list(c) for c in pool] for h, pool in self.contaminants.items()},
            "products": [list(p) for p in self.products],
        }

    @classmethod
    def from_json_dict(cls, payload: dict) -> "CorpusPlan":
        rates = payload.get("rates", {})
        return cls(
            seed=int(payload["seed"]),
            files=[FilePlan.from_json_dict(f) for f in payload["files"]],
            max_results_per_sample=payload.get("max_results_per_sample", 8),
            origin_pool=tuple(payload.get("origin_pool", DEFAULT_ORIGINS)),
            strategies=tuple(tuple(s) for s in payload.get("strategies", DEFAULT_STRATEGIES)),
            contaminants={
                h: tuple(tuple(c) for c in pool)
                for h, pool in payload.get(
                    "contaminants", {k: [list(x) for x in v] for k, v in DEFAULT_CONTAMINANTS.items()}
                ).items()
            },
            products=tuple(tuple(p) for p in payload.get("products", DEFAULT_PRODUCTS)),
            **{k: rates[k] for k in rates},
        )

    @classmethod
    def load(cls, path: "Path | str") -> "CorpusPlan":
        return cls.from_json_dict(json.loads(Path(path).read_text("utf-8")))


def default_plan(
    seed: int,
    total_rows: int = 1_000_000,
    countries: tuple[str, ...] = ("DE", "FR", "IT", "NL"),
    years: tuple[int, ...] = (2014, 2017, 2018, 2019),
    **overrides,
) -> CorpusPlan:
    """Desk-scale default: ~50 files over hazards x countries x years with a
    spread of schema variants, at roughly the requested total row count."""
    combos = [
        (hazard, country, year)
        for hazard in ("CC", "PEST", "VMPR")
        for country in countries
        for year in years
    ]
    weights = {"CC": 1.0, "PEST": 3.0, "VMPR": 1.5}
    total_weight = sum(weights[h] for h, _, _ in combos) + weights["CC"] + weights["VMPR"]
    files: list[FilePlan] = []
    for idx, (hazard, country, year) in enumerate(combos):
        rows = max(200, int(total_rows * weights[hazard] / total_weight))
        if year < 2016:
            variant = "ssd1"
        else:
            variant = "ssd2" if idx % 2 == 0 else "canonical"
        drop: tuple[str, ...] = ()
        if idx % 11 == 5:
            drop = ("origin_country",)
        elif idx % 13 == 7:
            drop = ("contaminant_full_name",)
        elif idx % 17 == 9:
            drop = ("sampling_year",)
        elif idx % 19 == 11:
            drop = ("sampling_date",)
        elif idx == 20:
            drop = ("sampling_country",)
        files.append(
            FilePlan(
                hazard=hazard,
                country=country,
                year=year,
                rows=rows,
                header_variant=variant,
                with_sample_code=idx % 7 != 3,
                drop_columns=drop,
                use_gzip=idx % 10 == 4,
            )
        )
    # A second file in an existing partition: ingest must unify the pair.
    first = files[0]
    files.append(
        FilePlan(
            hazard=first.hazard,
            country=first.country,
            year=first.year,
            rows=max(200, int(total_rows * weights["CC"] / total_weight)),
            name=f"{first.hazard}_{first.country}_{first.year}_resubmission.csv",
            header_variant="canonical",
            sidecar=True,
        )
    )
    # A file whose name carries no metadata at all; the sidecar supplies it.
    files.append(
        FilePlan(
            hazard="VMPR",
            country=countries[-1],
            year=years[-1],
            rows=max(200, int(total_rows * weights["VMPR"] / total_weight)),
            name="national_export_extra.csv",
            header_variant="ssd2",
            sidecar=True,
        )
    )
    return CorpusPlan(seed=seed, files=files, **overrides)


# --------------------------------------------------------------------------
# Ledger
# --------------------------------------------------------------------------


@dataclass
class Ledger:
    """Exact expected values for every aggregate over a generated corpus."""

    maps: AggregateMaps = field(default_factory=AggregateMaps)
    per_file: dict[str, dict] = field(default_factory=dict)
    totals: dict[str, int] = field(default_factory=dict)

    def finalize(self) -> None:
        self.totals = {
            "results": sum(v[0] for v in self.maps.hazard_totals.values()),
            "noncompliant_results": sum(v[1] for v in self.maps.hazard_totals.values()),
            "samples": self.maps.samples_total,
            "rows_read": sum(f["rows_read"] for f in self.per_file.values()),
            "duplicates_removed": sum(f["duplicates_removed"] for f in self.per_file.values()),
            "rows_malformed": sum(f["rows_malformed"] for f in self.per_file.values()),
            "unknown_eval_results": self.totals.get("unknown_eval_results", 0),
        }

    def to_json_dict(self) -> dict:
        return {
            "maps": self.maps.canonical(),
            "per_file": {k: self.per_file[k] for k in sorted(self.per_file)},
            "totals": dict(sorted(self.totals.items())),
        }

    def save(self, path: "Path | str") -> None:
        Path(path).write_text(
            json.dumps(self.to_json_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )

    @classmethod
    def load(cls, path: "Path | str") -> "Ledger":
        payload = json.loads(Path(path).read_text("utf-8"))
        ledger = cls(maps=AggregateMaps.from_canonical(payload["maps"]))
        ledger.per_file = payload["per_file"]
        ledger.totals = payload["totals"]
        return ledger


@dataclass
class GeneratedCorpus:
    root: Path
    files_dir: Path
    catalogue_dir: Path
    ledger: Ledger
    ledger_path: Path
    plan_path: Path


# --------------------------------------------------------------------------
# Generation
# --------------------------------------------------------------------------


def _case_variants(text: str, rng: random.Random, k: int = 4) -> list[str]:
    """Perturbed spellings sharing one canonical form with ``text``."""
    canonical = canon_text(text)
    variants = [text, text.upper(), text.title()]
    for _ in range(k):
        chars = [c.upper() if rng.random() < 0.4 else c for c in text]
        variant = "".join(chars)
        if rng.random() < 0.4:
            variant = "  " + variant
        if rng.random() < 0.4:
            variant = variant + " "
        if " " in variant and rng.random() < 0.3:
            variant = variant.replace(" ", "  ", 1)
        variants.append(variant)
    for variant in variants:
        assert canon_text(variant) == canonical
    return variants


def _split_groups(full_name: str) -> tuple[str, str]:
    parts = full_name.split("::")
    return (parts[0], parts[1] if len(parts) > 1 else parts[-1])


class _FileGenerator:
    """Generates one file's rows and tallies them into the ledger."""

    def __init__(
        self,
        plan: CorpusPlan,
        fplan: FilePlan,
        file_idx: int,
        used_keys: set,
    ):
        self.plan = plan
        self.fplan = fplan
        self.file_idx = file_idx
        self.used_keys = used_keys
        self.rng = random.Random(f"{plan.seed}|{fplan.file_name()}")
        self.era = "SSD1" if fplan.year < 2016 else "SSD2"

        drops = set(fplan.drop_columns)
        for required in ("product_id", "contaminant_id"):
            if required in drops:
                raise SynthError(f"{fplan.file_name()}: cannot drop required column {required}")
        if "origin_country" in drops and fplan.origin_quota:
            raise SynthError(f"{fplan.file_name()}: origin quota with dropped origin column")
        self.columns = [c for c in _CANONICAL_COLUMNS if c not in drops]
        if not fplan.with_sample_code:
            self.columns.remove("samp_code")
        self.emit = frozenset(self.columns)
        layout = [("canon", c) for c in self.columns] + [
            ("extra", name) for name in fplan.extra_columns
        ]
        self.rng.shuffle(layout)
        self.layout = layout
        variant_map = HEADER_VARIANTS[fplan.header_variant]
        self.header = [
            variant_map.get(name, name) if kind == "canon" else name for kind, name in layout
        ]

    def _header_index(self) -> dict[str, int]:
        return {name: i for i, (kind, name) in enumerate(self.layout)}

    def _draw_eval(self) -> tuple[str, bool, bool]:
        """Returns (canonical code text, noncompliant, unknown_vocabulary)."""
        rng = self.rng
        r = rng.random()
        plan = self.plan
        if r < plan.noncompliance_rate:
            return rng.choices(NONCOMPLIANT_EVAL_CODES, weights=_NC_WEIGHTS)[0], True, False
        if r < plan.noncompliance_rate + plan.unknown_eval_rate:
            return rng.choice(UNKNOWN_EVAL_CODES), False, True
        return rng.choices(OTHER_EVAL_CODES, weights=_OTHER_WEIGHTS)[0], False, False

    def generate(self, ledger: Ledger, writer) -> dict:
        plan, fplan, rng = self.plan, self.fplan, self.rng
        n_rows = fplan.rows
        n_dup = round(n_rows * plan.duplicate_rate)
        n_mal = round(n_rows * plan.malformed_rate)
        n_base = n_rows - n_dup - n_mal
        if n_base <= 0:
            raise SynthError(f"{fplan.file_name()}: no base rows left after duplicates/malformed")

        pool = plan.contaminants[fplan.hazard]
        max_rps = min(plan.max_results_per_sample, len(pool))
        emit_date = "sampling_date" in self.emit
        emit_year = "sampling_year" in self.emit
        emit_origin = "origin_country" in self.emit
        emit_country = "sampling_country" in self.emit
        emit_code = "samp_code" in self.emit
        emit_strategy = "strategy" in self.emit

        eval_variants = {
            code: _case_variants(code, rng)
            for code in (*NONCOMPLIANT_EVAL_CODES, *OTHER_EVAL_CODES, *UNKNOWN_EVAL_CODES)
        }
        strategy_specs = [(text, label) for text, label, _ in plan.strategies]
        strategy_weights = [w for _, _, w in plan.strategies]
        strategy_variants = {text: _case_variants(text, rng) for text, _ in strategy_specs}

        # Sample specs first; origins are assigned afterwards so exact
        # per-origin quotas can be honored.
        samples: list[dict] = []
        results_budget = n_base
        prev_distinct: "tuple | None" = None
        while results_budget > 0:
            rps = min(rng.randint(1, max_rps), results_budget)
            for _ in range(64):
                product = rng.choice(plan.products)
                strategy_text, strategy_label = rng.choices(
                    strategy_specs, weights=strategy_weights
                )[0]
                r = rng.random()
                if r < plan.undated_rate:
                    date_cell, year_cell = None, None
                elif r < plan.undated_rate + plan.year_only_rate:
                    date_cell, year_cell = None, str(fplan.year)
                else:
                    eff = fplan.year - 1 if rng.random() < plan.prev_year_rate else fplan.year
                    day = date(eff, 1, 1) + timedelta(days=rng.randrange(364))
                    date_cell = day.isoformat()
                    year_cell = str(eff) if rng.random() < 0.7 else None
                if not emit_date:
                    date_cell = None
                if not emit_year:
                    year_cell = None
                eff_year = (
                    int(year_cell)
                    if year_cell is not None
                    else (int(date_cell[:4]) if date_cell is not None else None)
                )
                distinct = (product[0], date_cell, year_cell)
                if emit_code:
                    break
                strategy_canon = canon_text(strategy_text) if emit_strategy else None
                key = (product[0], date_cell, strategy_canon, len(samples))
                if distinct != prev_distinct and key not in self.used_keys:
                    self.used_keys.add(key)
                    break
            else:
                raise SynthError(f"{fplan.file_name()}: could not find a distinct sample key")
            prev_distinct = distinct
            code = (
                f"{fplan.hazard}{fplan.country}{fplan.year % 100}F{self.file_idx}S{len(samples):06d}"
                if emit_code
                else None
            )
            samples.append(
                {
                    "code": code,
                    "product": product,
                    "strategy_text": strategy_text,
                    "strategy_label": strategy_label if emit_strategy else "not specified",
                    "date_cell": date_cell,
                    "year_cell": year_cell,
                    "eff_year": eff_year,
                    "rps": rps,
                    "origin": None,
                }
            )
            results_budget -= rps

        # Exact origin quotas over shuffled sample indices, then the
        # unknown/random remainder.
        indices = list(range(len(samples)))
        rng.shuffle(indices)
        quota_total = sum(fplan.origin_quota.values())
        if quota_total > len(samples):
            raise SynthError(
                f"{fplan.file_name()}: origin quota {quota_total} exceeds {len(samples)} samples"
            )
        pos = 0
        for origin in sorted(fplan.origin_quota):
            for idx in indices[pos : pos + fplan.origin_quota[origin]]:
                samples[idx]["origin"] = origin
            pos += fplan.origin_quota[origin]
        for idx in indices[pos:]:
            samples[idx]["origin"] = (
                "UNKNOWN"
                if rng.random() < plan.unknown_origin_rate
                else rng.choice(plan.origin_pool)
            )

        # Emit rows sample by sample, tallying the ledger as we go.
        hazard = fplan.hazard
        country = fplan.country
        header_index = self._header_index()
        present = {name: 0 for _, name in self.layout}
        base_rows: list[list] = []
        unknown_eval_rows = 0

        for spec in samples:
            origin_cell = spec["origin"] if emit_origin else None
            sample_nc = False
            contaminants = rng.sample(pool, spec["rps"])
            base_date = (
                date.fromisoformat(spec["date_cell"]) if spec["date_cell"] else date(fplan.year, 6, 15)
            )
            for cid, cname in contaminants:
                eval_code, nc, unknown = self._draw_eval()
                sample_nc = sample_nc or nc
                if unknown:
                    unknown_eval_rows += 1
                value = (
                    None
                    if rng.random() < plan.value_missing_rate
                    else f"{rng.uniform(0.001, 50.0):.4f}"
                )
                loq = (
                    None
                    if rng.random() < plan.loq_missing_rate
                    else f"{rng.uniform(0.0001, 0.5):.4f}"
                )
                adate = (
                    None
                    if "analysis_date" not in self.emit or rng.random() < plan.adate_missing_rate
                    else (base_date + timedelta(days=rng.randrange(1, 30))).isoformat()
                )
                cells = {
                    "samp_code": spec["code"],
                    "sampling_country": country if emit_country else None,
                    "origin_country": origin_cell,
                    "product_id": spec["product"][0],
                    "product_full_name": spec["product"][1] if "product_full_name" in self.emit else None,
                    "sampling_date": spec["date_cell"],
                    "sampling_year": spec["year_cell"],
                    "strategy": rng.choice(strategy_variants[spec["strategy_text"]]),
                    "contaminant_id": cid,
                    "contaminant_full_name": cname if "contaminant_full_name" in self.emit else None,
                    "result_value": value,
                    "loq": loq,
                    "eval_code": rng.choice(eval_variants[eval_code]),
                    "analysis_date": adate,
                }
                row = [None] * len(self.layout)
                for col, (kind, name) in enumerate(self.layout):
                    if kind == "canon":
                        row[col] = cells[name]
                    else:
                        row[col] = (
                            None
                            if rng.random() < plan.extra_missing_rate
                            else f"E{rng.randrange(10000)}"
                        )
                base_rows.append(row)
                ledger.maps.tally_result(
                    hazard=hazard,
                    year=spec["eff_year"],
                    contaminant_id=cid,
                    contaminant_name=cname,
                    product_id=spec["product"][0],
                    product_name=spec["product"][1],
                    onto_groups=_split_groups(cname),
                    category=spec["product"][2],
                    country=country,
                    strategy=spec["strategy_label"],
                    noncompliant=nc,
                )
            ledger.maps.tally_sample(
                origin=spec["origin"] if emit_origin else None,
                destination=country,
                year=spec["eff_year"],
                strategy=spec["strategy_label"],
                hazards=(hazard,),
                n_results=spec["rps"],
                noncompliant=sample_nc,
            )

        # Duplicates sit immediately after their originals so the ordinal
        # walk assigns them the same sample; malformed copies follow.
        dup_counts: dict[int, int] = {}
        for _ in range(n_dup):
            target = rng.randrange(len(base_rows))
            dup_counts[target] = dup_counts.get(target, 0) + 1
        mal_anchors: dict[int, int] = {}
        for _ in range(n_mal):
            target = rng.randrange(len(base_rows))
            mal_anchors[target] = mal_anchors.get(target, 0) + 1
        product_col = header_index["product_id"]

        rows_written = 0
        for i, row in enumerate(base_rows):
            copies = 1 + dup_counts.get(i, 0)
            for _ in range(copies):
                self._write_row(writer, row, present)
                rows_written += 1
            for _ in range(mal_anchors.get(i, 0)):
                broken = list(row)
                broken[product_col] = None
                self._write_row(writer, broken, present)
                rows_written += 1

        assert rows_written == n_rows
        file_entry = {
            "rows_read": n_rows,
            "duplicates_removed": n_dup,
            "rows_malformed": n_mal,
            "results_emitted": n_base,
            "samples_emitted": len(samples),
            "present_counts": {k: present[k] for k in sorted(present)},
        }
        ledger.per_file[self.fplan.file_name()] = file_entry
        ledger.totals["unknown_eval_results"] = (
            ledger.totals.get("unknown_eval_results", 0) + unknown_eval_rows
        )
        return file_entry

    def _write_row(self, writer, row: list, present: dict) -> None:
        out = []
        rng = self.rng
        for cell, (kind, name) in zip(row, self.layout):
            if cell is None:
                out.append(_MISSING_WRITE_TOKENS[rng.randrange(len(_MISSING_WRITE_TOKENS))])
            else:
                present[name] += 1
                out.append(cell)
        writer.writerow(out)


def generate_corpus(plan: CorpusPlan, out_dir: "Path | str") -> GeneratedCorpus:
    """Write a corpus (files + catalogues + sidecars) and its ledger.

    Same plan, same bytes: every random draw comes from per-file seeded
    generators, and files are generated in plan order.
    """
    out_dir = Path(out_dir)
    files_dir = out_dir / "files"
    catalogue_dir = out_dir / "catalogues"
    files_dir.mkdir(parents=True, exist_ok=True)
    catalogue_dir.mkdir(parents=True, exist_ok=True)

    ledger = Ledger()
    used_keys: dict[tuple, set] = {}
    names = [f.file_name() for f in plan.files]
    if len(set(names)) != len(names):
        raise SynthError("duplicate file names in plan")

    for file_idx, fplan in enumerate(plan.files):
        partition = (fplan.hazard, fplan.country, fplan.year)
        generator = _FileGenerator(plan, fplan, file_idx, used_keys.setdefault(partition, set()))
        path = files_dir / fplan.file_name()
        if fplan.use_gzip:
            # Fixed mtime keeps gzip output byte-identical across runs.
            fh = gzip.GzipFile(path, "wb", mtime=0)
            text = io.TextIOWrapper(fh, encoding="utf-8", newline="")
        else:
            text = path.open("w", newline="", encoding="utf-8")
        with text:
            writer = csv.writer(text, lineterminator="\n")
            writer.writerow(generator.header)
            generator.generate(ledger, writer)
        if fplan.sidecar or fplan.name is not None:
            sidecar = {
                "hazard": fplan.hazard,
                "country": fplan.country,
                "year": fplan.year,
                "era": generator.era,
            }
            (files_dir / (fplan.file_name() + ".meta.json")).write_text(
                json.dumps(sidecar, indent=2, sort_keys=True) + "\n", encoding="utf-8"
            )

    ledger.finalize()

    _write_catalogues(plan, catalogue_dir)
    plan_path = out_dir / "plan.json"
    plan_path.write_text(
        json.dumps(plan.to_json_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    ledger_path = out_dir / "ledger.json"
    ledger.save(ledger_path)
    return GeneratedCorpus(out_dir, files_dir, catalogue_dir, ledger, ledger_path, plan_path)


def _write_catalogues(plan: CorpusPlan, catalogue_dir: Path) -> None:
    seen: dict[str, str] = {}
    rows = []
    for pool in plan.contaminants.values():
        for cid, cname in pool:
            if cid in seen:
                if seen[cid] != cname:
                    raise SynthError(f"contaminant id {cid} has conflicting names")
                continue
            seen[cid] = cname
            rows.append((cid, cname))
    _write_catalogue_csv(catalogue_dir / "param.csv", sorted(rows))
    _write_catalogue_csv(
        catalogue_dir / "product.csv", sorted((pid, name) for pid, name, _ in plan.products)
    )
    countries = sorted(
        {f.country for f in plan.files} | set(plan.origin_pool) | {"UNKNOWN"}
    )
    _write_catalogue_csv(catalogue_dir / "country.csv", [(c, c) for c in countries])


def _write_catalogue_csv(path: Path, rows) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(("term_id", "full_name", "era"))
        for term_id, full_name in rows:
            writer.writerow((term_id, full_name, ""))


# --------------------------------------------------------------------------
# Oracle
# --------------------------------------------------------------------------

_ORACLE_MISSING = ("na", "n/a", "null")


def _oracle_norm(value: str) -> "str | None":
    if value == "" or (len(value) <= 4 and value.lower() in _ORACLE_MISSING):
        return None
    return value


def oracle_aggregate(
    input_root: "Path | str",
    synonyms=None,
    dictionary: "GroupingDictionary | None" = None,
    param_catalogue_path: "Path | str | None" = None,
    product_catalogue_path: "Path | str | None" = None,
) -> tuple[AggregateMaps, dict[str, dict], dict[str, int]]:
    """Recompute every statistic by a naive in-memory groupby over the raw
    rows: no store, no streaming pipeline, no parallelism.

    Returns (aggregate maps, per-file counters, totals). File-order
    independence holds because files are processed in sorted manifest
    order and sample/result identity is content-derived.
    """
    from .ingest import load_synonyms  # local import keeps module deps one-way

    synonyms = synonyms or load_synonyms()
    dictionary = dictionary or load_grouping_dictionary()
    schema = default_schema()
    canonical_names = schema.canonical_names
    param_cat = (
        load_catalogue(param_catalogue_path, "PARAM") if param_catalogue_path else None
    )
    product_cat = (
        load_catalogue(product_catalogue_path, "MATRIX_FOODEX2")
        if product_catalogue_path
        else None
    )

    entries, _skipped = discover_files(input_root)
    maps = AggregateMaps()
    samples: dict[str, list] = {}
    per_file: dict[str, dict] = {}
    seen_results: set[str] = set()
    unknown_eval_total = 0

    for entry in entries:
        hazard = entry.hazard.value
        hazard_enum = entry.hazard
        counters = {
            "rows_read": 0,
            "rows_malformed": 0,
            "duplicates_removed": 0,
            "results_emitted": 0,
            "samples_emitted": 0,
        }
        present: dict[str, int] = {}
        with open_source(entry.path) as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None:
                continue
            columns: list[tuple[str, int]] = []
            resolved: dict[str, int] = {}
            for i, raw in enumerate(header):
                name = raw.strip().lstrip("﻿")
                lower = name.lower()
                canonical = lower if lower in canonical_names else synonyms.lookup(lower, entry.era)
                if canonical is not None:
                    resolved[canonical] = i
                    columns.append((canonical, i))
                else:
                    columns.append((name, i))
            for name, _ in columns:
                present[name] = 0
            ncols = len(header)

            def col(name):
                return resolved.get(name)

            i_code, i_country, i_origin = col("samp_code"), col("sampling_country"), col("origin_country")
            i_pid, i_pname = col("product_id"), col("product_full_name")
            i_date, i_year, i_strat = col("sampling_date"), col("sampling_year"), col("strategy")
            i_cid, i_cname = col("contaminant_id"), col("contaminant_full_name")
            i_val, i_loq, i_eval, i_adate = col("result_value"), col("loq"), col("eval_code"), col("analysis_date")

            ordinal = -1
            last_watched = None
            row_no = 0
            year_str = str(entry.year)
            for row in reader:
                row_no += 1
                counters["rows_read"] += 1
                if len(row) != ncols:
                    counters["rows_malformed"] += 1
                    continue
                cells = [None if v is None else _oracle_norm(v) for v in row]
                for name, i in columns:
                    if cells[i] is not None:
                        present[name] += 1
                pid = cells[i_pid] if i_pid is not None else None
                cid = cells[i_cid] if i_cid is not None else None
                country = cells[i_country] if i_country is not None else entry.country
                if pid is None or cid is None or country is None:
                    counters["rows_malformed"] += 1
                    continue
                code = cells[i_code] if i_code is not None else None
                origin = cells[i_origin] if i_origin is not None else None
                date_cell = cells[i_date] if i_date is not None else None
                year_cell = cells[i_year] if i_year is not None else None
                strat_raw = cells[i_strat] if i_strat is not None else None
                strategy = canon_text(strat_raw) if strat_raw is not None else None
                pname = cells[i_pname] if i_pname is not None else None
                if pname is None and i_pname is None and product_cat is not None:
                    term = product_cat.get(pid, entry.era)
                    pname = term.full_name if term else None
                cname = cells[i_cname] if i_cname is not None else None
                if cname is None and i_cname is None and param_cat is not None:
                    term = param_cat.get(cid, entry.era)
                    cname = term.full_name if term else None
                watched = (code, pid, pname, origin, country, year_cell, date_cell, strategy)
                if code is not None:
                    sample_id = make_key(("code", code))
                else:
                    if watched != last_watched:
                        ordinal += 1
                    sample_id = make_key(
                        ("key", country, year_str, pid, date_cell, strategy, str(ordinal))
                    )
                last_watched = watched

                value = cells[i_val] if i_val is not None else None
                loq = cells[i_loq] if i_loq is not None else None
                adate = cells[i_adate] if i_adate is not None else None
                eval_raw = cells[i_eval] if i_eval is not None else None
                eval_code = canon_text(eval_raw) if eval_raw is not None else None
                result_id = make_key((sample_id, cid, adate, value, loq, eval_code))
                if result_id in seen_results:
                    counters["duplicates_removed"] += 1
                    continue
                seen_results.add(result_id)
                counters["results_emitted"] += 1

                cls = classify_evaluation(eval_code)
                nc = cls is ComplianceClass.NON_COMPLIANT
                if eval_code is not None and cls is ComplianceClass.UNKNOWN:
                    unknown_eval_total += 1

                # Effective year: reported year wins, then the date.
                eff_year = None
                if year_cell is not None:
                    try:
                        candidate = int(year_cell)
                    except ValueError:
                        candidate = None
                    if candidate is not None and 1900 <= candidate <= 2100:
                        eff_year = candidate
                if eff_year is None and date_cell is not None:
                    try:
                        candidate = int(date_cell[:4])
                    except ValueError:
                        candidate = None
                    if candidate is not None and 1900 <= candidate <= 2100:
                        eff_year = candidate

                strategy_label = SamplingStrategy.parse(strategy).label
                maps.tally_result(
                    hazard=hazard,
                    year=eff_year,
                    contaminant_id=cid,
                    contaminant_name=cname,
                    product_id=pid,
                    product_name=pname,
                    onto_groups=_oracle_groups(cname),
                    category=dictionary.assign(pname, hazard_enum),
                    country=country,
                    strategy=strategy_label,
                    noncompliant=nc,
                )
                agg = samples.get(sample_id)
                if agg is None:
                    samples[sample_id] = [origin, country, eff_year, strategy_label, 1, nc, {hazard: 1}]
                    counters["samples_emitted"] += 1
                else:
                    agg[4] += 1
                    agg[5] = agg[5] or nc
                    agg[6][hazard] = agg[6].get(hazard, 0) + 1
        counters["present_counts"] = {k: present[k] for k in sorted(present)}
        per_file[entry.name] = counters

    for agg in samples.values():
        origin, country, eff_year, strategy_label, n_results, nc, hazards = agg
        maps.tally_sample(
            origin=origin,
            destination=country,
            year=eff_year,
            strategy=strategy_label,
            hazards=hazards.keys(),
            n_results=n_results,
            noncompliant=bool(nc),
        )

    totals = {
        "results": sum(v[0] for v in maps.hazard_totals.values()),
        "noncompliant_results": sum(v[1] for v in maps.hazard_totals.values()),
        "samples": maps.samples_total,
        "rows_read": sum(f["rows_read"] for f in per_file.values()),
        "duplicates_removed": sum(f["duplicates_removed"] for f in per_file.values()),
        "rows_malformed": sum(f["rows_malformed"] for f in per_file.values()),
        "unknown_eval_results": unknown_eval_total,
    }
    return maps, per_file, totals


def _oracle_groups(full_name: "str | None") -> tuple[str, str]:
    if not full_name:
        return ("unparsed", "unparsed")
    parts = [p.strip() for p in full_name.split("::")]
    if any(not p for p in parts):
        return ("unparsed", "unparsed")
    return (parts[0], parts[1] if len(parts) > 1 else parts[-1])
