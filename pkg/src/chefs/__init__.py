"""CHEFS: batch ETL engine and analytics toolkit for consolidated European
food-safety monitoring data.

Heterogeneous long-format monitoring files (one analytical result per row,
sample fields repeated) are harmonized into a partitioned sample/result
store with a core/rest variable split, validated by round-trip comparison
against the sources, and aggregated into the full descriptive-statistics
suite: yearly trends, contaminant/product cross tables, ontology and
category groupings, country statistics, and origin-to-sampling trade
links.
"""

from .aggregates import AggregateMaps, maps_diff
from .catalog import (
    Catalogue,
    CatalogueTerm,
    GroupingDictionary,
    MalformedPathError,
    OntologyPath,
    assign_product_category,
    load_catalogue,
    load_grouping_dictionary,
    ontology_group,
    parse_param_path,
)
from .ingest import (
    ColumnMapping,
    FileManifestEntry,
    IngestStats,
    dedup,
    discover_files,
    ingest_file,
    load_synonyms,
    make_ids,
    resolve_columns,
)
from .kernels import IMPLEMENTATION as KERNEL_IMPLEMENTATION
from .model import (
    UNDATED,
    UNKNOWN_COUNTRY,
    AnalyticalResult,
    ComplianceClass,
    EvaluationCode,
    HazardCategory,
    Sample,
    SamplingStrategy,
    classify_evaluation,
    extract_year,
)
from .pipeline import RunConfig, run_ingest, run_validate
from .store import Partition, Store, read_selection, round_trip_validate, write_partition
from .synth import CorpusPlan, Ledger, default_plan, generate_corpus, oracle_aggregate

__version__ = "0.1.0"
