"""Domain model for harmonized food-safety monitoring data.

Every monitoring file carries long-format rows: one analytical result per
row, with the parent sample's fields repeated across adjacent rows. This
module defines the shared vocabulary for that data - hazard categories,
evaluation codes and their compliance classification, sampling strategies,
and the sample / analytical-result pair - plus the year-extraction rule
used by all per-year analytics.

All types are immutable after construction and safe to share across
parallel workers; classification and year extraction are pure functions.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from datetime import date
from decimal import Decimal, InvalidOperation
from typing import Final, Mapping

from .kernels import canon_text


class ChefsError(Exception):
    """Base class for all errors raised by this package."""


class YearOutOfRangeError(ChefsError):
    """A sampling year fell outside the plausible [1900, 2100] window."""


MIN_YEAR: Final = 1900
MAX_YEAR: Final = 2100

#: Sentinel year for samples with neither a reported year nor a sampling
#: date. Undated samples stay in overall totals but are excluded from
#: per-year analytics.
UNDATED: Final = None

#: First-class origin code for samples whose origin country is unknown.
UNKNOWN_COUNTRY: Final = "UNKNOWN"


class HazardCategory(enum.Enum):
    """The three contaminant groups every file and result is tagged with."""

    CHEMICAL_CONTAMINANTS = "CC"
    PESTICIDE_RESIDUES = "PEST"
    VMPR = "VMPR"

    @classmethod
    def from_code(cls, code: str) -> "HazardCategory":
        try:
            return cls(code.upper())
        except ValueError:
            raise ChefsError(f"unknown hazard category code: {code!r}") from None

    @property
    def code(self) -> str:
        return self.value


HAZARD_CODES: Final = tuple(h.value for h in HazardCategory)


@dataclass(frozen=True, slots=True)
class EvaluationCode:
    """Canonicalized evaluation-code text.

    Canonical form is lowercased, trimmed, with internal whitespace runs
    collapsed to single spaces. Canonicalization is idempotent.
    """

    text: str

    @classmethod
    def from_raw(cls, raw: str) -> "EvaluationCode":
        return cls(canon_text(raw))

    def __str__(self) -> str:
        return self.text


class ComplianceClass(enum.Enum):
    """Partition of evaluation codes; every code maps to exactly one class."""

    NON_COMPLIANT = "NonCompliant"
    COMPLIANT = "Compliant"
    NOT_EVALUATED = "NotEvaluated"
    NOT_DETECTED = "NotDetected"
    OTHER_KNOWN = "OtherKnown"
    UNKNOWN = "Unknown"


# The eleven known evaluation codes, in canonical form. "detected" counts
# as non-compliant by definition of the reporting vocabulary, surprising
# as that reads; see the README glossary.
KNOWN_EVALUATION_CODES: Final = (
    "less than or equal to max permissible quantities",
    "result not evaluated",
    "not detected",
    "compliant",
    "compliant due to measurement uncertainty",
    "greater than max permissible quantities",
    "detected",
    "acceptable",
    "satisfactory",
    "non-compliant",
    "unsatisfactory",
)

NON_COMPLIANT_CODES: Final = frozenset(
    {
        "greater than max permissible quantities",
        # Long spelling occurs in some sources alongside the short form.
        "greater than maximum permissible quantities",
        "non-compliant",
        "detected",
        "unsatisfactory",
    }
)

_CLASS_BY_CODE: Final[dict[str, ComplianceClass]] = {
    "less than or equal to max permissible quantities": ComplianceClass.COMPLIANT,
    "less than or equal to maximum permissible quantities": ComplianceClass.COMPLIANT,
    "compliant": ComplianceClass.COMPLIANT,
    "compliant due to measurement uncertainty": ComplianceClass.COMPLIANT,
    "result not evaluated": ComplianceClass.NOT_EVALUATED,
    "not detected": ComplianceClass.NOT_DETECTED,
    "acceptable": ComplianceClass.OTHER_KNOWN,
    "satisfactory": ComplianceClass.OTHER_KNOWN,
}
for _code in NON_COMPLIANT_CODES:
    _CLASS_BY_CODE[_code] = ComplianceClass.NON_COMPLIANT
del _code


def classify_evaluation(code: "EvaluationCode | str | None") -> ComplianceClass:
    """Map a canonicalized evaluation code to its compliance class.

    Total function: anything outside the known vocabulary (including the
    empty string and absent values) classifies as UNKNOWN, which ingest
    surfaces as a vocabulary-gap counter rather than an error.
    """
    if code is None:
        return ComplianceClass.UNKNOWN
    text = code.text if isinstance(code, EvaluationCode) else code
    return _CLASS_BY_CODE.get(text, ComplianceClass.UNKNOWN)


class SamplingStrategy(enum.Enum):
    """How a sample was selected for testing."""

    OBJECTIVE = "objective sampling"
    SELECTIVE = "selective sampling"
    SUSPECT = "suspect sampling"
    CONVENIENT = "convenient sampling"
    OTHER = "other"
    NOT_SPECIFIED = "not specified"

    @classmethod
    def parse(cls, text: "str | None") -> "SamplingStrategy":
        """Parse canonicalized strategy text; unrecognized input maps to
        NOT_SPECIFIED (callers count those occurrences separately)."""
        if text is None:
            return cls.NOT_SPECIFIED
        return _STRATEGY_BY_TEXT.get(text, cls.NOT_SPECIFIED)

    @classmethod
    def is_recognized(cls, text: str) -> bool:
        return text in _STRATEGY_BY_TEXT

    @property
    def label(self) -> str:
        return self.value


_STRATEGY_BY_TEXT: Final[dict[str, SamplingStrategy]] = {
    "objective": SamplingStrategy.OBJECTIVE,
    "objective sampling": SamplingStrategy.OBJECTIVE,
    "objective (random) sampling": SamplingStrategy.OBJECTIVE,
    "selective": SamplingStrategy.SELECTIVE,
    "selective sampling": SamplingStrategy.SELECTIVE,
    "selective (risk-based) sampling": SamplingStrategy.SELECTIVE,
    "suspect": SamplingStrategy.SUSPECT,
    "suspect sampling": SamplingStrategy.SUSPECT,
    "convenient": SamplingStrategy.CONVENIENT,
    "convenient sampling": SamplingStrategy.CONVENIENT,
    "other": SamplingStrategy.OTHER,
    "not specified": SamplingStrategy.NOT_SPECIFIED,
}


def extract_year(sample_date: "date | None", reported_year: "int | None") -> "int | None":
    """Resolve the effective sampling year.

    The reported year wins when present; otherwise the year component of
    the sampling date; otherwise UNDATED (None).

    Raises YearOutOfRangeError when the winning year falls outside
    [1900, 2100]; callers treat that as malformed input and may retry
    with the remaining source.
    """
    if reported_year is not None:
        if not MIN_YEAR <= reported_year <= MAX_YEAR:
            raise YearOutOfRangeError(f"reported year {reported_year} outside [{MIN_YEAR}, {MAX_YEAR}]")
        return reported_year
    if sample_date is not None:
        year = sample_date.year
        if not MIN_YEAR <= year <= MAX_YEAR:
            raise YearOutOfRangeError(f"date year {year} outside [{MIN_YEAR}, {MAX_YEAR}]")
        return year
    return UNDATED


def parse_iso_date(text: "str | None") -> "date | None":
    """Best-effort ISO-8601 date parse; None for absent or unparsable text."""
    if not text:
        return None
    try:
        return date.fromisoformat(text)
    except ValueError:
        return None


def parse_decimal(text: "str | None") -> "Decimal | None":
    """Best-effort exact decimal parse; None for absent or unparsable text."""
    if not text:
        return None
    try:
        return Decimal(text)
    except InvalidOperation:
        return None


def effective_year(year_text: "str | None", date_text: "str | None") -> "int | None":
    """Lenient year resolution from stored cell text.

    Applies the extract_year precedence, demoting out-of-range or
    unparsable candidates instead of raising. Used on read paths where
    malformed values were already counted at ingest time.
    """
    if year_text:
        try:
            year = int(year_text)
        except ValueError:
            year = None
        if year is not None and MIN_YEAR <= year <= MAX_YEAR:
            return year
    if date_text:
        parsed = parse_iso_date(date_text)
        if parsed is not None and MIN_YEAR <= parsed.year <= MAX_YEAR:
            return parsed.year
    return UNDATED


@dataclass(frozen=True, slots=True)
class Sample:
    """One physical food/feed item collected for testing.

    Parent of 1..n analytical results. ``extra`` holds the sparse
    remaining sample variables (e.g. the reporting country's sample code)
    keyed by canonical or source column name.
    """

    sample_id: str
    product_id: "str | None"
    product_full_name: "str | None"
    origin_country: "str | None"
    sampling_country: "str | None"
    sampling_year: "int | None"
    sampling_date: "date | None"
    strategy: SamplingStrategy
    hazard_categories: frozenset[HazardCategory] = frozenset()
    extra: Mapping[str, str] = field(default_factory=dict)

    @classmethod
    def from_cells(
        cls,
        sample_id: str,
        cells: Mapping[str, "str | None"],
        hazards: "frozenset[HazardCategory] | None" = None,
    ) -> "Sample":
        """Build the parsed view of a harmonized sample-cell mapping."""
        year = effective_year(cells.get("sampling_year"), cells.get("sampling_date"))
        extra = {
            k: v
            for k, v in cells.items()
            if v is not None and k not in _SAMPLE_PARSED_CELLS
        }
        return cls(
            sample_id=sample_id,
            product_id=cells.get("product_id"),
            product_full_name=cells.get("product_full_name"),
            origin_country=cells.get("origin_country"),
            sampling_country=cells.get("sampling_country"),
            sampling_year=year,
            sampling_date=parse_iso_date(cells.get("sampling_date")),
            strategy=SamplingStrategy.parse(cells.get("strategy")),
            hazard_categories=hazards or frozenset(),
            extra=extra,
        )


_SAMPLE_PARSED_CELLS: Final = frozenset(
    {
        "product_id",
        "product_full_name",
        "origin_country",
        "sampling_country",
        "sampling_year",
        "sampling_date",
        "strategy",
    }
)


@dataclass(frozen=True, slots=True)
class AnalyticalResult:
    """One measurement of one contaminant in one sample.

    ``result_value`` and ``loq`` are parsed decimals; the exact source
    text is preserved in ``result_value_text`` / ``loq_text`` (no unit
    conversion is ever performed).
    """

    result_id: str
    sample_id: str
    contaminant_id: "str | None"
    contaminant_full_name: "str | None"
    hazard_category: HazardCategory
    result_value: "Decimal | None"
    result_value_text: "str | None"
    loq: "Decimal | None"
    loq_text: "str | None"
    eval_code: EvaluationCode
    analysis_date: "date | None"
    extra: Mapping[str, str] = field(default_factory=dict)

    @property
    def compliance(self) -> ComplianceClass:
        return classify_evaluation(self.eval_code)

    @classmethod
    def from_cells(
        cls,
        result_id: str,
        sample_id: str,
        cells: Mapping[str, "str | None"],
        hazard: HazardCategory,
    ) -> "AnalyticalResult":
        extra = {
            k: v
            for k, v in cells.items()
            if v is not None and k not in _RESULT_PARSED_CELLS
        }
        return cls(
            result_id=result_id,
            sample_id=sample_id,
            contaminant_id=cells.get("contaminant_id"),
            contaminant_full_name=cells.get("contaminant_full_name"),
            hazard_category=hazard,
            result_value=parse_decimal(cells.get("result_value")),
            result_value_text=cells.get("result_value"),
            loq=parse_decimal(cells.get("loq")),
            loq_text=cells.get("loq"),
            eval_code=EvaluationCode(cells.get("eval_code") or ""),
            analysis_date=parse_iso_date(cells.get("analysis_date")),
            extra=extra,
        )


_RESULT_PARSED_CELLS: Final = frozenset(
    {
        "contaminant_id",
        "contaminant_full_name",
        "result_value",
        "loq",
        "eval_code",
        "analysis_date",
    }
)
