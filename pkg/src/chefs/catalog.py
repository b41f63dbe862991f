"""Controlled terminologies: hierarchical full names, catalogues, grouping.

Contaminant and product names arrive as ``::``-separated hierarchies
("toxins::biogenic amines::cadaverine"). This module parses those paths,
loads reference catalogues, and applies the keyword-based product
grouping dictionary that folds thousands of product names into a couple
dozen categories.

Catalogues and dictionaries are immutable after load; lookups are
read-only and freely shareable across workers.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .kernels import canon_text
from .model import ChefsError, HazardCategory


class CatalogError(ChefsError):
    pass


class MalformedPathError(CatalogError):
    """A full name was empty or contained an empty segment."""


class DuplicateTermError(CatalogError):
    """Two catalogue rows share a term_id within the same (catalogue, era)."""


CATALOGUE_KINDS = ("PARAM", "MATRIX_FOODEX", "MATRIX_FOODEX2", "COUNTRY")

PATH_SEPARATOR = "::"


@dataclass(frozen=True, slots=True)
class OntologyPath:
    """Parsed hierarchical name; joining segments with '::' reproduces the
    canonical full name."""

    segments: tuple[str, ...]

    @property
    def full_name(self) -> str:
        return PATH_SEPARATOR.join(self.segments)

    @property
    def depth(self) -> int:
        return len(self.segments)

    @property
    def leaf(self) -> str:
        return self.segments[-1]


def parse_param_path(full_name: str) -> OntologyPath:
    """Split a full name on '::', trimming each segment.

    Raises MalformedPathError for empty input or any empty segment, naming
    the offending term.
    """
    if full_name is None or not full_name.strip():
        raise MalformedPathError("empty full name")
    segments = tuple(seg.strip() for seg in full_name.split(PATH_SEPARATOR))
    if any(not seg for seg in segments):
        raise MalformedPathError(f"empty segment in full name: {full_name!r}")
    return OntologyPath(segments)


@dataclass(frozen=True, slots=True)
class OntologyGroup:
    """Group label at a requested hierarchy level.

    ``truncated`` marks paths shorter than the requested level, where the
    deepest available segment stands in for the missing one.
    """

    name: str
    truncated: bool = False


def ontology_group(path: OntologyPath, level: int) -> OntologyGroup:
    """Return the 1-based ``level``-th segment, or the deepest available
    segment flagged as truncated."""
    if level < 1:
        raise ValueError(f"level must be >= 1, got {level}")
    if level <= path.depth:
        return OntologyGroup(path.segments[level - 1])
    return OntologyGroup(path.leaf, truncated=True)


@dataclass(frozen=True, slots=True)
class CatalogueTerm:
    term_id: str
    full_name: str
    catalogue: str
    era: "str | None" = None


class Catalogue:
    """One loaded controlled terminology, indexed by (term_id, era)."""

    def __init__(self, kind: str, terms: Iterable[CatalogueTerm]):
        if kind not in CATALOGUE_KINDS:
            raise CatalogError(f"unknown catalogue kind: {kind!r}")
        self.kind = kind
        self._terms: dict[tuple[str, "str | None"], CatalogueTerm] = {}
        for term in terms:
            key = (term.term_id, term.era)
            if key in self._terms:
                raise DuplicateTermError(
                    f"duplicate term {term.term_id!r} for era {term.era or 'any'} in {kind}"
                )
            self._terms[key] = term

    def __len__(self) -> int:
        return len(self._terms)

    def terms(self) -> tuple[CatalogueTerm, ...]:
        return tuple(self._terms.values())

    def get(self, term_id: str, era: "str | None" = None) -> "CatalogueTerm | None":
        """Era-specific entry first, then the era-agnostic one."""
        if era is not None:
            term = self._terms.get((term_id, era))
            if term is not None:
                return term
        return self._terms.get((term_id, None))


def load_catalogue(path: "Path | str", kind: str) -> Catalogue:
    """Load a catalogue CSV (header: term_id,full_name,era).

    Rejects duplicate term ids within (catalogue, era) and malformed rows,
    reporting the offending row number.
    """
    path = Path(path)
    terms: list[CatalogueTerm] = []
    with path.open(newline="", encoding="utf-8-sig") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header[:2]] != ["term_id", "full_name"]:
            raise CatalogError(f"{path.name}: expected header term_id,full_name,era")
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) < 2 or not row[0].strip() or not row[1].strip():
                raise CatalogError(f"{path.name}: malformed row {lineno}")
            term_id = row[0].strip()
            full_name = row[1].strip()
            era = row[2].strip() if len(row) > 2 and row[2].strip() else None
            if kind != "COUNTRY":
                # Validate the '::' structure up front so bad terms fail loudly.
                try:
                    parse_param_path(full_name)
                except MalformedPathError as exc:
                    raise CatalogError(f"{path.name}: row {lineno}: {exc}") from exc
            terms.append(CatalogueTerm(term_id, full_name, kind, era))
    return Catalogue(kind, terms)


@dataclass(frozen=True, slots=True)
class GroupingRule:
    order: int
    pattern: str  # canonicalized; "*" is the terminal catch-all
    scope: str  # ALL | CC | PEST | VMPR
    category: str


class GroupingDictionary:
    """Ordered keyword rules mapping product full names to categories.

    Matching is case-insensitive: exact whole-segment matches over all
    rules first, then substring-within-segment as a fallback; within each
    phase the lowest rule order wins. A terminal catch-all maps everything
    left over to its category (conventionally "Others").
    """

    def __init__(self, rules: Sequence[GroupingRule]):
        ordered = sorted(rules, key=lambda r: r.order)
        self.rules: tuple[GroupingRule, ...] = tuple(r for r in ordered if r.pattern != "*")
        catch_alls = [r for r in ordered if r.pattern == "*"]
        if not catch_alls:
            raise CatalogError("grouping dictionary lacks a terminal '*' catch-all rule")
        self.catch_all: str = catch_alls[-1].category
        self.categories: tuple[str, ...] = tuple(
            dict.fromkeys([r.category for r in ordered])
        )
        self._exact: dict[str, list[GroupingRule]] = {}
        for rule in self.rules:
            self._exact.setdefault(rule.pattern, []).append(rule)
        self._cache: dict[tuple[str, "str | None"], str] = {}

    def assign(self, full_name: "str | None", hazard: "HazardCategory | None" = None) -> str:
        """Deterministic single category for a product full name."""
        hazard_code = hazard.value if hazard is not None else None
        key = (full_name or "", hazard_code)
        hit = self._cache.get(key)
        if hit is None:
            hit = self._assign_uncached(full_name, hazard_code)
            self._cache[key] = hit
        return hit

    def _applies(self, rule: GroupingRule, hazard_code: "str | None") -> bool:
        return rule.scope == "ALL" or rule.scope == hazard_code

    def _assign_uncached(self, full_name: "str | None", hazard_code: "str | None") -> str:
        if not full_name:
            return self.catch_all
        try:
            segments = [canon_text(s) for s in parse_param_path(full_name).segments]
        except MalformedPathError:
            segments = [canon_text(full_name)]
        best: "GroupingRule | None" = None
        for seg in segments:
            for rule in self._exact.get(seg, ()):
                if self._applies(rule, hazard_code) and (best is None or rule.order < best.order):
                    best = rule
        if best is not None:
            return best.category
        for rule in self.rules:
            if not self._applies(rule, hazard_code):
                continue
            for seg in segments:
                if rule.pattern in seg:
                    return rule.category
        return self.catch_all


def assign_product_category(
    full_name: str,
    hazard: "HazardCategory | None",
    dictionary: GroupingDictionary,
) -> str:
    """First-match-wins category assignment; unmatched names land in the
    catch-all category."""
    return dictionary.assign(full_name, hazard)


def load_grouping_dictionary(path: "Path | str | None" = None) -> GroupingDictionary:
    """Load a grouping dictionary CSV (header: order,pattern,scope,category);
    None loads the packaged default."""
    if path is None:
        from importlib import resources

        source = resources.files("chefs.data").joinpath("grouping_dictionary.csv")
        text = source.read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    rules: list[GroupingRule] = []
    reader = csv.DictReader(text.splitlines())
    expected = {"order", "pattern", "scope", "category"}
    if reader.fieldnames is None or not expected.issubset(reader.fieldnames):
        raise CatalogError("grouping dictionary: expected header order,pattern,scope,category")
    for lineno, row in enumerate(reader, start=2):
        try:
            order = int(row["order"])
        except (TypeError, ValueError):
            raise CatalogError(f"grouping dictionary: bad order at row {lineno}") from None
        scope = (row["scope"] or "ALL").strip().upper()
        if scope not in ("ALL", *[h.value for h in HazardCategory]):
            raise CatalogError(f"grouping dictionary: bad scope {scope!r} at row {lineno}")
        pattern = row["pattern"].strip()
        if not pattern:
            raise CatalogError(f"grouping dictionary: empty pattern at row {lineno}")
        if pattern != "*":
            pattern = canon_text(pattern)
        rules.append(GroupingRule(order, pattern, scope, row["category"].strip()))
    return GroupingDictionary(rules)
