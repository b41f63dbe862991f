"""Ontology parsing, catalogue loading and product-category grouping."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from chefs.catalog import (
    CatalogError,
    DuplicateTermError,
    GroupingDictionary,
    GroupingRule,
    MalformedPathError,
    assign_product_category,
    load_catalogue,
    load_grouping_dictionary,
    ontology_group,
    parse_param_path,
)
from chefs.model import HazardCategory

CC = HazardCategory.CHEMICAL_CONTAMINANTS


class TestParsePath:
    def test_three_segments(self):
        path = parse_param_path("toxins::biogenic amines::cadaverine")
        assert path.segments == ("toxins", "biogenic amines", "cadaverine")

    def test_single_segment(self):
        assert parse_param_path("lead (pb)").segments == ("lead (pb)",)

    def test_empty_middle_segment_rejected(self):
        with pytest.raises(MalformedPathError):
            parse_param_path("a::::b")

    def test_empty_input_rejected(self):
        with pytest.raises(MalformedPathError):
            parse_param_path("")
        with pytest.raises(MalformedPathError):
            parse_param_path("   ")

    def test_segments_trimmed(self):
        path = parse_param_path("toxins :: biogenic amines::cadaverine ")
        assert path.segments == ("toxins", "biogenic amines", "cadaverine")

    @given(
        st.lists(
            st.text(
                alphabet=st.characters(blacklist_characters=":", blacklist_categories=("Cs", "Zs", "Cc")),
                min_size=1,
                max_size=10,
            ),
            min_size=1,
            max_size=5,
        )
    )
    def test_join_of_parse_is_identity_on_canonical_names(self, segments):
        full = "::".join(segments)
        assert parse_param_path(full).full_name == full


class TestOntologyGroup:
    def test_level_one(self):
        path = parse_param_path("toxins::biogenic amines::cadaverine")
        assert ontology_group(path, 1).name == "toxins"
        assert not ontology_group(path, 1).truncated

    def test_level_two(self):
        path = parse_param_path("toxins::biogenic amines::cadaverine")
        assert ontology_group(path, 2).name == "biogenic amines"

    def test_truncation_flagged(self):
        group = ontology_group(parse_param_path("lead (pb)"), 2)
        assert group.name == "lead (pb)"
        assert group.truncated

    def test_level_must_be_positive(self):
        with pytest.raises(ValueError):
            ontology_group(parse_param_path("a"), 0)


class TestCatalogue:
    def test_load_three_rows(self, tmp_path):
        path = tmp_path / "params.csv"
        path.write_text(
            "term_id,full_name,era\n"
            "RF-1,toxins::biogenic amines::cadaverine,\n"
            "RF-2,lead (pb),SSD1\n"
            "RF-2,chemical elements::lead (pb),SSD2\n"
        )
        catalogue = load_catalogue(path, "PARAM")
        assert len(catalogue) == 3
        assert catalogue.get("RF-2", "SSD2").full_name == "chemical elements::lead (pb)"
        assert catalogue.get("RF-1", "SSD1").full_name == "toxins::biogenic amines::cadaverine"

    def test_duplicate_term_rejected(self, tmp_path):
        path = tmp_path / "params.csv"
        path.write_text("term_id,full_name,era\nRF-1,a::b,\nRF-1,a::c,\n")
        with pytest.raises(DuplicateTermError):
            load_catalogue(path, "PARAM")

    def test_malformed_row_reports_line(self, tmp_path):
        path = tmp_path / "params.csv"
        path.write_text("term_id,full_name,era\nRF-1,a::b,\n,missing-id,\n")
        with pytest.raises(CatalogError) as err:
            load_catalogue(path, "PARAM")
        assert "row 3" in str(err.value)

    def test_cadaverine_level_one_group(self, tmp_path):
        path = tmp_path / "params.csv"
        path.write_text("term_id,full_name,era\nRF-1,toxins::biogenic amines::cadaverine,\n")
        term = load_catalogue(path, "PARAM").get("RF-1")
        assert ontology_group(parse_param_path(term.full_name), 1).name == "toxins"

    def test_unknown_kind_rejected(self):
        from chefs.catalog import Catalogue

        with pytest.raises(CatalogError):
            Catalogue("NOT_A_KIND", [])


@pytest.fixture(scope="module")
def dictionary():
    return load_grouping_dictionary()


#: (full name, expected category) for rows of the packaged dictionary.
CATEGORY_FIXTURES = [
    ("mtx::all lists::food::eggs and egg products::whole eggs", "Eggs and Egg products"),
    ("matrix::feed", "Feed"),
    ("mtx::all lists::food::alcoholic beverages::red wine", "Alcoholic and Nonalcoholic Beverages"),
    ("mtx::all lists::food::animal and vegetable fats and oils and primary derivatives thereof::olive oil", "animal and vegetable fats and oils"),
    ("matrix::bovine meat::steak", "Animal Meat and Tissues"),
    ("matrix::honey and other apicultural products::honey", "Apiculture Products"),
    ("mtx::all lists::food::pasta and similar products::spaghetti", "Bakery and Starchy Products"),
    ("matrix::Other groups for hierarchies::game mammal meat", "Others"),
    ("mtx::all lists::food::maize/corn", "Cereals and Grains"),
    ("mtx::all lists::food::composite dishes::pizza", "Composites and Mixed Foods"),
    ("mtx::liquid egg products", "Eggs and Egg products"),
    ("matrix::non-food matrices::animal drinking water", "Food Matrices/ Non-Food / Technical / Simulation / Facet"),
    ("mtx::all lists::food::pome fruits::apples", "Fruits"),
    ("mtx::meat and dairy imitates::vegan cheese imitate", "Imitations and Substitutes"),
    ("mtx::all lists::food::infant formulae/follow-on formulae::formula powder", "Infant and Special Diet Foods"),
    ("matrix::leaf vegetables, herbs and edible flowers::spinach", "Leafy Vegetables, Herbs and Flowers"),
    ("mtx::all lists::food::pulses (dry)::lentils", "Legumes and Pulses"),
    ("mtx::all lists::food::fungi, mosses and lichens::dried fungi", "Microorganisms, Algae, Fungi, Moss, Lichen and Derived Materials"),
    ("mtx::all lists::food::cheese::gouda", "Milk and Dairy Products"),
    ("mtx::all lists::food::tree nuts::pistachios", "Nuts and Seeds"),
    ("mtx::all lists::food::smoked fish::smoked salmon", "Seafood and Fish Products"),
    ("mtx::all lists::food::spices, dried::black pepper, dried", "Spices, Condiments and Additives"),
    ("mtx::all lists::food::sugars and similar::white sugar", "Sugars and Sweeteners"),
    ("matrix::bulb vegetables::onions", "Vegetables (Non-Leafy)"),
]


class TestGroupingDictionary:
    def test_dictionary_has_23_categories_plus_catch_all(self, dictionary):
        # 23 category labels; "Others" doubles as the catch-all target.
        assert len(set(dictionary.categories)) == 23
        assert dictionary.catch_all == "Others"

    @pytest.mark.parametrize("full_name,expected", CATEGORY_FIXTURES)
    def test_fixture_assignments(self, dictionary, full_name, expected):
        assert assign_product_category(full_name, CC, dictionary) == expected

    def test_worked_example(self, dictionary):
        assert (
            assign_product_category(
                "mtx::all lists::food::eggs and egg products::whole eggs", None, dictionary
            )
            == "Eggs and Egg products"
        )

    def test_unmatched_lands_in_catch_all(self, dictionary):
        assert (
            assign_product_category("mtx::completely novel unclassifiable item", CC, dictionary)
            == "Others"
        )

    def test_substring_fallback_within_segment(self, dictionary):
        # No exact segment match; "cheese" matches inside the leaf segment.
        assert assign_product_category("mtx::processed cheese spread", CC, dictionary) == (
            "Milk and Dairy Products"
        )

    def test_case_insensitive(self, dictionary):
        assert assign_product_category("MATRIX::FEED", CC, dictionary) == "Feed"

    def test_deterministic(self, dictionary):
        name = "mtx::all lists::food::cereals::wheat grain"
        first = assign_product_category(name, CC, dictionary)
        assert all(
            assign_product_category(name, CC, dictionary) == first for _ in range(10)
        )

    def test_scope_restricts_rule(self):
        rules = [
            GroupingRule(1, "feed", "VMPR", "Feed"),
            GroupingRule(99, "*", "ALL", "Others"),
        ]
        dictionary = GroupingDictionary(rules)
        assert dictionary.assign("matrix::feed", HazardCategory.VMPR) == "Feed"
        assert dictionary.assign("matrix::feed", CC) == "Others"

    def test_first_match_wins_by_order(self):
        rules = [
            GroupingRule(2, "apples", "ALL", "Late"),
            GroupingRule(1, "pome fruits", "ALL", "Early"),
            GroupingRule(99, "*", "ALL", "Others"),
        ]
        dictionary = GroupingDictionary(rules)
        assert dictionary.assign("mtx::pome fruits::apples", CC) == "Early"

    def test_missing_catch_all_rejected(self):
        with pytest.raises(CatalogError):
            GroupingDictionary([GroupingRule(1, "feed", "ALL", "Feed")])
