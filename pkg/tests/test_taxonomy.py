import io
import math
import random

import pytest

from semtax.errors import (
    CycleError,
    DanglingLinkError,
    DuplicateIdError,
    MultipleRootsError,
    UnknownCategoryError,
    UnknownConceptError,
)
from semtax.synth import random_taxonomy
from semtax.taxonomy import (
    concept_count,
    information_content,
    msca,
    parse_taxonomy,
    sim_lin,
    sim_page,
    sim_pirro_seco,
)

from oracles import brute_ic, brute_msca, brute_sim_page, links


def ic(s, n):
    return 1.0 - math.log(1 + s) / math.log(1 + n)


class TestLoad:
    def test_toy_fixture_shape(self, toy_tax):
        assert len(toy_tax.category_labels) == 6
        assert len(toy_tax.concepts) == 7
        assert toy_tax.root == "R"

    def test_cycle_detected(self):
        text = "C\tR\tRoot\t\nC\tA\tA\tR,A1\nC\tA1\tA1\tA\nP\tc1\tA\tx\n"
        with pytest.raises(CycleError):
            parse_taxonomy(io.StringIO(text))

    def test_dangling_concept_link(self):
        text = "C\tR\tRoot\t\nP\tc1\tZ\tx\n"
        with pytest.raises(DanglingLinkError) as exc:
            parse_taxonomy(io.StringIO(text))
        assert "Z" in str(exc.value)

    def test_multiple_roots(self):
        text = "C\tR\tRoot\t\nC\tS\tOther\t\n"
        with pytest.raises(MultipleRootsError):
            parse_taxonomy(io.StringIO(text))

    def test_duplicate_ids(self):
        text = "C\tR\tRoot\t\nC\tR\tRoot2\tR\n"
        with pytest.raises(DuplicateIdError):
            parse_taxonomy(io.StringIO(text))

    def test_labels_case_folded(self, toy_tax):
        assert "black hole" in toy_tax.concepts["c3"].labels


class TestConceptCount:
    def test_root_covers_all(self, toy_tax):
        assert concept_count(toy_tax, "R") == 7

    def test_inner_category(self, toy_tax):
        # exhaustive descendant enumeration: {c1, c2, c3, c4}
        assert concept_count(toy_tax, "A") == 4

    def test_leaf(self, toy_tax):
        assert concept_count(toy_tax, "A2") == 1

    def test_unknown_category(self, toy_tax):
        with pytest.raises(UnknownCategoryError):
            concept_count(toy_tax, "nope")


class TestInformationContent:
    def test_root_is_zero(self, toy_tax):
        assert information_content(toy_tax, "R") == 0.0

    def test_category_b(self, toy_tax):
        # s_B=3, N=7: 1 - log4/log8 = 1/3 exactly
        got = information_content(toy_tax, "B")
        assert got == pytest.approx(1 - math.log(4) / math.log(8), abs=1e-12)
        assert got == pytest.approx(1 / 3, abs=1e-12)

    def test_empty_category_max(self):
        text = "C\tR\tRoot\t\nC\tE\tEmpty\tR\nP\tc1\tR\tx\n"
        tax = parse_taxonomy(io.StringIO(text))
        assert information_content(tax, "E") == pytest.approx(1.0)

    def test_base_invariance(self, toy_tax):
        for k in toy_tax.category_labels:
            s = concept_count(toy_tax, k)
            base10 = 1 - math.log10(1 + s) / math.log10(8)
            assert information_content(toy_tax, k) == pytest.approx(base10, abs=1e-12)


class TestMsca:
    def test_siblings(self, toy_tax):
        assert msca(toy_tax, "A1", "A2") == "A"

    def test_cross_branch(self, toy_tax):
        assert msca(toy_tax, "A1", "B1") == "R"

    def test_self(self, toy_tax):
        assert msca(toy_tax, "B1", "B1") == "B1"

    def test_matches_brute_force(self, toy_tax):
        parents, concept_cats = links(toy_tax)
        cats = sorted(toy_tax.category_labels)
        for k1 in cats:
            for k2 in cats:
                assert msca(toy_tax, k1, k2) == brute_msca(parents, concept_cats, k1, k2)


class TestSimilarities:
    def test_lin_siblings(self, toy_tax):
        ic_a, ic_a1, ic_a2 = ic(4, 7), ic(2, 7), ic(1, 7)
        expected = 2 * ic_a / (ic_a1 + ic_a2)
        got = sim_lin(toy_tax, "A1", "A2")
        assert got == pytest.approx(expected, abs=1e-12)
        assert round(got, 3) == 0.397

    def test_lin_meets_at_root(self, toy_tax):
        assert sim_lin(toy_tax, "A1", "B1") == 0.0

    def test_lin_identical(self, toy_tax):
        assert sim_lin(toy_tax, "A1", "A1") == pytest.approx(1.0)

    def test_lin_root_pair(self, toy_tax):
        assert sim_lin(toy_tax, "R", "R") == 1.0

    def test_pirro_seco_siblings(self, toy_tax):
        ic_a, ic_a1, ic_a2 = ic(4, 7), ic(2, 7), ic(1, 7)
        expected = (3 * ic_a - ic_a1 - ic_a2 + 2) / 3
        got = sim_pirro_seco(toy_tax, "A1", "A2")
        assert got == pytest.approx(expected, abs=1e-12)
        assert round(got, 3) == 0.513

    def test_pirro_seco_cross_branch(self, toy_tax):
        ic_a1, ic_b1 = ic(2, 7), ic(2, 7)
        expected = (0 - ic_a1 - ic_b1 + 2) / 3
        assert sim_pirro_seco(toy_tax, "A1", "B1") == pytest.approx(expected, abs=1e-12)

    def test_pirro_seco_identical_max_ic(self):
        text = "C\tR\tRoot\t\nC\tE\tE\tR\nP\tc1\tR\tx\n"
        tax = parse_taxonomy(io.StringIO(text))
        assert sim_pirro_seco(tax, "E", "E") == pytest.approx(1.0)


class TestSimPage:
    def test_single_pair(self, toy_tax):
        assert sim_page(toy_tax, "c1", "c3") == pytest.approx(
            sim_lin(toy_tax, "A1", "A2")
        )

    def test_self_is_one(self, toy_tax):
        assert sim_page(toy_tax, "c1", "c1") == pytest.approx(1.0)

    def test_root_only_overlap(self, toy_tax):
        assert sim_page(toy_tax, "c1", "c5") == 0.0

    def test_unknown_concept(self, toy_tax):
        with pytest.raises(UnknownConceptError):
            sim_page(toy_tax, "c1", "nope")

    def test_matches_double_loop(self, toy_tax):
        parents, concept_cats = links(toy_tax)
        sim = lambda k1, k2: sim_lin(toy_tax, k1, k2)
        for p1 in toy_tax.concepts:
            for p2 in toy_tax.concepts:
                assert sim_page(toy_tax, p1, p2) == pytest.approx(
                    brute_sim_page(parents, concept_cats, sim, p1, p2)
                )


class TestRandomDagProperties:
    def test_ic_and_msca_properties(self):
        for seed in range(30):
            rng = random.Random(seed)
            tax = random_taxonomy(rng, max_categories=20, max_concepts=40)
            parents, concept_cats = links(tax)
            assert information_content(tax, tax.root) == 0.0
            for k in tax.category_labels:
                v = information_content(tax, k)
                assert 0.0 <= v <= 1.0
                assert v == pytest.approx(brute_ic(parents, concept_cats, k), abs=1e-12)
                for p in tax.parents[k]:
                    assert information_content(tax, p) <= v + 1e-12
            cats = sorted(tax.category_labels)
            for _ in range(20):
                k1, k2 = rng.choice(cats), rng.choice(cats)
                assert msca(tax, k1, k2) == brute_msca(parents, concept_cats, k1, k2)
                for fn in (sim_lin, sim_pirro_seco):
                    s = fn(tax, k1, k2)
                    assert 0.0 <= s <= 1.0 + 1e-12
                    assert s == pytest.approx(fn(tax, k2, k1))
