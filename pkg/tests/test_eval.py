import io
import math

import pytest

from semtax.corpus import Document
from semtax.errors import DataError, DegenerateInputError
from semtax.evaluate import (
    ExperimentConfig,
    MethodSpec,
    bag_to_tokens,
    bucket_by_length,
    extract_features,
    lin_precision,
    paired_t_test,
    precision,
    run_experiment,
)
from semtax.semcat import SemCatConfig, term_vector
from semtax.taxonomy import parse_taxonomy, sim_lin


class TestPrecision:
    def test_all_correct(self):
        assert precision(["a", "b"], ["a", "b"]) == 1.0

    def test_none_correct(self):
        assert precision(["a", "b"], ["b", "a"]) == 0.0

    def test_fraction(self):
        assert precision(list("aaab"), list("aaaa")) == 0.75

    def test_length_mismatch(self):
        with pytest.raises(DataError):
            precision(["a"], ["a", "b"])

    def test_empty(self):
        with pytest.raises(DataError):
            precision([], [])


class TestLinPrecision:
    label_map = {"x": "A1", "y": "A2", "z": "B1"}

    def test_exact_match_is_one(self, toy_tax):
        assert lin_precision(["x", "y"], ["x", "y"], toy_tax, self.label_map) == pytest.approx(1.0)

    def test_near_miss_hand_value(self, toy_tax):
        got = lin_precision(["x", "y"], ["y", "y"], toy_tax, self.label_map)
        expected = (sim_lin(toy_tax, "A2", "A1") + 1.0) / 2
        assert got == pytest.approx(expected)
        assert got == pytest.approx((1 + 0.3976) / 2, abs=5e-4)

    def test_flat_taxonomy_equals_precision(self):
        text = (
            "C\tR\tRoot\t\nC\tK1\tk1\tR\nC\tK2\tk2\tR\nC\tK3\tk3\tR\n"
            "P\tp1\tK1\ta\nP\tp2\tK2\tb\nP\tp3\tK3\tc\n"
        )
        flat = parse_taxonomy(io.StringIO(text))
        label_map = {"x": "K1", "y": "K2", "z": "K3"}
        preds = ["x", "y", "z", "x"]
        truths = ["x", "z", "z", "y"]
        assert lin_precision(preds, truths, flat, label_map) == precision(preds, truths)

    def test_unmapped_label(self, toy_tax):
        with pytest.raises(DataError):
            lin_precision(["w"], ["x"], toy_tax, self.label_map)

    def test_lower_bounded_by_precision(self, toy_tax):
        preds = ["x", "y", "z", "x", "z"]
        truths = ["x", "x", "y", "z", "z"]
        assert lin_precision(preds, truths, toy_tax, self.label_map) >= precision(preds, truths)


class TestBuckets:
    def doc(self, n):
        return Document(id="d%d" % n, text="x" * n)

    def test_bounds(self):
        got = bucket_by_length([self.doc(n) for n in (999, 1000, 1500, 1999, 2000, 9999, 10000, 50000)])
        assert [d.id for d in got["excluded"]] == ["d999"]
        assert [d.id for d in got["short"]] == ["d1000", "d1500", "d1999"]
        assert [d.id for d in got["medium"]] == ["d2000", "d9999"]
        assert [d.id for d in got["long"]] == ["d10000", "d50000"]

    def test_partition_exhaustive_disjoint(self):
        docs = [self.doc(n) for n in range(500, 15000, 317)]
        got = bucket_by_length(docs)
        ids = [d.id for b in got.values() for d in b]
        assert sorted(ids) == sorted(d.id for d in docs)


class TestPairedT:
    def test_identical_lists_degenerate(self):
        with pytest.raises(DegenerateInputError):
            paired_t_test([1.0, 2.0, 3.0], [1.0, 2.0, 3.0])

    def test_constant_difference_degenerate(self):
        with pytest.raises(DegenerateInputError):
            paired_t_test([2.0, 3.0, 4.0], [1.0, 2.0, 3.0])

    def test_hand_value(self):
        a = [1.0, 0.0, 1.0, 0.0, 1.0]
        b = [0.0, 1.0, 0.0, 1.0, 0.0]
        t, p = paired_t_test(a, b)
        # differences (1,-1,1,-1,1): mean 0.2, sd ~1.0954
        sd = math.sqrt(sum((d - 0.2) ** 2 for d in (1, -1, 1, -1, 1)) / 4)
        expected_t = 0.2 / (sd / math.sqrt(5))
        assert t == pytest.approx(expected_t, abs=1e-9)
        assert round(t, 3) == 0.408
        assert 0.0 < p < 1.0

    def test_antisymmetric(self):
        a = [0.9, 0.4, 0.6, 0.8]
        b = [0.5, 0.5, 0.7, 0.2]
        ta, _ = paired_t_test(a, b)
        tb, _ = paired_t_test(b, a)
        assert ta == pytest.approx(-tb)

    def test_length_mismatch(self):
        with pytest.raises(DataError):
            paired_t_test([1.0], [1.0, 2.0])


class TestExtractFeatures:
    def test_terms_mode_passthrough(self, toy_tax, toy_background):
        text = "alpha echo golf"
        config = SemCatConfig()
        got = extract_features(text, "terms", toy_tax, toy_background, config)
        assert got == term_vector(text, toy_tax, toy_background, config)

    def test_concepts_mode_single_concept(self, toy_tax, toy_background):
        got = extract_features("alpha", "concepts", toy_tax, toy_background, SemCatConfig())
        assert got == {"c1": pytest.approx(1.0)}

    def test_categories_mode_conserves_weight(self, toy_tax, toy_background):
        config = SemCatConfig()
        text = "alpha echo jaguar"
        v = term_vector(text, toy_tax, toy_background, config)
        got = extract_features(text, "categories", toy_tax, toy_background, config)
        assert sum(got.values()) == pytest.approx(sum(v.values()), abs=1e-9)

    def test_bag_to_tokens(self):
        got = bag_to_tokens({"a": 0.02, "b": 0.05}, scale=100)
        assert got == ["a", "a", "b", "b", "b", "b", "b"]


class TestRunExperiment:
    def corpus(self):
        train = [
            Document("t1", "alpha bravo alpha", label="x"),
            Document("t2", "charlie alpha", label="x"),
            Document("t3", "echo foxtrot", label="z"),
            Document("t4", "golf echo foxtrot", label="z"),
        ]
        test = [
            Document("e1", "alpha charlie", label="x"),
            Document("e2", "foxtrot echo", label="z"),
        ]
        return train, test

    def config(self, toy_tax, toy_background, methods):
        train, test = self.corpus()
        return ExperimentConfig(
            taxonomy=toy_tax,
            background=toy_background,
            train_docs=train,
            test_docs=test,
            methods=methods,
            label_categories={"x": "A", "z": "B"},
            seed=11,
            buckets=False,
        )

    def test_single_method_report_shape(self, toy_tax, toy_background):
        cfg = self.config(toy_tax, toy_background, [MethodSpec("nb", "bayes")])
        report = run_experiment(cfg)
        assert len(report.results) == 1
        assert report.results[0].name == "nb"
        assert 0.0 <= report.results[0].overall_precision <= 1.0
        assert report.results[0].overall_lin_precision >= report.results[0].overall_precision

    def test_deterministic_report(self, toy_tax, toy_background):
        methods = [
            MethodSpec("nb", "bayes"),
            MethodSpec("semcla", "semcla"),
            MethodSpec("semcat", "semcat"),
        ]
        r1 = run_experiment(self.config(toy_tax, toy_background, methods))
        r2 = run_experiment(self.config(toy_tax, toy_background, methods))
        assert r1.to_json() == r2.to_json()

    def test_semcla_method_classifies(self, toy_tax, toy_background):
        cfg = self.config(toy_tax, toy_background, [MethodSpec("sc", "semcla")])
        report = run_experiment(cfg)
        assert report.results[0].overall_precision == pytest.approx(1.0)
