"""Metrics, length bucketing, the paired t-test, feature-mode extraction
and the seeded experiment runner.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, asdict

import numpy as np
from scipy import stats as sps

from .classics import (
    llda_predict,
    llda_train,
    nb_predict,
    nb_train,
    winnow_predict,
    winnow_train,
)
from .corpus import Document
from .ensemble import (
    Vote,
    aggregate,
    build_bagging_ensemble,
    derive_seed,
    draw_training_sample,
    project_category_to_label,
    semcom_predict,
)
from .errors import ConfigError, DataError, DegenerateInputError, EmptyVectorError
from .semcat import SemCatConfig, assign_concepts, categorize_vector, ranked_categories, term_vector
from .semcla import SemClaConfig, extend_vector, semcla_score, semcla_train
from .taxonomy import Taxonomy, sim_lin
from .textpipe import BackgroundStats, PhraseIndex

FEATURE_MODES = ("terms", "categories", "concepts")

SHORT_MIN, MEDIUM_MIN, LONG_MIN = 1000, 2000, 10000


def precision(preds: list, truths: list) -> float:
    """Fraction of exact matches."""
    if len(preds) != len(truths):
        raise DataError("prediction/truth length mismatch")
    if not preds:
        raise DataError("empty input")
    return sum(p == t for p, t in zip(preds, truths)) / len(preds)


def lin_precision(
    preds: list, truths: list, tax: Taxonomy, label_categories: dict[str, str]
) -> float:
    """Mean Lin similarity between the mapped truth and prediction
    categories; rewards near-miss predictions."""
    if len(preds) != len(truths):
        raise DataError("prediction/truth length mismatch")
    if not preds:
        raise DataError("empty input")
    total = 0.0
    for p, t in zip(preds, truths):
        if p not in label_categories or t not in label_categories:
            raise DataError("label without a taxonomy category: %r" % (p if p not in label_categories else t,))
        total += sim_lin(tax, label_categories[t], label_categories[p])
    return total / len(preds)


def bucket_of(text: str) -> str:
    c = len(text)
    if c < SHORT_MIN:
        return "excluded"
    if c < MEDIUM_MIN:
        return "short"
    if c < LONG_MIN:
        return "medium"
    return "long"


def bucket_by_length(docs) -> dict[str, list]:
    """Partition documents by raw character count: short [1000, 2000),
    medium [2000, 10000), long [10000, inf); under 1000 excluded."""
    out = {"short": [], "medium": [], "long": [], "excluded": []}
    for d in docs:
        out[bucket_of(d.text)].append(d)
    return out


def paired_t_test(a: list, b: list) -> tuple[float, float]:
    """Standard paired t on the differences, df = n - 1, two-sided p via
    the Student-t distribution.  Zero variance of the differences is a
    degenerate-input error."""
    if len(a) != len(b):
        raise DataError("paired t-test needs equal-length score lists")
    n = len(a)
    if n < 2:
        raise DataError("paired t-test needs n >= 2")
    diffs = np.asarray(a, dtype=float) - np.asarray(b, dtype=float)
    sd = diffs.std(ddof=1)
    if sd == 0.0:
        raise DegenerateInputError("differences have zero variance")
    t = diffs.mean() / (sd / math.sqrt(n))
    p = 2.0 * sps.t.sf(abs(t), df=n - 1)
    return float(t), float(p)


def extract_features(
    text: str,
    mode: str,
    tax: Taxonomy,
    stats: BackgroundStats,
    config: SemCatConfig,
    phrase_index: PhraseIndex | None = None,
) -> dict[str, float]:
    """terms: the tf-idf term vector; categories: SemCat category weights;
    concepts: disambiguated concept ids weighted by share."""
    if mode not in FEATURE_MODES:
        raise ConfigError("unknown feature mode %r" % mode)
    v = term_vector(text, tax, stats, config, phrase_index)
    if mode == "terms":
        return v
    if mode == "categories":
        return categorize_vector(v, tax, config)
    assignment = assign_concepts(v, tax, config)
    bag: dict[str, float] = {}
    for _, cid, w in assignment.entries:
        bag[cid] = bag.get(cid, 0.0) + w
    return bag


def bag_to_tokens(bag: dict[str, float], scale: int = 100) -> list[str]:
    """Integerize a weighted bag for token-based learners (LLDA)."""
    tokens = []
    for f in sorted(bag):
        tokens.extend([f] * max(1, round(bag[f] * scale)))
    return tokens


# -- experiment runner ---------------------------------------------------


@dataclass
class MethodSpec:
    name: str
    kind: str  # semcat | semcla | bayes | winnow | llda | ensemble | semcom
    features: str = "terms"
    params: dict = field(default_factory=dict)


@dataclass
class ExperimentConfig:
    taxonomy: Taxonomy
    background: BackgroundStats
    train_docs: list
    test_docs: list
    methods: list
    label_categories: dict
    seed: int = 0
    common_subset: bool = True
    buckets: bool = True
    semcat: SemCatConfig = field(default_factory=SemCatConfig)
    alpha: float = 0.33


@dataclass
class MethodResult:
    name: str
    overall_precision: float
    overall_lin_precision: float
    per_bucket: dict
    unclassified: int


@dataclass
class ExperimentReport:
    config: dict
    evaluated_documents: int
    excluded_short: int
    results: list

    def to_json(self) -> str:
        payload = {
            "config": self.config,
            "evaluated_documents": self.evaluated_documents,
            "excluded_short": self.excluded_short,
            "results": [asdict(r) for r in self.results],
        }
        return json.dumps(payload, sort_keys=True, indent=2)

    def render_table(self) -> str:
        lines = ["%-28s %10s %14s %12s" % ("method", "precision", "lin_precision", "unclassified")]
        for r in self.results:
            lines.append(
                "%-28s %10.3f %14.3f %12d"
                % (r.name, r.overall_precision, r.overall_lin_precision, r.unclassified)
            )
        return "\n".join(lines)


class _Predictor:
    """One configured method: trained state plus a doc -> label function
    (None means unclassified)."""

    def __init__(self, spec: MethodSpec, ctx: "_Context"):
        self.spec = spec
        self.ctx = ctx
        self._build()

    def _feature_bag(self, doc: Document):
        key = (doc.id, self.spec.features)
        cache = self.ctx.feature_cache
        if key not in cache:
            try:
                cache[key] = extract_features(
                    doc.text,
                    self.spec.features,
                    self.ctx.cfg.taxonomy,
                    self.ctx.cfg.background,
                    self.ctx.cfg.semcat,
                    self.ctx.phrase_index,
                )
            except EmptyVectorError:
                cache[key] = None
        return cache[key]

    def _labeled_bags(self, docs):
        out = []
        for d in docs:
            bag = self._feature_bag(d)
            if bag is not None:
                out.append((d.label, bag))
        if not out:
            raise DataError("no usable training documents for %s" % self.spec.name)
        return out

    def _train_classical(self, kind, docs, seed):
        params = self.spec.params
        bags = self._labeled_bags(docs)
        if kind == "bayes":
            model = nb_train(bags)
            return lambda bag: nb_predict(model, bag)
        if kind == "winnow":
            model = winnow_train(
                bags,
                theta=params.get("theta", 1.0),
                alpha=params.get("alpha", 1.1),
                beta=params.get("beta", 0.9),
                epochs=params.get("epochs", 50),
            )
            return lambda bag: winnow_predict(model, bag)
        if kind == "llda":
            labeled = [([lab], bag_to_tokens(bag)) for lab, bag in bags]
            model = llda_train(
                labeled,
                a_word=params.get("a_word", 0.01),
                iterations=params.get("iterations", 200),
                seed=seed,
            )
            return lambda bag: llda_predict(model, bag)
        raise ConfigError("unknown classifier kind %r" % kind)

    def _build(self):
        cfg = self.ctx.cfg
        kind = self.spec.kind
        if kind in ("bayes", "winnow", "llda"):
            self._rank = self._train_classical(kind, cfg.train_docs, cfg.seed)
        elif kind == "semcla":
            sc = SemClaConfig(
                alpha=self.spec.params.get("alpha", cfg.alpha),
                mode=self.spec.params.get("mode", "average"),
                semcat=cfg.semcat,
            )
            self._semcla = semcla_train(
                ((d.label, d.text) for d in cfg.train_docs),
                cfg.taxonomy,
                cfg.background,
                sc,
                self.ctx.phrase_index,
            )
        elif kind == "semcat":
            pass  # unsupervised; nothing to train
        elif kind in ("ensemble", "semcom"):
            self._build_ensemble()
        else:
            raise ConfigError("unknown method kind %r" % kind)

    def _build_ensemble(self):
        cfg = self.ctx.cfg
        params = self.spec.params
        members = params.get("members", [("bayes", 25), ("winnow", 25)])
        level = params.get("level", "2")
        size = params.get("sample_size", 200)
        docs_by_id = {d.id: d for d in cfg.train_docs}

        self._ensemble_members = []
        index = 0
        for kind, count in members:
            for _ in range(count):
                seed = derive_seed(cfg.seed, index)
                index += 1
                sample = draw_training_sample(
                    cfg.taxonomy, cfg.label_categories, cfg.train_docs, level, size, seed
                )
                docs = [docs_by_id[i] for ids in sample.values() for i in ids]
                self._ensemble_members.append(
                    (kind, self._train_classical(kind, docs, seed))
                )

    def predict(self, doc: Document):
        kind = self.spec.kind
        cfg = self.ctx.cfg
        if kind == "semcat":
            cats = self.ctx.categorized(doc)
            if cats is None:
                return None
            top = ranked_categories(cats)[0][0]
            return project_category_to_label(cfg.taxonomy, top, cfg.label_categories)
        if kind == "semcla":
            cats = self.ctx.categorized(doc)
            if cats is None:
                return None
            ext = extend_vector(cats, cfg.taxonomy, self._semcla.alpha).weights
            return semcla_score(ext, self._semcla)[0][0]
        if kind in ("bayes", "winnow", "llda"):
            bag = self._feature_bag(doc)
            if bag is None:
                return None
            return self._rank(bag)[0][0]
        # ensembles
        rankings = []
        for _, rank_fn in self._ensemble_members:
            bag = self._feature_bag(doc)
            if bag is None:
                return None
            rankings.append(rank_fn(bag))
        if kind == "ensemble":
            votes = [Vote(r[0][0], 1.0, 1) for r in rankings]
            return aggregate(votes, self.spec.params.get("aggregation", "single_vote"), cfg.seed)
        # semcom: weighted committee with SemCat injection
        weights = tuple(self.spec.params.get("semcat_weights", (14.0, 10.0, 6.0)))
        cats = self.ctx.categorized(doc)
        semcat_ranking = None if cats is None else ranked_categories(cats)
        label_map = {}
        if semcat_ranking is not None:
            for category, _ in semcat_ranking[: len(weights)]:
                lab = project_category_to_label(cfg.taxonomy, category, cfg.label_categories)
                if lab is not None:
                    label_map[category] = lab
        return semcom_predict(rankings, semcat_ranking, weights, label_map, cfg.seed).winner

    def can_handle(self, doc: Document) -> bool:
        kind = self.spec.kind
        if kind in ("semcat", "semcla", "semcom"):
            if self.ctx.categorized(doc) is None:
                return False
        if kind in ("bayes", "winnow", "llda", "ensemble", "semcom"):
            if self._feature_bag(doc) is None:
                return False
        return True


class _Context:
    def __init__(self, cfg: ExperimentConfig):
        self.cfg = cfg
        self.phrase_index = PhraseIndex.from_taxonomy(cfg.taxonomy)
        self.feature_cache: dict = {}
        self._cat_cache: dict = {}

    def categorized(self, doc: Document):
        if doc.id not in self._cat_cache:
            try:
                v = term_vector(
                    doc.text, self.cfg.taxonomy, self.cfg.background,
                    self.cfg.semcat, self.phrase_index,
                )
                self._cat_cache[doc.id] = categorize_vector(v, self.cfg.taxonomy, self.cfg.semcat)
            except EmptyVectorError:
                self._cat_cache[doc.id] = None
        return self._cat_cache[doc.id]


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """Train every configured method, evaluate on the test set (optionally
    restricted to documents every method can classify) and emit a
    deterministic report."""
    ctx = _Context(cfg)
    predictors = [_Predictor(spec, ctx) for spec in cfg.methods]

    if cfg.buckets:
        buckets = bucket_by_length(cfg.test_docs)
        excluded = len(buckets["excluded"])
        eligible = buckets["short"] + buckets["medium"] + buckets["long"]
    else:
        excluded = 0
        eligible = list(cfg.test_docs)

    unclassified_by_method = {p.spec.name: 0 for p in predictors}
    if cfg.common_subset:
        common = []
        for d in eligible:
            handled = [p.can_handle(d) for p in predictors]
            if all(handled):
                common.append(d)
            else:
                for p, ok in zip(predictors, handled):
                    if not ok:
                        unclassified_by_method[p.spec.name] += 1
        eligible = common
    if not eligible:
        raise DataError("no evaluable test documents")

    results = []
    for p in predictors:
        preds, truths, doc_buckets = [], [], []
        unclassified = unclassified_by_method[p.spec.name]
        for d in eligible:
            label = p.predict(d)
            if label is None:
                unclassified += 1
                continue
            preds.append(label)
            truths.append(d.label)
            doc_buckets.append(bucket_of(d.text) if cfg.buckets else "all")
        per_bucket = {}
        for b in sorted(set(doc_buckets)):
            bp = [p_ for p_, db in zip(preds, doc_buckets) if db == b]
            bt = [t for t, db in zip(truths, doc_buckets) if db == b]
            per_bucket[b] = {
                "count": len(bp),
                "precision": precision(bp, bt),
                "lin_precision": lin_precision(bp, bt, cfg.taxonomy, cfg.label_categories),
            }
        results.append(
            MethodResult(
                name=p.spec.name,
                overall_precision=precision(preds, truths),
                overall_lin_precision=lin_precision(
                    preds, truths, cfg.taxonomy, cfg.label_categories
                ),
                per_bucket=per_bucket,
                unclassified=unclassified,
            )
        )

    config_echo = {
        "seed": cfg.seed,
        "common_subset": cfg.common_subset,
        "buckets": cfg.buckets,
        "alpha": cfg.alpha,
        "label_categories": dict(sorted(cfg.label_categories.items())),
        "member_seed_rule": "splitmix64(master, index)",
        "semcat": {
            "top_terms": cfg.semcat.top_terms,
            "disambig": cfg.semcat.disambig,
            "measure": cfg.semcat.measure,
            "exact_match": cfg.semcat.exact_match,
            "min_df": cfg.semcat.min_df,
            "max_df_ratio": cfg.semcat.max_df_ratio,
        },
        "methods": [
            {"name": m.name, "kind": m.kind, "features": m.features,
             "params": {k: list(v) if isinstance(v, tuple) else v
                        for k, v in sorted(m.params.items())}}
            for m in cfg.methods
        ],
    }
    return ExperimentReport(
        config=config_echo,
        evaluated_documents=len(eligible),
        excluded_short=excluded,
        results=results,
    )
