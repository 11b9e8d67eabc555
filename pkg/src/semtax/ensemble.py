"""Bagging ensembles, taxonomy-driven training-sample drawing, vote
aggregation and the SemCom heterogeneous committee.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

from .errors import DataError, TrainingError
from .taxonomy import Taxonomy, sim_lin

AGGREGATION_MODES = ("single_vote", "weighted", "rank")


class Vote(NamedTuple):
    label: str
    weight: float = 1.0
    rank: int = 1


@dataclass
class CommitteeConfig:
    member_specs: list = field(default_factory=list)  # (kind, count) pairs
    level: str = "2"  # "1", "2" or "inf"
    sample_size: int = 200
    seed: int = 0
    aggregation: str = "single_vote"
    semcat_weights: tuple = (14.0, 10.0, 6.0)
    llda_weight: float | None = None


def derive_seed(master_seed: int, index: int) -> int:
    """Member seed mixing rule (recorded in reports): splitmix-style hash
    of the master seed and the member index."""
    x = (master_seed * 0x9E3779B97F4A7C15 + (index + 1) * 0xBF58476D1CE4E5B9) & (
        2**64 - 1
    )
    x ^= x >> 31
    return x & (2**32 - 1)


def _allowed_categories(tax: Taxonomy, class_cat: str, level: str) -> set[str]:
    if level in (1, "1"):
        return {class_cat}
    if level in (2, "2"):
        return {class_cat} | tax.children[class_cat]
    if level in ("inf", float("inf")):
        return tax.descendants(class_cat)
    raise DataError("unknown sample level %r" % (level,))


def draw_training_sample(
    tax: Taxonomy,
    class_categories: dict[str, str],
    docs,
    level: str,
    size: int,
    seed: int,
) -> dict[str, list[str]]:
    """docs: iterable of objects with .id and .categories (taxonomy
    annotations).  Eligibility: L=1 needs a document category equal to the
    class category, L=2 additionally direct subcategories, L=inf any
    descendant.  `size` ids drawn uniformly without replacement (the whole
    pool if smaller), seeded."""
    docs = list(docs)
    rng = random.Random(seed)
    out: dict[str, list[str]] = {}
    for label in sorted(class_categories):
        class_cat = class_categories[label]
        tax._require_category(class_cat)
        allowed = _allowed_categories(tax, class_cat, level)
        pool = sorted(d.id for d in docs if allowed.intersection(d.categories))
        if not pool:
            raise TrainingError("class %s has no eligible documents" % label)
        if len(pool) <= size:
            out[label] = pool
        else:
            out[label] = sorted(rng.sample(pool, size))
    return out


def aggregate(votes: list[Vote], mode: str = "single_vote", seed: int = 0) -> str:
    """single_vote: one point per rank-1 vote; weighted: sum of vote
    weights; rank: Borda points (M - rank + 1) with M the deepest rank
    present.  Exact ties are resolved by a seeded uniform choice among the
    winners."""
    if mode not in AGGREGATION_MODES:
        raise DataError("unknown aggregation mode %r" % mode)
    if not votes:
        raise DataError("empty vote set")
    tally: dict[str, float] = {}
    if mode == "single_vote":
        for v in votes:
            if v.rank == 1:
                tally[v.label] = tally.get(v.label, 0.0) + 1.0
    elif mode == "weighted":
        for v in votes:
            tally[v.label] = tally.get(v.label, 0.0) + v.weight
    else:
        depth = max(v.rank for v in votes)
        for v in votes:
            tally[v.label] = tally.get(v.label, 0.0) + (depth - v.rank + 1)
    if not tally:
        raise DataError("no rank-1 votes to count")
    best = max(tally.values())
    winners = sorted(lab for lab, s in tally.items() if s == best)
    if len(winners) == 1:
        return winners[0]
    return random.Random(seed).choice(winners)


@dataclass
class BaggingEnsemble:
    """Trained members; each member is (kind, predict_fn) where predict_fn
    maps a document to a ranked (label, score) list."""

    members: list
    master_seed: int
    member_seeds: list

    def member_rankings(self, doc) -> list[list[tuple[str, float]]]:
        return [predict(doc) for _, predict in self.members]

    def predict(self, doc, mode: str = "single_vote", rank_depth: int = 3) -> str:
        votes = []
        for ranking in self.member_rankings(doc):
            if mode == "rank":
                for i, (lab, _) in enumerate(ranking[:rank_depth], 1):
                    votes.append(Vote(lab, 1.0, i))
            else:
                lab, score = ranking[0]
                votes.append(Vote(lab, _normalized_top_score(ranking), 1))
        return aggregate(votes, mode, seed=self.master_seed)


def _normalized_top_score(ranking) -> float:
    """Weighted-mode member weight: top score normalized into [0, 1]
    against the member's own score range (degenerate ranges give 1)."""
    scores = [s for _, s in ranking]
    lo, hi = min(scores), max(scores)
    if hi == lo:
        return 1.0
    return (scores[0] - lo) / (hi - lo)


def build_bagging_ensemble(
    trainer: Callable,
    count: int,
    sampler: Callable[[int], object],
    master_seed: int = 0,
) -> BaggingEnsemble:
    """Train `count` members on independently drawn samples.  `sampler`
    maps a member seed to training material; `trainer` maps (sample, seed)
    to a predict function.  Member seeds derive from the master seed by
    index."""
    if count < 1:
        raise DataError("ensemble needs at least one member")
    members = []
    seeds = []
    for i in range(count):
        seed = derive_seed(master_seed, i)
        seeds.append(seed)
        try:
            sample = sampler(seed)
            members.append(("member", trainer(sample, seed)))
        except DataError as exc:
            raise TrainingError("member %d failed: %s" % (i, exc)) from exc
    return BaggingEnsemble(members=members, master_seed=master_seed, member_seeds=seeds)


def project_category_to_label(
    tax: Taxonomy, category: str, class_categories: dict[str, str]
) -> str | None:
    """Map a taxonomy category to a task label: exact match on a class
    category, else the nearest class category by Lin similarity; ties
    dropped (None)."""
    by_cat = {cat: lab for lab, cat in class_categories.items()}
    if category in by_cat:
        return by_cat[category]
    scored = sorted(
        ((sim_lin(tax, category, cat), lab) for lab, cat in class_categories.items()),
        key=lambda t: (-t[0], t[1]),
    )
    if len(scored) > 1 and scored[0][0] == scored[1][0]:
        return None
    return scored[0][1]


@dataclass
class CommitteeDecision:
    winner: str
    votes: list
    semcat_used: bool


def semcom_predict(
    member_rankings: list,
    semcat_ranking: list | None,
    weight_vector,
    label_map: dict[str, str],
    seed: int = 0,
) -> CommitteeDecision:
    """Members cast weight-1 votes for their top label; SemCat's top
    categories (one per weight-vector entry) are mapped through label_map
    and cast weighted votes.  Categories outside the map are dropped.  A
    SemCat failure (None ranking) leaves the plain member vote, flagged."""
    if not weight_vector:
        raise DataError("empty SemCat weight vector")
    votes = [Vote(ranking[0][0], 1.0, 1) for ranking in member_rankings]
    semcat_used = False
    if semcat_ranking is not None:
        for i, (category, _) in enumerate(semcat_ranking[: len(weight_vector)]):
            label = label_map.get(category)
            if label is not None:
                votes.append(Vote(label, float(weight_vector[i]), i + 1))
                semcat_used = True
    winner = aggregate(votes, "weighted", seed=seed)
    return CommitteeDecision(winner=winner, votes=votes, semcat_used=semcat_used)
