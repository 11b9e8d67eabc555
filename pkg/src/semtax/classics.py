"""Baseline supervised classifiers: multinomial Naive Bayes, Balanced
Winnow (one-vs-rest) and Labeled LDA, all exposing ranked-label
prediction.
"""

from __future__ import annotations

import math
import random
from collections import Counter, defaultdict
from dataclasses import dataclass, field

from .errors import ConfigError, TrainingError

Bag = dict  # feature -> count/weight


def _ranked(scores: dict[str, float]) -> list[tuple[str, float]]:
    return sorted(scores.items(), key=lambda ls: (-ls[1], ls[0]))


# -- Naive Bayes ---------------------------------------------------------


@dataclass
class NBModel:
    priors: dict[str, float]
    likelihoods: dict[str, dict[str, float]]  # label -> word -> P(w|c)
    floors: dict[str, float]  # label -> smoothed probability of unseen vocab word
    vocabulary: frozenset[str]


def nb_train(labeled_bags) -> NBModel:
    """labeled_bags: iterable of (label, bag).  P(c) is the class document
    fraction; P(w|c) = (1 + count_wc) / (k + total_c) with k the
    vocabulary size (add-one smoothing)."""
    labeled_bags = list(labeled_bags)
    if not labeled_bags:
        raise TrainingError("empty training set")
    vocab = set()
    class_counts: dict[str, Counter] = defaultdict(Counter)
    ndocs: Counter = Counter()
    for label, bag in labeled_bags:
        ndocs[label] += 1
        for w, n in bag.items():
            vocab.add(w)
            class_counts[label][w] += n
    total_docs = sum(ndocs.values())
    k = len(vocab)
    priors = {c: ndocs[c] / total_docs for c in ndocs}
    likelihoods = {}
    floors = {}
    for c in ndocs:
        total = sum(class_counts[c].values())
        likelihoods[c] = {w: (1 + class_counts[c][w]) / (k + total) for w in vocab}
        floors[c] = 1 / (k + total)
    return NBModel(
        priors=priors,
        likelihoods=likelihoods,
        floors=floors,
        vocabulary=frozenset(vocab),
    )


def nb_predict(model: NBModel, bag: Bag) -> list[tuple[str, float]]:
    """score(c) = log P(c) + sum_w n_wd * log P(w|c); out-of-vocabulary
    words are ignored, in-vocabulary words unseen in a class use the
    smoothing floor."""
    scores = {}
    for c, prior in model.priors.items():
        s = math.log(prior)
        lk = model.likelihoods[c]
        for w, n in bag.items():
            if w in model.vocabulary:
                s += n * math.log(lk.get(w, model.floors[c]))
        scores[c] = s
    return _ranked(scores)


# -- Balanced Winnow -----------------------------------------------------


@dataclass
class WinnowModel:
    theta: float
    alpha: float
    beta: float
    # label -> feature -> (w+, w-)
    weights: dict[str, dict[str, tuple[float, float]]]
    features: frozenset[str]


def _winnow_margin(w: dict[str, tuple[float, float]], x: Bag, theta: float) -> float:
    s = 0.0
    for f, v in x.items():
        pair = w.get(f)
        if pair is not None and v > 0:
            s += (pair[0] - pair[1]) * v
    return s - theta


def winnow_train(
    labeled_vectors,
    theta: float = 1.0,
    alpha: float = 1.1,
    beta: float = 0.9,
    epochs: int = 50,
    init: tuple[float, float] = (1.0, 0.5),
) -> WinnowModel:
    """One-vs-rest Balanced Winnow.  Positive prediction iff
    sum_i (w+ - w-) x_i > theta.  Weights change only on mistakes and only
    for active features (x_i > 0): false negative promotes (w+ *= alpha,
    w- *= beta), false positive demotes (w+ *= beta, w- *= alpha)."""
    if not (alpha > 1 and 0 < beta < 1 and epochs >= 1):
        raise ConfigError("winnow needs alpha > 1, 0 < beta < 1, epochs >= 1")
    labeled_vectors = list(labeled_vectors)
    if not labeled_vectors:
        raise TrainingError("empty training set")
    features = frozenset(f for _, x in labeled_vectors for f in x)
    labels = sorted({lab for lab, _ in labeled_vectors})
    weights = {lab: {f: init for f in features} for lab in labels}
    for _ in range(epochs):
        mistakes = 0
        for lab, x in labeled_vectors:
            for target in labels:
                w = weights[target]
                positive = lab == target
                predicted_positive = _winnow_margin(w, x, theta) > 0
                if predicted_positive == positive:
                    continue
                mistakes += 1
                up, down = (alpha, beta) if positive else (beta, alpha)
                for f, v in x.items():
                    if v > 0 and f in w:
                        wp, wn = w[f]
                        w[f] = (wp * up, wn * down)
        if mistakes == 0:
            break
    return WinnowModel(
        theta=theta, alpha=alpha, beta=beta, weights=weights, features=features
    )


def winnow_predict(model: WinnowModel, x: Bag) -> list[tuple[str, float]]:
    """Labels ranked by margin sum (w+ - w-) x_i - theta; ties by label
    order.  Features unseen at training time are ignored."""
    scores = {
        lab: _winnow_margin(w, x, model.theta) for lab, w in model.weights.items()
    }
    return _ranked(scores)


# -- Labeled LDA ---------------------------------------------------------


@dataclass
class LLDAModel:
    topics: list[str]  # == label set
    phi: dict[str, dict[str, float]]  # topic -> word -> probability
    a_doc: float
    a_word: float
    iterations: int
    seed: int
    vocabulary: frozenset[str]


def llda_train(
    labeled_docs,
    a_doc: float | None = None,
    a_word: float = 0.01,
    iterations: int = 200,
    seed: int = 0,
) -> LLDAModel:
    """Collapsed Gibbs sampling with each token's topic restricted to the
    document's labels.  labeled_docs: iterable of (labels, tokens) where
    labels is a list (single- or multi-label) and tokens a word sequence.
    Deterministic for a fixed seed."""
    docs = [(sorted(set(labels)), list(tokens)) for labels, tokens in labeled_docs]
    if not docs:
        raise TrainingError("empty training set")
    for labels, _ in docs:
        if not labels:
            raise TrainingError("document with empty label set")
    topics = sorted({lab for labels, _ in docs for lab in labels})
    if a_doc is None:
        a_doc = 50.0 / len(topics)
    vocab = sorted({w for _, tokens in docs for w in tokens})
    vsize = len(vocab)
    rng = random.Random(seed)

    n_zw: dict[str, Counter] = {t: Counter() for t in topics}
    n_z: Counter = Counter()
    n_dz: list[Counter] = []
    assignments: list[list[str]] = []
    for labels, tokens in docs:
        dz: Counter = Counter()
        zs = []
        for w in tokens:
            z = rng.choice(labels)
            zs.append(z)
            n_zw[z][w] += 1
            n_z[z] += 1
            dz[z] += 1
        n_dz.append(dz)
        assignments.append(zs)

    for _ in range(iterations):
        for d, (labels, tokens) in enumerate(docs):
            if len(labels) == 1:
                continue  # no sampling freedom
            dz = n_dz[d]
            zs = assignments[d]
            for i, w in enumerate(tokens):
                z = zs[i]
                n_zw[z][w] -= 1
                n_z[z] -= 1
                dz[z] -= 1
                probs = []
                for t in labels:
                    p = (dz[t] + a_doc) * (n_zw[t][w] + a_word) / (
                        n_z[t] + vsize * a_word
                    )
                    probs.append(p)
                r = rng.random() * sum(probs)
                acc = 0.0
                new_z = labels[-1]
                for t, p in zip(labels, probs):
                    acc += p
                    if r < acc:
                        new_z = t
                        break
                zs[i] = new_z
                n_zw[new_z][w] += 1
                n_z[new_z] += 1
                dz[new_z] += 1

    phi = {
        t: {w: (n_zw[t][w] + a_word) / (n_z[t] + vsize * a_word) for w in vocab}
        for t in topics
    }
    return LLDAModel(
        topics=topics,
        phi=phi,
        a_doc=a_doc,
        a_word=a_word,
        iterations=iterations,
        seed=seed,
        vocabulary=frozenset(vocab),
    )


def llda_predict(model: LLDAModel, bag: Bag) -> list[tuple[str, float]]:
    """score(label) = sum_w n_wd * log phi(w|label); out-of-vocabulary
    words are ignored.  Ties by label order."""
    scores = {}
    for t in model.topics:
        phi_t = model.phi[t]
        s = 0.0
        for w, n in bag.items():
            if w in model.vocabulary:
                s += n * math.log(phi_t[w])
        scores[t] = s
    return _ranked(scores)
