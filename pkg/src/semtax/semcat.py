"""The unsupervised categorizer: term vector -> concepts (with homonym
disambiguation) -> ranked category vector.

Weight conservation holds throughout: the total category weight equals the
total weight of the terms that mapped to some concept.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DataError, EmptyVectorError
from .taxonomy import Taxonomy, fold_diacritics, normalize_label, sim_page
from .textpipe import (
    BackgroundStats,
    PhraseIndex,
    extract_phrases,
    preprocess,
    tfidf_weights,
    top_n_terms,
)

DISAMBIG_METHODS = ("nearest", "rank_half", "rank_inv", "uniform")


@dataclass
class ConceptAssignment:
    # entries: (term, concept id, weight share); shares for one term sum
    # to that term's TermVector weight
    entries: list[tuple[str, str, float]] = field(default_factory=list)
    unresolved: list[str] = field(default_factory=list)

    def total_weight(self) -> float:
        return sum(w for _, _, w in self.entries)

    def context_concepts(self) -> list[str]:
        return sorted({c for _, c, _ in self.entries})


@dataclass
class SemCatConfig:
    top_terms: int = 10
    disambig: str = "nearest"
    measure: str = "lin"
    exact_match: bool = True
    min_df: int = 2
    max_df_ratio: float = 0.5
    stopwords: frozenset = frozenset()
    lemmas: dict = field(default_factory=dict)
    top_categories: int | None = None


def map_terms_to_concepts(
    v: dict[str, float], tax: Taxonomy, exact_match: bool = True
):
    """Match each term against concept labels.  Exactly one match ->
    unambiguous; several -> ambiguous candidates; none -> unresolved.
    With exact_match off, a diacritic-folded lookup is tried as fallback.
    """
    unambiguous = ConceptAssignment()
    ambiguous: dict[str, list[str]] = {}
    for term in sorted(v):
        key = normalize_label(term)
        candidates = tax.label_index.get(key)
        if not candidates and not exact_match:
            candidates = tax.folded_label_index.get(fold_diacritics(key))
        if not candidates:
            unambiguous.unresolved.append(term)
        elif len(candidates) == 1:
            unambiguous.entries.append((term, candidates[0], v[term]))
        else:
            ambiguous[term] = sorted(set(candidates))
    return unambiguous, ambiguous


def _rank_proportions(method: str, m: int) -> list[float]:
    if method in ("nearest",):
        return [1.0] + [0.0] * (m - 1)
    if method == "rank_half":
        raw = [1.0 / 2**i for i in range(1, m + 1)]
    elif method == "rank_inv":
        raw = [1.0 / i for i in range(1, m + 1)]
    elif method == "uniform":
        raw = [1.0] * m
    else:
        raise DataError("unknown disambiguation method %r" % method)
    total = sum(raw)
    return [r / total for r in raw]


def disambiguate(
    ambiguous: dict[str, list[str]],
    context: ConceptAssignment,
    tax: Taxonomy,
    weights: dict[str, float],
    method: str = "nearest",
    measure: str = "lin",
) -> ConceptAssignment:
    """Resolve ambiguous terms against the unambiguous context.

    Candidates are scored by mean sim_page to the context concepts and
    sorted descending (ties by concept id); the method then splits the
    term's weight over ranks.  `nearest` with an empty context falls back
    to `uniform`.
    """
    if method not in DISAMBIG_METHODS:
        raise DataError("unknown disambiguation method %r" % method)
    ctx = context.context_concepts()
    result = ConceptAssignment()
    for term in sorted(ambiguous):
        candidates = ambiguous[term]
        if ctx:
            scored = sorted(
                candidates,
                key=lambda c: (
                    -sum(sim_page(tax, c, x, measure) for x in ctx) / len(ctx),
                    c,
                ),
            )
            effective = method
        else:
            scored = sorted(candidates)
            effective = "uniform" if method == "nearest" else method
        props = _rank_proportions(effective, len(scored))
        w = weights[term]
        for c, p in zip(scored, props):
            if p > 0.0:
                result.entries.append((term, c, w * p))
    return result


def project_to_categories(
    assignment: ConceptAssignment, tax: Taxonomy
) -> dict[str, float]:
    """Each (concept, weight) contributes weight/m to each of the
    concept's m categories."""
    out: dict[str, float] = {}
    for _, cid, w in assignment.entries:
        cats = tax.concepts[cid].categories
        share = w / len(cats)
        for k in cats:
            out[k] = out.get(k, 0.0) + share
    return out


def assign_concepts(
    v: dict[str, float], tax: Taxonomy, config: SemCatConfig
) -> ConceptAssignment:
    """TermVector -> merged (unambiguous + disambiguated) assignment."""
    unamb, amb = map_terms_to_concepts(v, tax, config.exact_match)
    resolved = disambiguate(amb, unamb, tax, v, config.disambig, config.measure)
    merged = ConceptAssignment(
        entries=unamb.entries + resolved.entries, unresolved=unamb.unresolved
    )
    if not merged.entries:
        raise EmptyVectorError("no term maps to any concept")
    return merged


def categorize_vector(
    v: dict[str, float], tax: Taxonomy, config: SemCatConfig
) -> dict[str, float]:
    """TermVector -> CategoryVector (unsorted dict; use top_n_categories
    for the ranking)."""
    cats = project_to_categories(assign_concepts(v, tax, config), tax)
    if config.top_categories is not None:
        return dict(top_n_categories(cats, config.top_categories))
    return cats


def term_vector(
    text: str,
    tax: Taxonomy,
    stats: BackgroundStats,
    config: SemCatConfig,
    phrase_index: PhraseIndex | None = None,
) -> dict[str, float]:
    tokens = preprocess(
        text, config.stopwords, config.lemmas, stats, config.min_df, config.max_df_ratio
    )
    index = phrase_index if phrase_index is not None else PhraseIndex.from_taxonomy(tax)
    terms = extract_phrases(tokens, index)
    v = tfidf_weights(terms, stats)
    return top_n_terms(v, config.top_terms)


def categorize(
    text: str,
    tax: Taxonomy,
    stats: BackgroundStats,
    config: SemCatConfig | None = None,
    phrase_index: PhraseIndex | None = None,
) -> dict[str, float]:
    """Full pipeline: preprocess -> phrases -> tfidf -> top-n -> concepts
    -> disambiguate -> categories.  Deterministic for a fixed config."""
    config = config or SemCatConfig()
    v = term_vector(text, tax, stats, config, phrase_index)
    return categorize_vector(v, tax, config)


def top_n_categories(v: dict[str, float], n: int) -> list[tuple[str, float]]:
    """The n highest-weight categories, ties broken by category id."""
    if n < 1:
        raise DataError("n must be >= 1")
    ranked = sorted(v.items(), key=lambda kv: (-kv[1], kv[0]))
    return ranked[:n]


def ranked_categories(v: dict[str, float]) -> list[tuple[str, float]]:
    return sorted(v.items(), key=lambda kv: (-kv[1], kv[0]))
