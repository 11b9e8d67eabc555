"""Corpus records and file formats.

Corpus files are line-delimited UTF-8 JSON: ``{"id": ..., "text": ...,
"label": ..., "categories": [...]}`` with label and categories optional.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import DataError


@dataclass
class Document:
    id: str
    text: str
    label: str | None = None
    categories: tuple = ()


def parse_corpus(lines) -> list[Document]:
    docs = []
    seen = set()
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line:
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DataError("corpus line %d: invalid JSON (%s)" % (lineno, exc))
        if "id" not in rec or "text" not in rec:
            raise DataError("corpus line %d: record needs id and text" % lineno)
        doc_id = str(rec["id"])
        if doc_id in seen:
            raise DataError("duplicate document id %s" % doc_id)
        seen.add(doc_id)
        docs.append(
            Document(
                id=doc_id,
                text=rec["text"],
                label=rec.get("label"),
                categories=tuple(rec.get("categories", ())),
            )
        )
    return docs


def load_corpus(path) -> list[Document]:
    with open(path, encoding="utf-8") as fh:
        return parse_corpus(fh)


def save_corpus(docs, path):
    with open(path, "w", encoding="utf-8") as fh:
        for d in docs:
            rec = {"id": d.id, "text": d.text}
            if d.label is not None:
                rec["label"] = d.label
            if d.categories:
                rec["categories"] = list(d.categories)
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
