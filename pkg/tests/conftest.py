import io

import pytest

from semtax.taxonomy import parse_taxonomy
from semtax.textpipe import BackgroundStats

TOY_TAXONOMY = """\
C\tR\tRoot\t
C\tA\tA\tR
C\tB\tB\tR
C\tA1\tA1\tA
C\tA2\tA2\tA
C\tB1\tB1\tB
P\tc1\tA1\talpha
P\tc2\tA1\tbravo|jaguar
P\tc3\tA2\tcharlie|black hole
P\tc4\tA\tdelta
P\tc5\tB1\techo|jaguar
P\tc6\tB1\tfoxtrot
P\tc7\tB\tgolf
"""


@pytest.fixture(scope="session")
def toy_tax():
    return parse_taxonomy(io.StringIO(TOY_TAXONOMY))


@pytest.fixture(scope="session")
def toy_background():
    # every concept label seen in exactly 1 of 100 background documents,
    # so every label keeps a positive idf
    terms = [
        "alpha", "bravo", "jaguar", "charlie", "black", "hole",
        "delta", "echo", "foxtrot", "golf",
    ]
    return BackgroundStats(doc_count=100, doc_freq={t: 2 for t in terms})
