import json

import pytest

from cells.algebra import Semigroup
from cells.algebra_io import dumps_algebra, load_algebra, loads_algebra, save_algebra, to_document
from cells.errors import KindMismatchError


def same_algebra(A, B):
    return (A.kind == B.kind and A.labels == B.labels and (A.mul == B.mul).all()
            and (A.add is None) == (B.add is None) and (A.add is None or (A.add == B.add).all())
            and (A.inv is None) == (B.inv is None) and (A.inv is None or (A.inv == B.inv).all())
            and A.generators == B.generators)


def test_save_and_load(tmp_path, b21, brandt, end3):
    for A in (b21, brandt, end3):
        path = tmp_path / f"{A.kind}.json"
        save_algebra(A, str(path))
        assert same_algebra(A, load_algebra(str(path)))


def test_document_key_order(b21):
    assert list(to_document(b21)) == ["kind", "elements", "mul", "add", "generators"]


def test_non_ascii_labels_survive():
    A = Semigroup(["χ", "χ⁻¹χ"], [[1, 1], [1, 1]])
    text = dumps_algebra(A)
    assert '"χ⁻¹χ"' in text
    assert loads_algebra(text).labels == ["χ", "χ⁻¹χ"]


def test_sn_round_trip(s2):
    text = dumps_algebra(s2.semigroup)
    doc = json.loads(text)
    assert doc["kind"] == "inverse"
    assert len(doc["elements"]) == 103
    assert same_algebra(s2.semigroup, loads_algebra(text))


@pytest.mark.parametrize("text", [
    "not json",
    "[1, 2]",
    '{"kind": "group", "elements": ["a"], "mul": [[0]]}',
    '{"kind": "semigroup", "elements": ["a"]}',
    '{"kind": "ai-semiring", "elements": ["a"], "mul": [[0]]}',
    '{"kind": "inverse", "elements": ["a"], "mul": [[0]]}',
    '{"kind": "semigroup", "elements": ["a", "b"], "mul": [[0]]}',
])
def test_malformed_documents(text):
    with pytest.raises(KindMismatchError):
        loads_algebra(text)


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_algebra(str(tmp_path / "absent.json"))
