"""
tests/test_corpus.py
--------------------
Tests for corpus.py: group tables, corpus dispatch and the sizes and fields of
the built-in Hopf algebras.
"""
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from checks import InputError
from corpus import (CORPUS_DESCRIPTIONS, acceptance_corpus, cyclic_group, group_table, load_corpus,
                    symmetric_group, validate_group_table)
from exactla import FieldSpec, zeta


@pytest.mark.parametrize("spec,order", [("C1", 1), ("C4", 4), ("s3", 6), (" S4 ", 24)])
def test_group_table_orders(spec, order):
    table = group_table(spec)
    assert len(table) == order
    identity, inverses = validate_group_table(table)
    assert all(table[g][inverses[g]] == identity for g in range(order))


def test_symmetric_group_is_nonabelian():
    table = symmetric_group(3)
    assert any(table[a][b] != table[b][a] for a in range(6) for b in range(6))


@pytest.mark.parametrize("spec", ["D4", "C", "", "S9"])
def test_bad_group_spec(spec):
    with pytest.raises(InputError):
        group_table(spec)


def test_invalid_table_rejected():
    table = cyclic_group(3)
    table[1][1] = 1
    with pytest.raises(InputError):
        validate_group_table(table)


@pytest.mark.parametrize("name,kwargs,dim", [
    ("trivial", {}, 1),
    ("group_algebra", {"group": "C2"}, 2),
    ("function-algebra", {"group": "S3"}, 6),
    ("sweedler", {}, 4),
    ("taft", {"order": 3}, 9),
])
def test_corpus_dimensions(name, kwargs, dim):
    assert load_corpus(name, **kwargs).dim == dim


def test_taft_lives_over_cyclotomic_field():
    H = load_corpus("taft", order=3)
    assert H.field == FieldSpec.cyclotomic(3)
    assert H.name == "T3"
    assert zeta(H.field) ** 3 == 1


def test_sweedler_over_rationals():
    H = load_corpus("sweedler")
    assert H.field == FieldSpec.rationals()
    assert H.labels == ["1", "g", "x", "gx"]


def test_dual_flag():
    H = load_corpus("group_algebra", group="C2", dual=True)
    assert H.name == "C[C2]^"


@pytest.mark.parametrize("name,kwargs", [
    ("quantum_group", {}),
    ("taft", {}),
    ("group_algebra", {}),
    ("taft", {"order": 1}),
])
def test_bad_corpus_requests(name, kwargs):
    with pytest.raises(InputError):
        load_corpus(name, **kwargs)


def test_acceptance_corpus():
    names = [H.name for H in acceptance_corpus()]
    assert names == ["C", "C[C2]", "C[C4]", "C[S3]", "C^S3", "H4", "T3"]


def test_descriptions_cover_dispatch():
    assert set(CORPUS_DESCRIPTIONS) == {"trivial", "group_algebra", "function_algebra", "sweedler", "taft"}
