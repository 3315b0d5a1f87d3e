from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import zq
from nquasi.core import Isotopy, Permutation
from nquasi.decompose import decompose_fully
from nquasi.errors import TableFormatError
from nquasi.gen import random_latin_hypercube
from nquasi.textio import (
    format_isotopy,
    format_table,
    format_tables,
    parse_isotopy,
    parse_table,
    parse_tables,
    render_tree,
)


def test_format_layout():
    assert format_table(zq(3, 2)) == "2 3\n0 1 2\n1 2 0\n2 0 1\n"


def test_parse_comments_and_whitespace():
    text = "# order-2 parity\n2 2  # header\n0 1\n1\n0\n"
    assert parse_table(text) == zq(2, 2)


@pytest.mark.parametrize("text", ["", "2", "2 2\n0 1 1", "2 2\n0 1 1 0 1", "2 2\n0 x 1 0", "2 2\n0 0x1 1 0", "0 2\n"])
def test_parse_rejects(text):
    with pytest.raises(TableFormatError):
        parse_table(text)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 4), st.integers(1, 3), st.integers(0, 10**6))
def test_round_trip(q, n, seed):
    t = random_latin_hypercube(q, n, seed)
    assert parse_table(format_table(t)) == t


def test_stream_round_trip():
    ts = [zq(2, 3), zq(3, 2), random_latin_hypercube(4, 2, 1)]
    text = "".join(format_tables(ts))
    assert "\n\n" in text
    assert list(parse_tables(text)) == ts


def test_isotopy_round_trip():
    iso = Isotopy((Permutation((1, 0, 2)), Permutation((2, 0, 1)), Permutation.identity(3)))
    assert parse_isotopy(format_isotopy(iso)) == iso
    with pytest.raises(TableFormatError):
        parse_isotopy("0 1\n0 1 2\n")
    with pytest.raises(TableFormatError):
        parse_isotopy("0 0 1\n")


def test_render_tree():
    expr, leaves = render_tree(decompose_fully(zq(3, 3)))
    assert expr == "L1(L2(x1, x2), x3)"
    assert len(leaves) == 2
