from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vasslyze.model import (
    Config,
    MalformedVass,
    ParseError,
    VassError,
    format_vass,
    incidence_matrix,
    make_vass,
    max_update,
    parse_vass,
    update_matrix,
)

from conftest import single_loop


def test_parse_fig1(fig1):
    assert fig1.dim == 2
    assert fig1.states == ("q1", "q2")
    assert [t.id for t in fig1.transitions] == [0, 1, 2]
    assert [(t.source, t.update, t.target) for t in fig1.transitions] == [
        ("q1", (-1, 1), "q2"),
        ("q2", (0, 0), "q1"),
        ("q2", (0, -1), "q2"),
    ]


def test_parse_minimal():
    v = parse_vass("vass dim 1\nstate q\ntrans t: q -> q [0]\n")
    assert v.dim == 1 and len(v.states) == 1 and len(v.transitions) == 1


def test_state_without_outgoing_transition():
    text = "vass dim 1\nstate q1 q2\ntrans a: q1 -> q2 [1]\n"
    with pytest.raises(VassError, match="state without outgoing transition"):
        parse_vass(text)


@pytest.mark.parametrize(
    "text, line, reason",
    [
        ("vass dim 2\nstate q\ntrans a: q -> q [1]\n", 3, "dimension mismatch"),
        ("vass dim 1\nstate q\ntrans a: q -> r [1]\n", 3, "unknown state"),
        ("vass dim 1\nstate q\ntrans a q -> q [1]\n", 3, "expected 'trans"),
        ("vass dim 1\nstate q\ntrans a: q -> q [x]\n", 3, "non-integer"),
        ("vass dim 1\nstate q q\n", 2, "duplicate state"),
        ("vass dim 1\nstate q\ntrans a: q -> q [1]\ntrans a: q -> q [0]\n", 4, "duplicate transition"),
        ("state q\n", 1, "must come first"),
        ("vass dim 0\n", 1, "positive"),
        ("vass dim 1\nfoo\n", 2, "unknown keyword"),
    ],
)
def test_parse_errors(text, line, reason):
    with pytest.raises(ParseError) as e:
        parse_vass(text)
    assert e.value.line == line
    assert reason in e.value.reason
    assert e.value.column >= 1


def test_error_column_points_at_update():
    with pytest.raises(ParseError) as e:
        parse_vass("vass dim 2\nstate q\n  trans a: q -> q [1]\n")
    assert e.value.column == len("  trans a: q -> q [")


def test_comments_and_blank_lines():
    v = parse_vass("# header\n\nvass dim 1  # d\nstate q # only\ntrans t: q -> q [-3]  # loop\n")
    assert v.transitions[0].update == (-3,)


def test_update_matrix_fig1(fig1):
    U = update_matrix(fig1)
    assert U.tolist() == [[-1, 0, 0], [1, 0, -1]]
    assert all(isinstance(x, Fraction) for row in U.tolist() for x in row)
    assert U.column(2) == (0, -1)


def test_update_matrix_zero_column():
    assert update_matrix(single_loop(0, 0)).tolist() == [[0], [0]]


def test_update_matrix_shape():
    v = make_vass(2, ["a", "b"], [("a", [1, 2], "b"), ("b", [0, 0], "a"), ("b", [3, -1], "b")])
    assert update_matrix(v).shape == (2, 3)


def test_incidence_matrix_fig1(fig1):
    F = incidence_matrix(fig1)
    assert F.tolist() == [[1, -1, 0], [-1, 1, 0]]
    assert F["q1", 0] == 1 and F["q2", 0] == -1


def test_incidence_self_loop_is_zero():
    assert incidence_matrix(single_loop(1)).tolist() == [[0]]


@pytest.mark.parametrize(
    "v, expected",
    [(single_loop(0, 0), 0), (single_loop(3, -7), 7)],
)
def test_max_update(v, expected):
    assert max_update(v) == expected


def test_max_update_fig1(fig1):
    assert max_update(fig1) == 1


def test_config_rejects_negative():
    with pytest.raises(ValueError):
        Config("q", (0, -1))
    assert Config("q", (3, 5)).size == 5


def test_vass_rejects_bad_update_length():
    with pytest.raises(MalformedVass):
        make_vass(2, ["q"], [("q", [1], "q")])


def test_restrict_keeps_ids(fig1):
    sub = fig1.restrict([2])
    assert sub.states == ("q2",)
    assert sub.transition_ids == (2,)


# --- properties -----------------------------------------------------------


@st.composite
def vasses(draw):
    d = draw(st.integers(1, 3))
    n = draw(st.integers(1, 4))
    names = [f"s{i}" for i in range(n)]
    trans = [(names[i], draw(st.lists(st.integers(-9, 9), min_size=d, max_size=d)), draw(st.sampled_from(names))) for i in range(n)]
    extra = draw(st.integers(0, 4))
    for _ in range(extra):
        trans.append(
            (
                draw(st.sampled_from(names)),
                draw(st.lists(st.integers(-9, 9), min_size=d, max_size=d)),
                draw(st.sampled_from(names)),
            )
        )
    return make_vass(d, names, trans)


@given(vasses())
@settings(max_examples=150, deadline=None)
def test_round_trip(v):
    assert parse_vass(format_vass(v)) == v


@given(vasses())
@settings(max_examples=150, deadline=None)
def test_incidence_columns(v):
    F = incidence_matrix(v)
    U = update_matrix(v)
    assert F.col_labels == U.col_labels == v.transition_ids
    for tid in v.transition_ids:
        col = F.column(tid)
        assert sum(col) == 0
        assert set(col) <= {-1, 0, 1}
