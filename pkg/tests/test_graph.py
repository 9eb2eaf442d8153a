import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vasslyze.gen import random_vass
from vasslyze.graph import (
    InvalidFlow,
    InvalidPath,
    MultiCycle,
    NotStronglyConnected,
    Path,
    canonical_cycle,
    covering_cycle,
    decompose_path,
    extract_multicycle,
    is_simple_cycle,
    is_strongly_connected,
    sccs,
)
from vasslyze.model import incidence_matrix, make_vass

from conftest import single_loop


def reach(v, keep):
    """Naive reflexive-transitive closure, used as an SCC oracle."""
    r = {(p, q): p == q for p in v.states for q in v.states}
    for t in v.transitions:
        if t.id in keep:
            r[t.source, t.target] = True
    for k, i, j in itertools.product(v.states, repeat=3):
        if r[i, k] and r[k, j]:
            r[i, j] = True
    return r


def oracle_scc_transitions(v, keep):
    """Transitions of ``keep`` whose endpoints are mutually reachable, grouped."""
    r = reach(v, keep)
    groups = {}
    for t in v.transitions:
        if t.id in keep and r[t.target, t.source]:
            rep = min((q for q in v.states if r[q, t.source] and r[t.source, q]), key=v.states.index)
            groups.setdefault(rep, set()).add(t.id)
    return sorted(groups.values(), key=min)


def test_sccs_fig2_whole(fig2):
    parts = sccs(fig2)
    assert len(parts) == 1 and parts[0] == fig2


def test_sccs_fig2_without_t1(fig2):
    parts = sccs(fig2, {1, 2, 3})
    assert [(p.states, p.transition_ids) for p in parts] == [(("p_tt",), (3,)), (("p_ff",), (1,))]
    assert sorted(map(set, (p.transition_ids for p in parts)), key=min) == oracle_scc_transitions(fig2, {1, 2, 3})


def test_sccs_empty_keep(fig1):
    assert sccs(fig1, set()) == []


def test_sccs_unknown_id(fig1):
    with pytest.raises(KeyError):
        sccs(fig1, {7})


@given(st.integers(0, 10**6), st.data())
@settings(max_examples=80, deadline=None)
def test_sccs_match_reachability_oracle(seed, data):
    v = random_vass(2, 4, 2, seed)
    keep = data.draw(st.sets(st.sampled_from(v.transition_ids)))
    got = sorted((set(p.transition_ids) for p in sccs(v, keep)), key=min)
    assert got == oracle_scc_transitions(v, keep)


def test_decompose_path_fig1(fig1):
    m, rest = decompose_path(fig1, Path("q1", (0, 2, 1)))
    assert m == MultiCycle({(2,): 1, (0, 1): 1})
    assert rest == Path("q1", ())


def test_decompose_acyclic(fig1):
    m, rest = decompose_path(fig1, Path("q1", (0,)))
    assert m == MultiCycle() and rest == Path("q1", (0,))


def test_decompose_simple_cycle(fig1):
    m, rest = decompose_path(fig1, Path("q1", (0, 1)))
    assert m == MultiCycle({(0, 1): 1}) and len(rest) == 0


def test_decompose_invalid_path(fig1):
    with pytest.raises(InvalidPath):
        decompose_path(fig1, Path("q1", (1,)))


@st.composite
def walks(draw):
    v = random_vass(draw(st.integers(1, 3)), draw(st.integers(1, 4)), 2, draw(st.integers(0, 10**6)))
    here = draw(st.sampled_from(v.states))
    start, tids = here, []
    for _ in range(draw(st.integers(0, 25))):
        t = draw(st.sampled_from(v.outgoing(here)))
        tids.append(t.id)
        here = t.target
    return v, Path(start, tuple(tids))


@given(walks())
@settings(max_examples=150, deadline=None)
def test_decompose_path_conserves_effect(vp):
    v, p = vp
    m, rest = decompose_path(v, p)
    eff = [a + b for a, b in zip(m.effect(v), rest.effect(v))]
    assert tuple(eff) == p.effect(v)
    assert len(rest) <= len(v.states) - 1
    assert len(set(rest.states(v))) == len(rest) + 1
    for cyc in m.cycles:
        assert is_simple_cycle(v, cyc) and len(cyc) <= len(v.states)
    assert m.length + len(rest) == len(p)


def test_extract_self_loops(fig2):
    assert extract_multicycle(fig2, {1: 2, 3: 2}) == MultiCycle({(1,): 2, (3,): 2})


def test_extract_fig1_two_cycle(fig1):
    assert extract_multicycle(fig1, {0: 1, 1: 1, 2: 0}) == MultiCycle({(0, 1): 1})


def test_extract_fig1_mixed(fig1):
    m = extract_multicycle(fig1, {0: 1, 1: 1, 2: 2})
    assert m == MultiCycle({(0, 1): 1, (2,): 2})
    assert m.length == 4


@pytest.mark.parametrize(
    "flow", [{0: 1}, {0: -1, 1: -1}, {0: 1.5, 1: 1.5}, {9: 1}]
)
def test_extract_rejects_bad_flow(fig1, flow):
    with pytest.raises(InvalidFlow):
        extract_multicycle(fig1, flow)


@given(walks())
@settings(max_examples=150, deadline=None)
def test_extract_flatten_identity(vp):
    # a closed walk gives a conserved flow
    v, p = vp
    m, _ = decompose_path(v, p)
    flow = dict(m.transition_counts())
    F = incidence_matrix(v).tolist()
    assert all(sum(F[i][j] * flow.get(t, 0) for j, t in enumerate(v.transition_ids)) == 0 for i in range(len(F)))
    got = extract_multicycle(v, flow)
    assert dict(got.transition_counts()) == flow
    assert got.length == sum(flow.values())
    assert all(is_simple_cycle(v, c) for c in got.cycles)


def test_covering_cycle_fig1(fig1):
    assert covering_cycle(fig1) == Path("q1", (0, 1))


def test_covering_cycle_single_loop():
    assert covering_cycle(single_loop(1)) == Path("q", (0,))


def test_covering_cycle_fig2(fig2):
    assert covering_cycle(fig2) == Path("p_tt", (0, 2))


def test_covering_cycle_not_sc():
    v = make_vass(1, ["a", "b"], [("a", [0], "b"), ("b", [0], "b")])
    assert not is_strongly_connected(v)
    with pytest.raises(NotStronglyConnected):
        covering_cycle(v)


@given(st.integers(1, 3), st.integers(1, 4), st.integers(0, 10**6))
@settings(max_examples=100, deadline=None)
def test_covering_cycle_visits_all(d, n, seed):
    v = random_vass(d, n, 2, seed)
    c = covering_cycle(v)
    assert c.is_cycle(v)
    assert set(c.states(v)) == set(v.states)
    assert len(c) <= max(1, n * (n - 1))


def test_canonical_rotation(fig1):
    assert canonical_cycle(fig1, (1, 0)) == (0, 1)
