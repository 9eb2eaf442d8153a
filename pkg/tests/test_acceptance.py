"""Acceptance criteria 1-10; each test prints one PASS/FAIL line."""
import contextlib
import io
import json
import random
import time
from fractions import Fraction

import pytest

from vasslyze.cli import main
from vasslyze.decompose import INF, NON_TERMINATING, TERMINATING, classify, decompose, max_qrf_lp, positive_qrf_lp
from vasslyze.farkas import nonneg_multicycle_through, qrf_ranking_t, system_A, system_B
from vasslyze.gen import corpus
from vasslyze.linear import analyze_linear, linear_lp
from vasslyze.linmap import LinMap
from vasslyze.model import format_vass, incidence_matrix, update_matrix
from vasslyze.oracle import growth_estimate, termination_curve
from vasslyze.ratlp import Infeasible, Optimal, Unbounded, solve_lp
from vasslyze.report import multicycle_from_json
from vasslyze.verify import check_linmap, check_multicycle, halfspace_or_witness

from conftest import ACCEPTANCE_LINES, load
from test_ratlp import BEALE, random_lp


def report(n: int, ok: bool, what: str, seconds: float, limit: float) -> None:
    within = seconds < limit
    status = "PASS" if ok and within else "FAIL"
    line = f"criterion {n:>2} {status}: {what} ({seconds:.2f}s, limit {limit:g}s)"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line
    assert within, line


@pytest.fixture(scope="module")
def acc_corpus():
    return corpus(200)


def _ray_ok(v, ray):
    U, F = update_matrix(v).tolist(), incidence_matrix(v).tolist()
    return (
        all(x >= 0 for x in ray)
        and sum(ray) > 0
        and all(sum(a * x for a, x in zip(row, ray)) >= 0 for row in U)
        and all(sum(a * x for a, x in zip(row, ray)) == 0 for row in F)
    )


def test_criterion_1():
    t0 = time.perf_counter()
    res = solve_lp(linear_lp(load("fig1")))
    ok = isinstance(res, Optimal) and res.value == 4 and res.value.denominator == 1
    report(1, ok, f"fig1 linear LP optimum = {getattr(res, 'value', None)}", time.perf_counter() - t0, 1)


def test_criterion_2():
    t0 = time.perf_counter()
    v = load("fig1")
    r = classify(v)
    emitted = r.components[0].rf
    known = LinMap((3, 1), {"q1": 0, "q2": 1})
    ok = (
        (r.verdict, r.k, r.tight) == (TERMINATING, 1, True)
        and check_linmap(v, emitted).is_rf
        and check_linmap(v, known).is_rf
    )
    report(2, ok, f"fig1 classify k={r.k} tight={r.tight}, both RFs verify", time.perf_counter() - t0, 1)


def test_criterion_3():
    t0 = time.perf_counter()
    v = load("fig2")
    res = solve_lp(linear_lp(v))
    lin = analyze_linear(v)
    r = classify(v)
    ok = (
        isinstance(res, Unbounded)
        and linear_lp(v).is_recession_ray(res.ray)
        and not lin.bounded
        and _ray_ok(v, lin.ray)
        and (r.verdict, r.k, r.tight) == (TERMINATING, 2, True)
    )
    report(3, ok, f"fig2 linear LP unbounded with verified ray, k={r.k} tight={r.tight}", time.perf_counter() - t0, 1)


def test_criterion_4():
    t0 = time.perf_counter()
    fig1, fig2 = load("fig1"), load("fig2")
    c1, c2 = termination_curve(fig1, 24), termination_curve(fig2, 24)
    L1, L2 = c1.values(), c2.values()
    r1 = [L1[n] / n for n in range(8, 25)]
    r2 = [L2[2 * n] / L2[n] for n in range(6, 13)]
    g1, g2 = growth_estimate(c1), growth_estimate(c2)
    k1, k2 = classify(fig1).k, classify(fig2).k
    ok = (
        all(3.2 <= x <= 4.5 for x in r1)
        and all(3.0 <= x <= 5.0 for x in r2)
        and abs(g1 - k1) <= 0.5
        and abs(g2 - k2) <= 0.5
    )
    what = (
        f"L(n)/n in [{min(r1):.3f}, {max(r1):.3f}], L(2n)/L(n) in [{min(r2):.3f}, {max(r2):.3f}], "
        f"growth {g1:.3f} (k={k1}) and {g2:.3f} (k={k2})"
    )
    report(4, ok, what, time.perf_counter() - t0, 60)


def test_criterion_5(acc_corpus):
    t0 = time.perf_counter()
    bad, checked = 0, 0
    for v in acc_corpus:
        for t in v.transition_ids:
            m = nonneg_multicycle_through(v, t)
            f = qrf_ranking_t(v, t)
            checked += 1
            if (m is None) == (f is None):
                bad += 1
            elif m is not None:
                if not (check_multicycle(v, m, require_nonneg=True).ok and m.contains(t)):
                    bad += 1
            else:
                chk = check_linmap(v, f)
                if not (chk.is_qrf and t in chk.ranked):
                    bad += 1
    report(5, bad == 0, f"Farkas dichotomy over {checked} transitions, {bad} violations", time.perf_counter() - t0, 300)


def test_criterion_6(acc_corpus):
    t0 = time.perf_counter()
    bad = 0
    for v in acc_corpus:
        bounded = analyze_linear(v).bounded
        k = decompose(v).k
        if bounded != (k == 1):
            bad += 1
        if not bounded and not (k == INF or k >= 2):
            bad += 1
    report(6, bad == 0, f"linear gap on {len(acc_corpus)} VASS, {bad} violations", time.perf_counter() - t0, 300)


def test_criterion_7(acc_corpus):
    t0 = time.perf_counter()
    bad, deepest, strict_term = 0, 0, True
    for v in acc_corpus:
        r = decompose(v)
        deepest = max(deepest, r.depth)
        if r.depth > v.dim or (r.k != INF and r.k > v.dim):
            bad += 1
        if r.k != INF and r.depth >= v.dim:
            strict_term = False
    what = f"depth <= d and k <= d on {len(acc_corpus)} VASS, {bad} violations (max depth {deepest}; terminating depth < d: {strict_term})"
    report(7, bad == 0, what, time.perf_counter() - t0, 300)


def _cli(*argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf), contextlib.redirect_stderr(io.StringIO()):
        code = main([str(a) for a in argv])
    return code, buf.getvalue()


def test_criterion_8(acc_corpus, tmp_path):
    t0 = time.perf_counter()
    cases = [("fig1", load("fig1")), ("fig2", load("fig2"))] + [(f"c{i}", v) for i, v in enumerate(acc_corpus)]
    bad = 0
    for name, v in cases:
        src = tmp_path / f"{name}.vass"
        src.write_text(format_vass(v))
        code, out = _cli("analyze", src)
        doc = json.loads(out)
        rep = tmp_path / f"{name}.json"
        rep.write_text(out)
        if _cli("verify", rep, src)[0] != 0:
            bad += 1
        if doc["verdict"] == NON_TERMINATING:
            if code != 2:
                bad += 1
            s = next(s for s in doc["sccs"] if s["verdict"] == NON_TERMINATING)
            m = multicycle_from_json(s["witness"] or [])
            if len(m) == 0 or not check_multicycle(v, m, require_nonneg=True).ok:
                bad += 1
        elif code != 0:
            bad += 1
    report(8, bad == 0, f"analyze -> verify closes on {len(cases)} inputs, {bad} violations", time.perf_counter() - t0, 300)


def _certificate_ok(p, res) -> bool:
    if isinstance(res, Optimal):
        return (
            p.is_feasible_point(res.point)
            and p.is_dual_feasible(res.dual)
            and p.dual_objective(res.dual) == res.value
            and sum(c * x for c, x in zip(p.objective, res.point)) == res.value
        )
    if isinstance(res, Unbounded):
        return p.is_feasible_point(res.point) and p.is_recession_ray(res.ray)
    return isinstance(res, Infeasible)


def test_criterion_9(acc_corpus):
    t0 = time.perf_counter()
    problems = [random_lp(random.Random(s)) for s in range(100)]
    for v in [load("fig1"), load("fig2")] + list(acc_corpus[:25]):
        problems += [linear_lp(v), max_qrf_lp(v), positive_qrf_lp(v)]
        for t in v.transition_ids:
            problems += [system_A(v, t), system_B(v, t)]
    bad = sum(not _certificate_ok(p, solve_lp(p)) for p in problems)
    beale = solve_lp(BEALE)
    beale_ok = isinstance(beale, Optimal) and beale.value == Fraction(5, 4)
    what = f"{len(problems)} LPs with exact duality/ray certificates, {bad} violations; Beale instance solved: {beale_ok}"
    report(9, bad == 0 and beale_ok, what, time.perf_counter() - t0, 300)


def test_criterion_10():
    t0 = time.perf_counter()
    rng = random.Random(2024)
    bad, normals = 0, 0
    for _ in range(500):
        d = rng.randint(1, 3)
        xs = [tuple(rng.randint(-3, 3) for _ in range(d)) for _ in range(rng.randint(1, 6))]
        r = halfspace_or_witness(xs, d)
        if (r.normal is None) == (r.coefficients is None):
            bad += 1
        elif r.normal is not None:
            normals += 1
            if not (all(n > 0 for n in r.normal) and all(sum(a * b for a, b in zip(x, r.normal)) < 0 for x in xs)):
                bad += 1
        else:
            b = r.coefficients
            total = [sum(bi * x[i] for bi, x in zip(b, xs)) for i in range(d)]
            if not (all(isinstance(bi, int) and bi >= 0 for bi in b) and any(b) and all(s >= 0 for s in total)):
                bad += 1
    what = f"half-space alternative on 500 sets ({normals} normals, {500 - normals} witnesses), {bad} violations"
    report(10, bad == 0, what, time.perf_counter() - t0, 300)
