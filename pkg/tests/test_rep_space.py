"""Evaluation on matrix tuples, the entrywise brackets, the bivector, and
the three-way bracket comparison."""

import math

import numpy as np
import pytest

from kzfox import (
    Anchor,
    COMPLEX,
    ConnectionSpec,
    FreeSeries,
    MatrixTuple,
    PLPath,
    PunctureConfig,
    RATIONAL,
    bivector_pi,
    double_bracket_kks,
    evaluate,
    holonomy_reg,
    kks_oracle,
    tail_bound,
    vdb_bracket,
    verify_theorem2,
)
from kzfox.errors import DomainError, ShapeError, ValidationError
from kzfox.rep_space import _matrix_gradient, _oracle_tensor

P3 = PunctureConfig([0.0, 1.0, 2.0])
BASE = Anchor.tangential(1, 1.0)
LOOP_A4 = [0.3, 0.3 - 0.35j, 1.5 - 0.35j, 1.5 + 0.35j, 0.7 + 0.35j, 0.7]
LOOP_BUP = [
    0.15,
    0.15 + 0.5j,
    2.5 + 0.5j,
    2.5 - 0.45j,
    0.5 - 0.45j,
    0.5 + 0.25j,
    0.45 + 0.25j,
    0.45,
]


def _loop(points):
    return PLPath(P3, BASE, BASE, [complex(p) for p in points])


# ---------------------------------------------------------------------------
# MatrixTuple and evaluation
# ---------------------------------------------------------------------------
def test_matrix_tuple_validation():
    with pytest.raises(ShapeError):
        MatrixTuple([np.zeros((2, 2)), np.zeros((3, 3))])
    with pytest.raises(ValidationError):
        MatrixTuple([np.array([[np.nan, 0.0], [0.0, 0.0]])])
    with pytest.raises(DomainError):
        MatrixTuple([])


def test_random_tuple_norms_are_exact():
    X = MatrixTuple.random(3, 2, radius=0.1, seed=5)
    assert X.n == 3 and X.N == 2
    for M in X.matrices:
        assert np.linalg.norm(M, 2) == pytest.approx(0.1, rel=1e-12)
    assert X.norm_bound == pytest.approx(0.1, rel=1e-12)


def test_random_tuple_deterministic():
    X1 = MatrixTuple.random(2, 2, seed=11)
    X2 = MatrixTuple.random(2, 2, seed=11)
    for A, B in zip(X1.matrices, X2.matrices):
        assert np.array_equal(A, B)


def test_evaluate_generator():
    X = MatrixTuple.random(2, 3, seed=1)
    x1 = FreeSeries.generator(1, 2, 4, COMPLEX)
    assert np.allclose(evaluate(x1, X), X.matrices[0])


def test_evaluate_rejects_rational_backend():
    X = MatrixTuple.random(2, 2)
    with pytest.raises(DomainError):
        evaluate(FreeSeries.generator(1, 2, 4, RATIONAL), X)


def test_evaluate_rejects_generator_mismatch():
    X = MatrixTuple.random(3, 2)
    with pytest.raises(ShapeError):
        evaluate(FreeSeries.generator(1, 2, 4, COMPLEX), X)


def test_evaluate_exp_of_nilpotent_is_exact():
    """exp(x1) at D = 8 on a nilpotent X1 (X1^3 = 0) equals the matrix
    exponential exactly (the truncation tail vanishes identically)."""
    S = np.zeros((3, 3))
    S[0, 1] = 0.7
    S[1, 2] = -0.4
    X = MatrixTuple([S])
    series = FreeSeries.generator(1, 1, 8, RATIONAL).exp().to_complex()
    expected = np.eye(3) + S + S @ S / 2.0
    assert np.max(np.abs(evaluate(series, X) - expected)) < 1e-15


def test_evaluate_respects_multiplication_up_to_tail(rng):
    X = MatrixTuple.random(2, 2, radius=0.05, seed=3)
    coeffs_a = {(): 1.0, (1,): 0.5, (1, 2): -0.25, (2, 2, 1): 0.125}
    coeffs_b = {(): 1.0, (2,): -0.5, (2, 1): 0.75}
    a = FreeSeries(2, 4, coeffs_a, COMPLEX)
    b = FreeSeries(2, 4, coeffs_b, COMPLEX)
    lhs = evaluate(a * b, X)
    rhs = evaluate(a, X) @ evaluate(b, X)
    assert np.max(np.abs(lhs - rhs)) <= 2.0 * tail_bound(4, X)


def test_tail_bound_values():
    X = MatrixTuple.random(3, 2, radius=0.1, seed=0)
    r = 3 * 0.1
    assert tail_bound(5, X) == pytest.approx(r**6 / (1 - r), rel=1e-9)
    Y = MatrixTuple.random(2, 2, radius=0.6, seed=0)
    assert tail_bound(5, Y) == math.inf


# ---------------------------------------------------------------------------
# entrywise brackets: contraction vs finite-difference oracle
# ---------------------------------------------------------------------------
def test_vdb_bracket_coordinate_pattern():
    """{(x_a)_ij, (x_b)_uv} = delta_ab (delta_ju (x_a)_iv - delta_iv (x_a)_uj)."""
    X = MatrixTuple.random(2, 3, radius=0.3, seed=7)
    D = 4
    for a in (1, 2):
        for b in (1, 2):
            xa = FreeSeries.generator(a, 2, D, COMPLEX)
            xb = FreeSeries.generator(b, 2, D, COMPLEX)
            db = double_bracket_kks(xa, xb)
            Xa = X.matrices[a - 1]
            for i in range(3):
                for j in range(3):
                    for u in range(3):
                        for v in range(3):
                            expected = 0.0
                            if a == b:
                                expected = (j == u) * Xa[i, v] - (i == v) * Xa[u, j]
                            got = vdb_bracket(db, X, i, j, u, v)
                            assert abs(got - expected) < 1e-12


def test_kks_oracle_on_coordinates():
    X = MatrixTuple.random(1, 3, radius=0.4, seed=2)
    X1 = X.matrices[0]
    for i, j, u, v in [(0, 1, 1, 2), (0, 0, 1, 1), (2, 1, 1, 0), (0, 2, 2, 0)]:
        F = lambda Y: Y.matrices[0][i, j]
        G = lambda Y: Y.matrices[0][u, v]
        expected = (j == u) * X1[i, v] - (i == v) * X1[u, j]
        assert abs(kks_oracle(F, G, X) - expected) < 1e-8


def test_kks_oracle_trace_is_casimir():
    X = MatrixTuple.random(2, 3, radius=0.4, seed=9)
    F = lambda Y: complex(np.trace(Y.matrices[0]))
    for G in (
        lambda Y: Y.matrices[0][0, 1],
        lambda Y: Y.matrices[1][2, 0],
        lambda Y: complex(np.trace(Y.matrices[0] @ Y.matrices[1])),
    ):
        assert abs(kks_oracle(F, G, X)) < 1e-8


def test_kks_oracle_bilinear_and_leibniz():
    X = MatrixTuple.random(1, 2, radius=0.5, seed=4)
    F1 = lambda Y: Y.matrices[0][0, 1]
    F2 = lambda Y: Y.matrices[0][1, 0]
    G = lambda Y: Y.matrices[0][0, 0]
    lhs = kks_oracle(lambda Y: F1(Y) + 2.0 * F2(Y), G, X)
    rhs = kks_oracle(F1, G, X) + 2.0 * kks_oracle(F2, G, X)
    assert abs(lhs - rhs) < 1e-8
    # Leibniz: {F1 F2, G} = F1 {F2, G} + {F1, G} F2
    lhs = kks_oracle(lambda Y: F1(Y) * F2(Y), G, X)
    rhs = F1(X) * kks_oracle(F2, G, X) + kks_oracle(F1, G, X) * F2(X)
    assert abs(lhs - rhs) < 1e-8


def test_vdb_matches_oracle_on_coordinate_pairs():
    """The entrywise contraction of the generator double bracket agrees with
    the finite-difference bracket for N <= 3."""
    for N in (2, 3):
        X = MatrixTuple.random(2, N, radius=0.3, seed=N)
        for a in (1, 2):
            for b in (1, 2):
                db = double_bracket_kks(
                    FreeSeries.generator(a, 2, 3, COMPLEX),
                    FreeSeries.generator(b, 2, 3, COMPLEX),
                )
                for i in range(N):
                    for v in range(N):
                        F = lambda Y: Y.matrices[a - 1][i, (i + 1) % N]
                        G = lambda Y: Y.matrices[b - 1][(v + 1) % N, v]
                        got = vdb_bracket(db, X, i, (i + 1) % N, (v + 1) % N, v)
                        want = kks_oracle(F, G, X)
                        assert abs(got - want) < 1e-8


# ---------------------------------------------------------------------------
# the bivector
# ---------------------------------------------------------------------------
def test_regularization_series_constant_term():
    """At X_m = 0 the adjoint-series operator reduces to -1/2 times the
    identity pairing."""
    X = MatrixTuple([np.zeros((2, 2)), np.zeros((2, 2))])
    pi = bivector_pi(X, 1, degree=8)
    assert np.max(np.abs(pi._r_op + 0.5 * np.eye(4))) < 1e-14


def test_bivector_wedge_antisymmetric():
    X = MatrixTuple.random(3, 2, radius=0.2, seed=6)
    pi = bivector_pi(X, 1, degree=10)
    F = lambda Y: Y.matrices[0][0, 1] * Y.matrices[2][1, 1]
    G = lambda Y: Y.matrices[1][1, 0] + Y.matrices[0][0, 0] ** 2
    assert abs(pi.wedge_part(F, G) + pi.wedge_part(G, F)) < 1e-8


def test_gl_action_on_coordinates_is_adjoint():
    """The diagonal action applied to the coordinate (x_b)_vu reproduces
    [X_b, E_vu] entrywise; on tr(x_1) it vanishes."""
    X = MatrixTuple.random(2, 3, radius=0.3, seed=8)
    pi = bivector_pi(X, 1, degree=10)
    N = X.N
    for b in (0, 1):
        Xb = X.matrices[b]
        for v in range(N):
            for u in range(N):
                E = np.zeros((N, N))
                E[v, u] = 1.0
                got = pi.gl_action(lambda Y: Y.matrices[b][v, u])
                assert np.max(np.abs(got - (Xb @ E - E @ Xb))) < 1e-7
    assert np.max(np.abs(pi.gl_action(lambda Y: complex(np.trace(Y.matrices[0]))))) < 1e-10


def test_bivector_rejects_bad_generator_index():
    X = MatrixTuple.random(2, 2)
    with pytest.raises(DomainError):
        bivector_pi(X, 3)


# ---------------------------------------------------------------------------
# three-way loop-holonomy bracket comparison
# ---------------------------------------------------------------------------
@pytest.fixture(scope="module")
def small_report():
    conn = ConnectionSpec(P3, 3)
    X = MatrixTuple.random(3, 2, radius=0.1, seed=0)
    return verify_theorem2(conn, _loop(LOOP_BUP), _loop(LOOP_A4), X)


def test_three_way_agreement_small(small_report):
    rep = small_report
    assert rep.n_crossings == 2
    assert rep.base_linking == 0.0
    assert rep.passed
    assert rep.max_discrepancy <= rep.tolerance


def test_three_way_trace_specialization(small_report):
    rep = small_report
    assert abs(rep.trace_pi()) < 1e-6
    # the crossing sum carries the truncation tail of the subholonomies
    assert abs(rep.trace_bracket() - rep.trace_crossing()) < rep.tolerance


def test_report_json_fields(small_report):
    data = small_report.to_json_dict()
    for key in (
        "lhs_oracle",
        "rhs_formula",
        "vdb",
        "max_disc",
        "tail_bound",
        "tolerance",
        "passed",
    ):
        assert key in data
    assert set(data["max_disc"]) == {
        "oracle_vs_formula",
        "oracle_vs_vdb",
        "formula_vs_vdb",
    }


def test_same_loop_bracket_antisymmetric():
    """With both arguments the same loop, the entry-bracket tensor is
    antisymmetric under (i, j) <-> (u, v) and vanishes on the diagonal."""
    conn = ConnectionSpec(P3, 3)
    X = MatrixTuple.random(3, 2, radius=0.1, seed=1)
    h = holonomy_reg(conn, _loop(LOOP_A4)).series
    g = _matrix_gradient(lambda Y: evaluate(h, Y), X)
    T = _oracle_tensor(g, g, X)
    assert np.max(np.abs(T + T.transpose(2, 3, 0, 1))) < 1e-8
    for i in range(2):
        for j in range(2):
            assert abs(T[i, j, i, j]) < 1e-8


def test_verify_theorem2_validations():
    conn = ConnectionSpec(P3, 3)
    X = MatrixTuple.random(2, 2)  # wrong generator count
    with pytest.raises(ShapeError):
        verify_theorem2(conn, _loop(LOOP_BUP), _loop(LOOP_A4), X)
