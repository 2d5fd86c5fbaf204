"""Double brackets, reduced coactions, necklace structures, twist maps."""

from fractions import Fraction

from kzfox import (
    CyclicByFree,
    FreeSeries,
    RATIONAL,
    TensorSeries,
    coaction_mu_kks,
    double_bracket_from_pairing,
    double_bracket_kks,
    double_derivation_from_fox,
    mu_bar_kks,
    necklace_bracket,
    necklace_cobracket,
    rho_inner,
    rho_kks,
    rho_left,
    rho_right,
)
from kzfox.brackets_coactions import alpha, alpha_inv, beta, beta_inv
from conftest import random_series

N = 2
D = 4


def w(word, coeff=1) -> FreeSeries:
    return FreeSeries(N, D, {tuple(word): Fraction(coeff)}, RATIONAL)


def _zero_through(series, degree):
    return all(c == 0 for k, c in series.coeffs.items() if len(k) <= degree)


def _cbf_zero_through(t, degree):
    return all(
        c == 0 for (cw, ww), c in t.coeffs.items() if len(cw) + len(ww) <= degree
    )


# ---------------------------------------------------------------------------
# double bracket
# ---------------------------------------------------------------------------
def test_double_bracket_on_generators():
    # {{x_i, x_j}} = delta_ij (1 (x) x_i - x_i (x) 1)
    one = FreeSeries.unit(N, D, RATIONAL)
    x1, x2 = w([1]), w([2])
    assert double_bracket_kks(x1, x1) == TensorSeries.outer(one, x1) - TensorSeries.outer(
        x1, one
    )
    assert double_bracket_kks(x1, x2).is_zero()


def test_double_bracket_antisymmetry(rng):
    for _ in range(20):
        a = random_series(rng, N, D)
        b = random_series(rng, N, D)
        assert double_bracket_kks(a, b) == -double_bracket_kks(b, a).swap()


def test_double_bracket_derivation_rules(rng):
    for _ in range(20):
        a = random_series(rng, N, D, 2)
        b = random_series(rng, N, D, 2)
        c = random_series(rng, N, D, 2)
        # second slot: {{a, bc}} = (b (x) 1) {{a, c}} + {{a, b}} (1 (x) c)
        assert double_bracket_kks(a, b * c) == double_bracket_kks(a, c).map_left(
            lambda s: b * s
        ) + double_bracket_kks(a, b).map_right(lambda s: s * c)
        # first slot: {{ab, c}} = (1 (x) a) {{b, c}} + {{a, c}} (b (x) 1)
        assert double_bracket_kks(a * b, c) == double_bracket_kks(b, c).map_right(
            lambda s: a * s
        ) + double_bracket_kks(a, c).map_left(lambda s: s * b)


def test_double_bracket_counit_recovers_pairing(rng):
    for _ in range(20):
        a = random_series(rng, N, D)
        b = random_series(rng, N, D)
        assert double_bracket_kks(a, b).eps_left() == rho_kks(a, b)


def test_cyclic_vanishing_for_trivial_pairings(rng):
    g = random_series(rng, N, D, 2)
    for rho in (rho_inner(g), rho_left(1), rho_right(2)):
        for _ in range(10):
            a = random_series(rng, N, D)
            b = random_series(rng, N, D)
            db = double_bracket_from_pairing(rho, a, b)
            assert db.multiply_legs().cyclic_project().is_zero()


# ---------------------------------------------------------------------------
# reduced coaction and the coaction product rule
# ---------------------------------------------------------------------------
def test_mu_bar_contracts_adjacent_equal_letters():
    assert mu_bar_kks(w([1, 1])) == w([1])
    assert mu_bar_kks(w([1, 2])).is_zero()
    assert mu_bar_kks(w([1, 2, 2, 1])) == w([1, 2, 1])
    assert mu_bar_kks(w([1, 1, 1])) == w([1, 1]).scale(Fraction(2))
    assert mu_bar_kks(w([1])).is_zero()
    assert mu_bar_kks(w([], 3)).is_zero()


def test_mu_bar_quasi_derivation(rng):
    for _ in range(20):
        a = random_series(rng, N, D)
        b = random_series(rng, N, D)
        diff = (
            mu_bar_kks(a * b)
            - mu_bar_kks(a) * b
            - a * mu_bar_kks(b)
            - rho_kks(a, b)
        )
        assert _zero_through(diff, D - 1)


def _mul_free_right(t: CyclicByFree, b: FreeSeries) -> CyclicByFree:
    terms = {}
    for (cw, ww), c in t.coeffs.items():
        for wb, cb in b.coeffs.items():
            key = (cw, ww + wb)
            terms[key] = terms.get(key, 0) + c * cb
    return CyclicByFree(t.n, t.degree, terms, t.backend)


def _mul_free_left(a: FreeSeries, t: CyclicByFree) -> CyclicByFree:
    terms = {}
    for (cw, ww), c in t.coeffs.items():
        for wa, ca in a.coeffs.items():
            key = (cw, wa + ww)
            terms[key] = terms.get(key, 0) + ca * c
    return CyclicByFree(t.n, t.degree, terms, t.backend)


def test_coaction_product_rule(rng):
    """mu(ab) = mu(a)(1 (x) b) + (1 (x) a)mu(b) + (cyclic (x) id){{a, b}}."""
    for _ in range(20):
        a = random_series(rng, N, D)
        b = random_series(rng, N, D)
        lhs = coaction_mu_kks(a * b)
        rhs = (
            _mul_free_right(coaction_mu_kks(a), b)
            + _mul_free_left(a, coaction_mu_kks(b))
            + CyclicByFree.from_tensor(double_bracket_kks(a, b))
        )
        assert _cbf_zero_through(lhs - rhs, D - 1)


def test_coaction_product_rule_rotated_collision():
    """Regression: the cyclic projection must accumulate tensor keys that
    collide after rotation (here (2,1) and (1,2) from mu(x1 x2 x2))."""
    a, b = w([1]), w([2, 2])
    lhs = coaction_mu_kks(a * b)
    rhs = _mul_free_left(a, coaction_mu_kks(b)) + CyclicByFree.from_tensor(
        double_bracket_kks(a, b)
    )
    assert _cbf_zero_through(lhs - rhs, D - 1)


def test_from_tensor_accumulates_rotations():
    t = TensorSeries(
        N, D, {((2, 1), ()): Fraction(1), ((1, 2), ()): Fraction(-1)}, RATIONAL
    )
    assert CyclicByFree.from_tensor(t).is_zero()


def test_counit_of_coaction_is_mu_bar(rng):
    """(eps (x) id) mu = mu_bar: drop cyclic legs of length zero... the free
    leg paired with the empty cyclic word carries (eps (x) id) mu."""
    for _ in range(10):
        a = random_series(rng, N, D)
        mu = coaction_mu_kks(a)
        collected = {}
        for (cw, ww), c in mu.coeffs.items():
            if cw == ():
                collected[ww] = collected.get(ww, 0) + c
        reduced = FreeSeries(N, D, collected, RATIONAL)
        assert reduced == mu_bar_kks(a)


# ---------------------------------------------------------------------------
# necklace bracket / cobracket
# ---------------------------------------------------------------------------
def test_necklace_bracket_antisymmetric(rng):
    for _ in range(10):
        a = random_series(rng, N, D)
        b = random_series(rng, N, D)
        assert (necklace_bracket(a, b) + necklace_bracket(b, a)).is_zero()


def test_necklace_bracket_depends_only_on_cyclic_class(rng):
    a = w([1, 2, 1])
    a_rot = w([2, 1, 1])
    b = random_series(rng, N, D)
    assert necklace_bracket(a, b) == necklace_bracket(a_rot, b)


def test_necklace_cobracket_example():
    # x1 x1 -> contraction leaves |x1| against |1| with opposite orientations
    out = necklace_cobracket(w([1, 1]))
    assert not out.is_zero()
    for (u, v), c in out.coeffs.items():
        assert {u, v} == {(), (1,)}


def test_necklace_cobracket_kills_single_letters():
    assert necklace_cobracket(w([1])).is_zero()
    assert necklace_cobracket(w([1, 2])).is_zero()


# ---------------------------------------------------------------------------
# twist maps and double derivations
# ---------------------------------------------------------------------------
def test_twist_maps_inverse_pairs(rng):
    for _ in range(10):
        t = TensorSeries.outer(
            random_series(rng, N, D, 2), random_series(rng, N, D, 2)
        )
        assert alpha_inv(alpha(t)) == t
        assert alpha(alpha_inv(t)) == t
        assert beta_inv(beta(t)) == t
        assert beta(beta_inv(t)) == t


def test_double_derivations_left_right_agree(rng):
    for _ in range(10):
        a = random_series(rng, N, D)
        for m in (1, 2):
            assert double_derivation_from_fox(
                "left", m, a
            ) == double_derivation_from_fox("right", m, a)


def test_double_derivation_on_generator():
    x1 = w([1])
    one = FreeSeries.unit(N, D, RATIONAL)
    t = double_derivation_from_fox("right", 1, x1)
    assert t == TensorSeries.outer(one, one)
    assert double_derivation_from_fox("right", 2, x1).is_zero()
