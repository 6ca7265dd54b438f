import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from spinlf.quaternion import BudgetExceeded, QuatAlgebra, norm_mod, order_residues, quat_arith, quat_valuation
from spinlf.scalars import GaussianRational


def _rand_order_elt(alg, rng, span=6):
    return alg.from_order_coords([rng.randint(-span, span) for _ in range(4)])


def test_defining_relations(hamilton):
    i, j, k = hamilton.elt(0, 1), hamilton.elt(0, 0, 1), hamilton.elt(0, 0, 0, 1)
    assert quat_arith("mul", i, j) == k
    assert quat_arith("mul", j, i) == -k
    assert i * i == hamilton.elt(-1)


def test_norm_trace_examples(hamilton):
    assert quat_arith("norm", hamilton.elt(1, 1)) == 2
    assert quat_arith("trace", hamilton.elt(0, 1)) == 0
    assert quat_arith("conj", hamilton.elt(1, 2, 3, 4)) == hamilton.elt(1, -2, -3, -4)


def test_unknown_op(hamilton):
    with pytest.raises(ValueError):
        quat_arith("div", hamilton.one(), hamilton.one())


def test_mismatched_algebras(hamilton, disc7):
    with pytest.raises((ValueError, TypeError)):
        hamilton.one() * disc7.one()


@pytest.mark.parametrize("name", ["hamilton", "disc7"])
def test_norm_multiplicative_and_conj_antiinvolution(name):
    alg = QuatAlgebra.named(name)
    rng = random.Random(3)
    for _ in range(500):
        x, y = _rand_order_elt(alg, rng), _rand_order_elt(alg, rng)
        assert (x * y).norm() == x.norm() * y.norm()
        assert (x * y).conj() == y.conj() * x.conj()
        # integrality on the order
        assert Fraction(x.norm()).denominator == 1
        assert Fraction(x.trace()).denominator == 1


_coeff = st.builds(Fraction, st.integers(-20, 20), st.integers(1, 6))


@given(st.lists(_coeff, min_size=4, max_size=4))
def test_norm_is_x_xbar(coeffs):
    alg = QuatAlgebra.disc7()
    x = alg.elt(*coeffs)
    assert x * x.conj() == alg.elt(x.norm())
    assert x + x.conj() == alg.elt(x.trace())


def test_gaussian_coefficients_keep_relations(hamilton):
    I = GaussianRational(0, 1)
    x = hamilton.elt(I, 1, 0, 0)
    y = hamilton.elt(0, 0, 1, I)
    assert (x * y).norm() == x.norm() * y.norm()


def test_bad_algebras():
    with pytest.raises(ValueError):
        QuatAlgebra(1, -1, 2, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    # not closed under multiplication
    with pytest.raises(ValueError):
        QuatAlgebra(-1, -1, 2, [[1, 0, 0, 0], [0, Fraction(1, 3), 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])


# --- residues -------------------------------------------------------------------


def test_residue_counts(hamilton):
    assert sum(1 for _ in order_residues(hamilton, 2, 1)) == 16
    assert sum(1 for _ in order_residues(hamilton, 3, 1)) == 81


@pytest.mark.parametrize("ell,m", [(2, 1), (3, 1), (2, 2), (3, 2)])
def test_residues_distinct(hamilton, ell, m):
    seen = set()
    q = ell**m
    for idx, lift in order_residues(hamilton, ell, m):
        key = tuple(int(c) % q for c in hamilton.order_coords(lift))
        assert key == idx.coords
        seen.add(key)
    assert len(seen) == q**4


def test_even_norm_classes_hurwitz(hamilton):
    # 2 ramifies: even norm cuts out the maximal ideal (1+i)O / 2O, 4 classes
    even = [idx for idx, _ in order_residues(hamilton, 2, 1) if norm_mod(hamilton, idx.coords, 2) == 0]
    assert len(even) == 4


def test_even_norm_classes_split(disc7):
    # at a split prime B_0/2 = M_2(F_2) and det = 0 on 10 of 16 matrices
    even = [idx for idx, _ in order_residues(disc7, 2, 1) if norm_mod(disc7, idx.coords, 2) == 0]
    assert len(even) == 10


def test_norm_mod_matches_norm(disc7):
    rng = random.Random(5)
    for _ in range(100):
        c = [rng.randint(0, 40) for _ in range(4)]
        assert norm_mod(disc7, c, 9) == int(disc7.from_order_coords(c).norm()) % 9


def test_residue_budget(hamilton):
    with pytest.raises(BudgetExceeded):
        next(order_residues(hamilton, 3, 2, budget=100))


# --- valuations -------------------------------------------------------------------


def test_valuation_examples(hamilton):
    omega = hamilton.basis_elt(3)
    assert quat_valuation(hamilton.one(), 2) == 0
    assert quat_valuation(hamilton.elt(Fraction(1, 2)), 2) == -1
    assert quat_valuation(omega * 2, 2) == 1
    with pytest.raises(ValueError, match="valuation of zero"):
        quat_valuation(hamilton.zero(), 2)


def test_valuation_scaling_and_superadditive(disc7):
    rng = random.Random(9)
    for _ in range(200):
        x, y = _rand_order_elt(disc7, rng), _rand_order_elt(disc7, rng)
        if x.is_zero() or y.is_zero() or (x + y).is_zero():
            continue
        for ell in (2, 3):
            assert quat_valuation(x * ell, ell) == quat_valuation(x, ell) + 1
            assert quat_valuation(x + y, ell) >= min(quat_valuation(x, ell), quat_valuation(y, ell))


def test_json_roundtrip(disc7):
    assert QuatAlgebra.from_json(disc7.to_json()) == disc7
