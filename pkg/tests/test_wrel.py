"""Bag-matrix model: frozen entry oracles and structural invariants."""

import random
from fractions import Fraction

import pytest

import dctool.wrel as wr
from dctool.rig import BOOLEAN, NONNEG_RATIONAL
from dctool.wrel import (
    BagSpace,
    BaseSet,
    PairSpace,
    Truncation,
    UNIT_BASE,
    UNIT_POINT,
    WeightedMatrix,
    bag,
    mat_compose,
)

R = NONNEG_RATIONAL
B = BOOLEAN
XY = BaseSet(("x", "y"))
T4 = Truncation(4)


def nb(n):
    return (UNIT_POINT,) * n


# -- bags and spaces ---------------------------------------------------------


def test_bag_helpers():
    b = bag("y", "x", "y")
    assert b == ("x", "y", "y")
    assert wr.bag_add(b, "x") == ("x", "x", "y", "y")
    assert wr.bag_remove(b, "y") == ("x", "y")
    assert wr.bag_count(b, "y") == 2


def test_enumerate_bags_counts():
    bags = wr.enumerate_bags(XY, 3)
    # sizes 0..3 over two atoms: 1 + 2 + 3 + 4
    assert len(bags) == 10
    assert bags[0] == ()


def test_truncation_validation():
    with pytest.raises(ValueError):
        Truncation(4, margin=1)
    with pytest.raises(ValueError):
        Truncation(1, margin=2)
    assert Truncation(5).safe_limit == 3


def test_base_set_rejects_duplicates():
    with pytest.raises(ValueError):
        BaseSet(("x", "x"))


# -- derivation operators ----------------------------------------------------


def test_d_unit_formula_instances():
    d = wr.d_unit_rel(R, T4)
    assert d.entry(nb(1), nb(2)) == Fraction(2)
    assert d.entry(nb(0), nb(1)) == Fraction(1)
    assert d.entry(nb(2), nb(2)) == Fraction(0)


def test_d_rel_multiplicity_coefficient():
    d = wr.d_rel(XY, R, T4)
    assert d.entry(((), "x"), ("x",)) == Fraction(1)
    assert d.entry((("y",), "x"), ("x", "y")) == Fraction(1)
    assert d.entry((("x",), "x"), ("x", "x")) == Fraction(2)
    assert d.entry((("x", "x"), "x"), ("x", "x", "x")) == Fraction(3)


def test_dcirc_instances():
    dc = wr.dcirc_unit_rel(R, T4)
    assert dc.entry(nb(3), nb(2)) == Fraction(1)
    assert all(r != nb(0) for (r, _c) in wr.dcirc_rel(XY, R, T4).entries)
    dcx = wr.dcirc_rel(XY, R, T4)
    assert dcx.entry(("x", "y"), (("y",), "x")) == Fraction(1)
    assert dcx.entry(("x", "x"), (("x",), "x")) == Fraction(1)


def test_bang_zero_instances():
    b0 = wr.bang_zero_rel(XY, R, T4)
    assert b0.entry((), ()) == Fraction(1)
    assert b0.entry(("x",), ()) == Fraction(0)
    assert mat_compose(b0, b0) == b0


def test_s_unit_formula_instances():
    s = wr.s_unit_rel(R, T4)
    assert s.entry(nb(1), nb(0)) == Fraction(1)
    for m in range(4):
        assert s.entry(nb(0), nb(m)) == Fraction(0)
    assert s.entry(nb(3), nb(2)) == Fraction(1, 3)


def test_s_rel_instances():
    s = wr.s_rel(XY, R, T4)
    assert s.entry(("x", "x"), (("x",), "x")) == Fraction(1, 2)
    assert all(r != () for (r, _c) in s.entries)
    assert s.entry(("x", "y"), (("y",), "x")) == Fraction(1, 2)


def test_boolean_integral_is_coderive():
    assert wr.s_rel(XY, B, T4) == wr.dcirc_rel(XY, B, T4)


# -- K and J -----------------------------------------------------------------


def test_unit_K_diagonal():
    K = wr.K_unit_rel(R, Truncation(5))
    expected = [1, 1, 2, 3]  # entries for n = 0..3 (safe under the truncation)
    for n, v in enumerate(expected):
        assert K.entry(nb(n), nb(n)) == Fraction(v)


def test_K_inverse_inverts_on_safe_band():
    K = wr.K_rel(XY, R, T4)
    K_inv = wr.K_inv_rel(XY, R, T4)
    ident = WeightedMatrix.identity(R, BagSpace(XY, T4.D))
    assert mat_compose(K_inv, K).equal_on_safe_band(ident, T4.safe_limit)
    assert mat_compose(K, K_inv).equal_on_safe_band(ident, T4.safe_limit)


def test_boolean_K_is_identity():
    K = wr.K_rel(XY, B, T4)
    ident = WeightedMatrix.identity(B, BagSpace(XY, T4.D))
    assert K.equal_on_safe_band(ident, T4.safe_limit)


# -- comonoid ----------------------------------------------------------------


def test_delta_split_count():
    com = wr.comonoid_rel(XY, R, T4)
    row = [(key, v) for key, v in com.delta.entries.items() if key[0] == ("x", "y")]
    assert len(row) == 4
    assert all(v == Fraction(1) for _k, v in row)
    splits = {key[1] for key, _v in row}
    assert splits == {((), ("x", "y")), (("x",), ("y",)), (("y",), ("x",)), (("x", "y"), ())}


def test_counit_and_eps_support():
    com = wr.comonoid_rel(XY, R, T4)
    assert com.counit.entry((), UNIT_POINT) == Fraction(1)
    assert com.counit.entry(("x",), UNIT_POINT) == Fraction(0)
    assert com.eps.entry(("x",), "x") == Fraction(1)
    assert com.eps.entry(("x", "y"), "x") == Fraction(0)


def test_delta_cocommutative():
    com = wr.comonoid_rel(XY, R, T4)
    for (b, (b1, b2)), v in com.delta.entries.items():
        assert com.delta.entry(b, (b2, b1)) == v


# -- unit monoidal maps ------------------------------------------------------


def test_m_unit_laws():
    um = wr.m_unit_rel(XY, R, T4)
    bags = BagSpace(XY, T4.D)
    ubags = wr.unit_bags(T4)
    spread = WeightedMatrix(
        R,
        bags,
        PairSpace(ubags, bags),
        {(b, (nb(n), b)): R.one for b in bags.points() for n in range(T4.D + 1)},
    )
    ident = WeightedMatrix.identity(R, bags)
    assert mat_compose(spread, um.m_RA).equal_on_safe_band(ident, T4.safe_limit)
    ucom = wr.comonoid_rel(UNIT_BASE, R, T4)
    m_eps = mat_compose(um.m_R, ucom.eps)
    assert m_eps.entry(UNIT_POINT, UNIT_POINT) == Fraction(1)
    m_e = mat_compose(um.m_R, ucom.counit)
    assert m_e.entry(UNIT_POINT, UNIT_POINT) == Fraction(1)


# -- Seely -------------------------------------------------------------------


def test_seely_instances():
    bx = BaseSet(("x",))
    by = BaseSet(("y",))
    chi, chi_inv = wr.seely_rel(bx, by, R, T4)
    assert chi.entry(("x", "y", "y"), (("x",), ("y", "y"))) == Fraction(1)
    assert chi.entry((), ((), ())) == Fraction(1)
    combined = BagSpace(BaseSet(("x", "y")), T4.D)
    assert mat_compose(chi, chi_inv) == WeightedMatrix.identity(R, combined)


def test_seely_requires_disjoint_atoms():
    with pytest.raises(ValueError):
        wr.seely_rel(BaseSet(("x",)), BaseSet(("x", "y")), R, T4)


# -- reconstruction ----------------------------------------------------------


def test_unit_reconstruction_matches_direct_operators():
    rec = wr.unit_reconstruct(XY, R, T4)
    lim = T4.safe_limit
    assert rec["J_inv"].equal_on_safe_band(wr.J_inv_rel(XY, R, T4), lim)
    assert rec["K_inv"].equal_on_safe_band(wr.K_inv_rel(XY, R, T4), lim)
    assert rec["s"].equal_on_safe_band(wr.s_rel(XY, R, T4), lim)


def test_unit_reconstruction_boolean_integral_is_coderive():
    rec = wr.unit_reconstruct(XY, B, T4)
    assert rec["s"].equal_on_safe_band(wr.dcirc_rel(XY, B, T4), T4.safe_limit)


# -- composition oracle and structure ----------------------------------------


def test_boolean_composition_matches_relational_oracle():
    rng = random.Random(0)
    atoms = wr.AtomSpace(BaseSet(("a", "b", "c")))
    points = atoms.points()
    for _ in range(20):
        rel_f = {(r, c) for r in points for c in points if rng.random() < 0.4}
        rel_g = {(r, c) for r in points for c in points if rng.random() < 0.4}
        f = WeightedMatrix(B, atoms, atoms, {k: True for k in rel_f})
        g = WeightedMatrix(B, atoms, atoms, {k: True for k in rel_g})
        composed = mat_compose(f, g)
        oracle = {(x, z) for (x, y1) in rel_f for (y2, z) in rel_g if y1 == y2}
        assert set(composed.entries) == oracle


def test_operators_shift_bag_sizes_by_fixed_amounts():
    d = wr.d_rel(XY, R, T4)
    for ((b, _x), col) in d.entries:
        assert len(col) == len(b) + 1
    dc = wr.dcirc_rel(XY, R, T4)
    for (row, (b, _x)) in dc.entries:
        assert len(b) == len(row) - 1
    for (row, col) in wr.K_rel(XY, R, T4).entries:
        assert len(row) == len(col)
    s = wr.s_rel(XY, R, T4)
    for (row, (b, _x)) in s.entries:
        assert len(b) == len(row) - 1


def test_generator_matrices_respect_margin():
    # entries emitted by the operator builders never exceed the declared bound
    for mat in (wr.d_rel(XY, R, T4), wr.s_rel(XY, R, T4), wr.K_rel(XY, R, T4)):
        for (r, c) in mat.entries:
            assert wr.point_weight(mat.row_space, r) <= T4.D
            assert wr.point_weight(mat.col_space, c) <= T4.D


def test_matrix_space_mismatch_raises():
    a = WeightedMatrix.identity(R, BagSpace(XY, 2))
    b = WeightedMatrix.identity(R, BagSpace(XY, 3))
    with pytest.raises(ValueError):
        mat_compose(a, b)
