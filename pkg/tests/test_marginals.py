import math
import warnings

import numpy as np
import pytest

from copulasched.marginals import (
    DemarcationPointError,
    DomainError,
    LuYuTranscendental,
    PaperPiecewise,
    Tabulated,
    eval_F,
    eval_F_derivative,
    marginal_from_dict,
    quantile,
    tabulated_from_values,
)

A, B = 1.715, 0.76


def test_known_values(f_ind):
    assert eval_F(f_ind, 1.0) == 0.5
    assert eval_F(f_ind, 1.715) == 1.0
    assert eval_F(f_ind, (A + 1) / 2) == pytest.approx(0.76, abs=1e-15)
    assert eval_F(f_ind, 0.3) == 0.0
    assert eval_F(f_ind, math.inf) == 1.0
    assert eval_F(LuYuTranscendental(), 1.0) == 0.5


def test_negative_x_rejected(f_ind):
    with pytest.raises(DomainError):
        eval_F(f_ind, -0.1)


def test_quantile_examples(f_ind):
    assert quantile(f_ind, 0.5) == pytest.approx(1.0, abs=1e-15)
    assert quantile(f_ind, 0.76) == pytest.approx(1.3575, abs=1e-14)
    assert quantile(f_ind, 0.0) == pytest.approx(1 / A, abs=1e-15)
    assert quantile(f_ind, 1.0) == pytest.approx(A, abs=1e-15)
    with pytest.raises(DomainError):
        quantile(f_ind, 1.5)


def test_derivative_examples(f_ind):
    assert eval_F_derivative(f_ind, 1.2) == pytest.approx(0.52 / 0.715, rel=1e-14)
    assert eval_F_derivative(f_ind, 0.3) == 0.0
    assert eval_F_derivative(f_ind, 2.0) == 0.0


def test_derivative_at_kink_reports_both_sides(f_ind):
    p4 = (A + 1) / 2
    with pytest.raises(DemarcationPointError) as info:
        eval_F_derivative(f_ind, p4)
    assert info.value.left == pytest.approx(0.52 / 0.715)
    assert info.value.right == pytest.approx(0.48 / 0.715)
    assert eval_F_derivative(f_ind, p4, side=-1) == info.value.left


@pytest.mark.parametrize("x", [0.6, 0.65, 0.8, 0.95, 1.1, 1.3, 1.4, 1.6])
def test_derivative_matches_central_difference(f_ind, x):
    h = 1e-6
    fd = (eval_F(f_ind, x + h) - eval_F(f_ind, x - h)) / (2 * h)
    assert abs(eval_F_derivative(f_ind, x) - fd) <= 1e-5


def test_continuity_at_demarcation_points(f_ind):
    for p in f_ind.demarcation_points:
        left = eval_F(f_ind, math.nextafter(p, 0.0))
        right = eval_F(f_ind, math.nextafter(p, math.inf))
        assert abs(left - right) <= 1e-12


def test_symmetry_and_monotone_on_grid(f_ind, f_two):
    xs = np.linspace(1e-3, 100.0, 20001)
    for f in (f_ind, f_two):
        vals = eval_F(f, xs)
        assert np.max(np.abs(vals + eval_F(f, 1.0 / xs) - 1.0)) <= 1e-12
        assert np.all(np.diff(vals) >= 0.0)


def test_luyu_is_not_reciprocal_symmetric():
    f = LuYuTranscendental()
    assert eval_F(f, 2.0) + eval_F(f, 0.5) == pytest.approx(1.098, abs=1e-3)


def test_vectorized_quantile_matches_scalar(f_ind):
    us = np.linspace(0.0, 1.0, 101)
    vec = quantile(f_ind, us)
    assert np.array_equal(vec, [quantile(f_ind, float(u)) for u in us])


def test_reciprocal_quantile(f_ind):
    us = np.linspace(0.001, 0.999, 999)
    assert np.max(np.abs(quantile(f_ind, us) * quantile(f_ind, 1 - us) - 1.0)) <= 1e-9


def test_range_warning_and_errors():
    with pytest.warns(UserWarning):
        PaperPiecewise(1.5, 0.76)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        PaperPiecewise(2.2468, 0.7607)
    with pytest.raises(DomainError):
        PaperPiecewise(1.0, 0.76)
    with pytest.raises(DomainError):
        PaperPiecewise(1.715, 0.5)


def test_tabulated_interpolates_and_inverts():
    f = tabulated_from_values([1.0, 2.0, 3.0], [0.0, 0.5, 1.0])
    assert eval_F(f, 0.5) == 0.0
    assert eval_F(f, 1.5) == 0.25
    assert eval_F(f, 10.0) == 1.0
    assert quantile(f, 0.25) == 1.5
    assert quantile(f, 0.0) == 1.0
    assert eval_F_derivative(f, 2.5) == 0.5


def test_tabulated_validation():
    with pytest.raises(DomainError):
        Tabulated(((1.0, 0.5), (1.0, 0.6)))
    with pytest.raises(DomainError):
        Tabulated(((1.0, 0.5), (2.0, 0.4)))
    with pytest.raises(DomainError):
        Tabulated(((1.0, 1.2),))


@pytest.mark.parametrize("m", [PaperPiecewise(1.715, 0.76), LuYuTranscendental(),
                               Tabulated(((1.0, 0.3), (2.0, 1.0)))])
def test_dict_round_trip(m):
    assert marginal_from_dict(m.to_dict()) == m


def test_reciprocal_pieces_carry_chain_factor(f_ind):
    # below 1 the pieces are affine in 1/x
    x = 0.9
    assert eval_F_derivative(f_ind, x) == pytest.approx(0.52 / 0.715 / x**2, rel=1e-14)
