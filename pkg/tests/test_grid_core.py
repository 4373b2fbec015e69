import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conckit.grid_core import (
    Grid1D,
    GridError,
    GridFunction,
    angle_between,
    inner_product,
    make_box_volume,
    make_composite_gauss_grid,
    make_counting_grid,
    make_gauss_grid,
    make_uniform_grid,
    norm,
    sample,
    union_volume,
)


def test_uniform_two_points():
    g = make_uniform_grid(0, 1, 2)
    np.testing.assert_array_equal(g.nodes, [0, 1])
    np.testing.assert_array_equal(g.weights, [0.5, 0.5])


def test_uniform_three_points():
    g = make_uniform_grid(-1, 1, 3)
    np.testing.assert_array_equal(g.nodes, [-1, 0, 1])
    np.testing.assert_array_equal(g.weights, [0.5, 1, 0.5])


def test_uniform_weight_sum():
    g = make_uniform_grid(-12, 12, 2048)
    assert abs(g.weights.sum() - 24) <= 1e-12 * 24


@pytest.mark.parametrize("a,b,n", [(0, 1, 1), (1, 1, 5), (2, 1, 5)])
def test_uniform_rejects(a, b, n):
    with pytest.raises(GridError):
        make_uniform_grid(a, b, n)


def test_gauss_one_point_is_midpoint():
    g = make_gauss_grid(-1, 1, 1)
    np.testing.assert_allclose(g.nodes, [0], atol=1e-15)
    np.testing.assert_allclose(g.weights, [2])


def test_gauss_two_points():
    g = make_gauss_grid(-1, 1, 2)
    np.testing.assert_allclose(g.nodes, [-1 / np.sqrt(3), 1 / np.sqrt(3)], rtol=1e-14)
    np.testing.assert_allclose(g.weights, [1, 1], rtol=1e-14)
    # exact for x^2: int_{-1}^{1} x^2 = 2/3
    assert abs(np.sum(g.weights * g.nodes**2) - 2 / 3) < 1e-15


def test_gauss_polynomial_exactness():
    g = make_gauss_grid(0, 2, 5)
    assert abs(np.sum(g.weights * g.nodes**4) - 32 / 5) < 1e-13
    # degree 2n-1 = 9 exact, degree 10 is not
    assert abs(np.sum(g.weights * g.nodes**9) - 2**10 / 10) < 1e-10
    assert abs(np.sum(g.weights * g.nodes**10) - 2**11 / 11) > 1e-6


def test_gauss_rejects_bad_interval():
    with pytest.raises(GridError):
        make_gauss_grid(1, 0, 4)


def test_composite_gauss_integrates_kinked_function():
    g = make_composite_gauss_grid([-1, 0, 1], 10)
    assert abs(np.sum(g.weights * np.abs(g.nodes)) - 1.0) < 1e-14
    assert abs(g.weights.sum() - 2) < 1e-14


def test_grid_invariants_enforced():
    with pytest.raises(GridError):
        Grid1D([0, 0, 1], [1, 1, 1])
    with pytest.raises(GridError):
        Grid1D([0, 1], [1, -1])


def test_box_single_point():
    v = make_box_volume([0, 0, 0], [1, 1, 1], (1, 1, 1))
    np.testing.assert_array_equal(v.points, [[0, 0, 0]])
    np.testing.assert_array_equal(v.weights, [1])


def test_box_subdivision():
    v = make_box_volume([0, 0, 0], [1, 1, 1], (2, 2, 2))
    assert v.size == 8
    np.testing.assert_allclose(v.weights, 0.125)
    assert set(np.abs(v.points).ravel()) == {0.25}


def test_box_volume_identity():
    v = make_box_volume([0, 0, 0], [2, 1, 1], (4, 2, 2), "V_T")
    assert abs(v.weights.sum() - 2) <= 1e-12
    assert v.measure("V_T") == pytest.approx(2, rel=1e-10)


def test_box_rejects_nonpositive_extent():
    with pytest.raises(GridError):
        make_box_volume([0, 0, 0], [1, 0, 1], (2, 2, 2))


def test_union_volume_labels_and_overlap():
    a = make_box_volume([0, 0, 0], [1, 1, 1], 2, "V_T")
    b = make_box_volume([3, 0, 0], [1, 2, 1], 2, "V_R")
    u = union_volume(a, b)
    assert u.measure("V_T") == pytest.approx(1)
    assert u.measure("V_R") == pytest.approx(2)
    with pytest.raises(GridError):
        union_volume(a, a)


def test_inner_product_unit_function():
    g = make_uniform_grid(0, 1, 11)
    one = GridFunction(np.ones(11), g)
    assert inner_product(one, one) == pytest.approx(1)


def test_inner_product_conjugates_second_argument():
    g = make_uniform_grid(0, 1, 11)
    one = GridFunction(np.ones(11), g)
    i = GridFunction(1j * np.ones(11), g)
    assert inner_product(one, i) == pytest.approx(-1j)


def test_inner_product_linear_function():
    g = make_uniform_grid(0, 1, 101)
    val = inner_product(sample(lambda t: t, g), GridFunction(np.ones(101), g))
    assert abs(val - 0.5) < 1e-4


def test_inner_product_grid_mismatch():
    f = GridFunction(np.ones(3), make_uniform_grid(0, 1, 3))
    g = GridFunction(np.ones(3), make_uniform_grid(0, 2, 3))
    with pytest.raises(GridError):
        inner_product(f, g)


def test_norms_constant():
    f = GridFunction(np.ones(50), make_uniform_grid(0, 1, 50))
    for kind in ("L1", "L2", "Linf"):
        assert norm(f, kind) == pytest.approx(1)


def test_norms_three_four_five():
    f = GridFunction([3, 4], make_counting_grid(2))
    assert norm(f, "L1") == 7
    assert norm(f, "L2") == 5
    assert norm(f, "Linf") == 4


def test_gaussian_norm():
    g = make_uniform_grid(-12, 12, 2048)
    f = sample(lambda t: np.pi**-0.25 * np.exp(-t**2 / 2), g)
    assert abs(norm(f) - 1) < 1e-6


def test_angles():
    g = make_counting_grid(4)
    f = GridFunction([1, 2, 0, 0], g)
    h = GridFunction([0, 0, 1, 1], g)
    assert angle_between(f, f) == pytest.approx(0, abs=1e-7)
    assert angle_between(f, h) == pytest.approx(np.pi / 2)
    one = GridFunction(np.ones(4), g)
    assert angle_between(one, 1j * one) == pytest.approx(np.pi / 2)
    with pytest.raises(GridError):
        angle_between(f, GridFunction(np.zeros(4), g))


def test_trapezoid_order_two():
    exact = np.exp(1) - 1
    errs = []
    for n in (11, 21, 41):
        g = make_uniform_grid(0, 1, n)
        errs.append(abs(np.sum(g.weights * np.exp(g.nodes)) - exact))
    assert errs[0] / errs[1] >= 3.5 and errs[1] / errs[2] >= 3.5


# keep components out of the subnormal range, where squaring underflows
_part = st.one_of(st.just(0.0), st.floats(1e-6, 1e3), st.floats(-1e3, -1e-6))
complex_vectors = arrays(
    np.complex128, 8, elements=st.builds(complex, _part, _part),
)


@settings(max_examples=200, deadline=None)
@given(complex_vectors, complex_vectors, st.floats(1e-3, 1e3))
def test_angle_scale_invariance_and_cauchy_schwarz(a, b, c):
    g = make_gauss_grid(0, 1, 8)
    f, h = GridFunction(a, g), GridFunction(b, g)
    nf, nh = norm(f), norm(h)
    assert abs(inner_product(f, h)) <= nf * nh * (1 + 1e-12) + 1e-300
    assert inner_product(f, h) == pytest.approx(np.conj(inner_product(h, f)), rel=1e-12, abs=1e-9)
    if nf > 1e-6 and nh > 1e-6:
        assert angle_between(c * f, h) == pytest.approx(angle_between(f, h), abs=1e-7)


@settings(max_examples=100, deadline=None)
@given(complex_vectors)
def test_l1_bounded_by_total_weight_times_sup(a):
    g = make_gauss_grid(-1, 3, 8)
    f = GridFunction(a, g)
    assert norm(f, "L1") <= g.weights.sum() * norm(f, "Linf") * (1 + 1e-12)
