import numpy as np
import pytest

from conckit.grid_core import (
    GridError,
    GridFunction,
    inner_product,
    make_box_volume,
    make_composite_gauss_grid,
    make_gauss_grid,
    make_uniform_grid,
    norm,
    sample,
    union_volume,
)
from conckit.operators import (
    OperatorError,
    OperatorMatrix,
    adjoint,
    anticommutator,
    apply,
    band_limiter,
    commutator,
    compose,
    derivative_op,
    diagonal_op,
    expectation_deviation,
    fourier_op,
    helmholtz_green_op,
    helmholtz_kernel,
    identity_op,
    inverse_fourier_op,
    is_self_adjoint,
    position_op,
    self_cell_value,
    sinc_kernel,
    truncation_op,
    weighted_hermitian_defect,
    zero_op,
)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def _random_fn(rng, grid):
    return GridFunction(rng.standard_normal(grid.size) + 1j * rng.standard_normal(grid.size), grid)


def _gauss(grid, r=1.0, x_o=0.0):
    return sample(lambda t: (2 * r / np.pi) ** 0.25 * np.exp(-r * (t - x_o) ** 2), grid)


# --- truncation -----------------------------------------------------------

def test_truncation_whole_grid_is_identity():
    g = make_uniform_grid(-1, 1, 11)
    np.testing.assert_array_equal(truncation_op(g, (-1, 1)).entries, np.eye(11))


def test_truncation_empty_region_rejected():
    g = make_uniform_grid(-1, 1, 11)
    with pytest.raises(OperatorError):
        truncation_op(g, (5, 6))


def test_time_limiter_diagonal():
    g = make_uniform_grid(-2, 2, 41)
    D = truncation_op(g, (-1, 1))
    np.testing.assert_array_equal(np.diag(D.entries).real, (np.abs(g.nodes) <= 1).astype(float))
    np.testing.assert_array_equal((D @ D).entries, D.entries)
    assert is_self_adjoint(D)


def test_truncation_on_volume_labels():
    v = union_volume(make_box_volume([0, 0, 0], 1, 2, "V_T"), make_box_volume([3, 0, 0], 1, 2, "V_R"))
    chi = truncation_op(v, "V_R")
    assert np.trace(chi.entries).real == 8


# --- band limiter ---------------------------------------------------------

def test_sinc_limit_at_zero():
    assert sinc_kernel(0.0, 2.5) == pytest.approx(2.5 / np.pi, rel=1e-15)
    assert sinc_kernel(1e-9, 2.5) == pytest.approx(2.5 / np.pi, rel=1e-12)


def test_band_limiter_rejects_nonpositive_omega():
    with pytest.raises(OperatorError):
        band_limiter(make_gauss_grid(-1, 1, 8), 0.0)


def test_band_limiter_reproduces_bandlimited_function():
    # sinc^2 is bandlimited to 2*omega0 and decays like 1/t^2
    g = make_uniform_grid(-200, 200, 4001)
    omega0 = 1.0
    f = sample(lambda t: np.sinc(omega0 * t / np.pi) ** 2, g)
    inner = np.abs(g.nodes) <= 50
    Bf = apply(band_limiter(g, 2 * omega0 + 0.5), f)
    err = np.linalg.norm((Bf.values - f.values)[inner]) / np.linalg.norm(f.values[inner])
    assert err <= 1e-3


def test_band_limiter_contracts(rng):
    g = make_gauss_grid(-3, 3, 120)
    B = band_limiter(g, 2.0)
    for _ in range(100):
        f = _random_fn(rng, g)
        assert norm(apply(B, f)) <= (1 + 1e-6) * norm(f)


def test_band_limiter_self_adjoint_and_spectrum_bounds():
    g = make_gauss_grid(-2, 2, 150)
    B = band_limiter(g, 3.0)
    assert weighted_hermitian_defect(B) <= 1e-10
    sw = np.sqrt(g.weights)
    S = sw[:, None] * B.entries / sw[None, :]
    ev = np.linalg.eigvalsh((S + S.conj().T) / 2)
    assert ev.max() <= 1 + 1e-6


def test_band_limiter_idempotent_on_bandlimited_input():
    # B(Bf) = Bf = f for f with band 0.5 < omega; measured away from the grid ends
    g = make_uniform_grid(-200, 200, 4001)
    B = band_limiter(g, 1.0)
    f = sample(lambda t: np.sinc(0.25 * t / np.pi) ** 2, g)
    Bf = apply(B, f)
    BBf = apply(B, Bf)
    inner = np.abs(g.nodes) <= 20
    assert np.linalg.norm((BBf.values - Bf.values)[inner]) / np.linalg.norm(Bf.values[inner]) <= 1e-6


def test_band_limiter_matches_fourier_route():
    # two independent constructions: sinc kernel vs F^{-1} chi_[-W,W] F
    W = 2.0
    t = make_uniform_grid(-16, 16, 1025)
    w = make_composite_gauss_grid([-W, 0, W], 200, "frequency")
    route = compose(inverse_fourier_op(w, t), fourier_op(t, w))
    B = band_limiter(t, W)
    for r, x_o in ((1.0, 0.0), (2.0, 1.5), (0.5, -1.0)):
        f = _gauss(t, r, x_o)
        a, b = apply(B, f), apply(route, f)
        assert norm(a - b) / norm(b) <= 1e-4


# --- Fourier transform ----------------------------------------------------

def test_parseval_two_pi():
    t = make_uniform_grid(-12, 12, 2048)
    w = make_uniform_grid(-12, 12, 2048, "frequency")
    f = _gauss(t)
    fh = apply(fourier_op(t, w), f)
    assert norm(fh) ** 2 / norm(f) ** 2 == pytest.approx(2 * np.pi, rel=1e-3)


def test_fourier_of_gaussian_matches_closed_form():
    t = make_uniform_grid(-12, 12, 2048)
    w = make_uniform_grid(-6, 6, 101, "frequency")
    f = sample(lambda x: np.exp(-x**2 / 2), t)
    fh = apply(fourier_op(t, w), f)
    exact = np.sqrt(2 * np.pi) * np.exp(-w.nodes**2 / 2)
    np.testing.assert_allclose(fh.values, exact, atol=1e-10)


def test_box_transform_at_zero():
    t = make_composite_gauss_grid([-1, -0.5, 0.5, 1], 20)
    w = make_uniform_grid(-1, 1, 3, "frequency")
    f = sample(lambda x: (np.abs(x) <= 0.5).astype(float), t)
    fh = apply(fourier_op(t, w), f)
    assert abs(fh.values[1] - 1) <= 1e-6
    # sin(w/2)/(w/2) at w = 1
    assert abs(fh.values[2] - 2 * np.sin(0.5)) <= 1e-12


def test_fourier_of_zero():
    t = make_uniform_grid(-1, 1, 9)
    w = make_uniform_grid(-1, 1, 5, "frequency")
    assert not apply(fourier_op(t, w), GridFunction(np.zeros(9), t)).values.any()


def test_inverse_fourier_round_trip():
    t = make_uniform_grid(-12, 12, 1024)
    w = make_uniform_grid(-12, 12, 1024, "frequency")
    f = _gauss(t, x_o=1.0)
    back = apply(inverse_fourier_op(w, t), apply(fourier_op(t, w), f))
    assert norm(back - f) / norm(f) <= 1e-8


# --- Helmholtz ------------------------------------------------------------

def test_helmholtz_static_magnitude():
    assert abs(helmholtz_kernel(1.0, 1e-9)) == pytest.approx(1 / (4 * np.pi), rel=1e-12)


def test_helmholtz_isotropy_and_inverse_distance(rng):
    k = 2 * np.pi
    r = rng.uniform(0.1, 5, 50)
    for _ in range(20):
        a = rng.standard_normal(3)
        a *= r[0] / np.linalg.norm(a)
        b = rng.standard_normal(3)
        b *= r[0] / np.linalg.norm(b)
        assert abs(helmholtz_kernel(np.linalg.norm(a), k)) == pytest.approx(
            abs(helmholtz_kernel(np.linalg.norm(b), k)), rel=1e-12)
    ratio = abs(helmholtz_kernel(r, k)) / abs(helmholtz_kernel(2 * r, k))
    np.testing.assert_allclose(ratio, 2.0, rtol=1e-12)


def test_green_op_entries_and_shape():
    src = make_box_volume([0, 0, 0], 1, 2, "V_T")
    far = make_box_volume([3, 0, 0], 1, 2, "V_R")
    amb = union_volume(src, far)
    G = helmholtz_green_op(src, amb, 2 * np.pi)
    assert G.entries.shape == (16, 8)
    assert np.all(np.isfinite(G.entries))
    d = np.linalg.norm(amb.points[10] - src.points[3])
    assert G.entries[10, 3] == pytest.approx(helmholtz_kernel(d, 2 * np.pi) * src.weights[3], rel=1e-14)
    # self cells get the ball average
    assert G.entries[0, 0] == pytest.approx(self_cell_value(src.weights[0]))


def test_self_cell_value_matches_ball_integral():
    # int_ball 1/(4 pi r) dV = a^2 / 2 for radius a
    w = 0.3
    a = (3 * w / (4 * np.pi)) ** (1 / 3)
    assert self_cell_value(w) == pytest.approx(a**2 / 2, rel=1e-14)


def test_green_op_rejects_foreign_coincidence():
    src = make_box_volume([0, 0, 0], 1, 1)
    other = make_box_volume([0, 0, 0], 2, 1)
    with pytest.raises(OperatorError):
        helmholtz_green_op(src, other, 1.0)
    with pytest.raises(OperatorError):
        helmholtz_green_op(src, src, -1.0)


# --- apply / compose / adjoint -------------------------------------------

def test_apply_basics(rng):
    g = make_gauss_grid(0, 1, 10)
    f, h = _random_fn(rng, g), _random_fn(rng, g)
    A = OperatorMatrix(rng.standard_normal((10, 10)), g, g)
    np.testing.assert_array_equal(apply(identity_op(g), f).values, f.values)
    np.testing.assert_allclose(apply(A, f + h).values, (apply(A, f) + apply(A, h)).values, atol=1e-12)
    assert not apply(zero_op(g), f).values.any()
    with pytest.raises(GridError):
        apply(A, GridFunction(np.ones(10), make_gauss_grid(0, 2, 10)))


def test_adjoint_identity_on_mixed_grids(rng):
    a = make_gauss_grid(0, 1, 7)
    b = make_uniform_grid(-2, 3, 11)
    A = OperatorMatrix(rng.standard_normal((11, 7)) + 1j * rng.standard_normal((11, 7)), a, b)
    Ad = adjoint(A)
    np.testing.assert_allclose(adjoint(Ad).entries, A.entries, atol=1e-12)
    for _ in range(100):
        f, h = _random_fn(rng, a), _random_fn(rng, b)
        lhs = inner_product(apply(A, f), h)
        rhs = inner_product(f, apply(Ad, h))
        assert abs(lhs - rhs) <= 1e-10 * max(1, abs(lhs))


def test_adjoint_of_truncation_is_itself():
    g = make_gauss_grid(-2, 2, 30)
    D = truncation_op(g, (-1, 1))
    np.testing.assert_allclose(adjoint(D).entries, D.entries, rtol=0, atol=1e-15)


def test_compose_rejects_incompatible_grids():
    a, b = make_gauss_grid(0, 1, 3), make_gauss_grid(0, 1, 4)
    with pytest.raises(OperatorError):
        compose(identity_op(a), identity_op(b))


def test_palindromic_composition_is_flagged_and_self_adjoint():
    g = make_gauss_grid(-3, 3, 80)
    D, B = truncation_op(g, (-1, 1)), band_limiter(g, 2.0)
    DBD = compose(D, B, D)
    assert DBD.symmetric and is_self_adjoint(DBD)
    assert not compose(D, B).symmetric


# --- commutators ----------------------------------------------------------

def test_commutator_identities(rng):
    g = make_gauss_grid(0, 1, 6)
    A = OperatorMatrix(rng.standard_normal((6, 6)), g, g)
    B = OperatorMatrix(rng.standard_normal((6, 6)), g, g)
    assert not commutator(A, A).entries.any()
    np.testing.assert_allclose(commutator(A, identity_op(g)).entries, 0, atol=1e-12)
    np.testing.assert_allclose(commutator(A, B).entries, -commutator(B, A).entries, atol=1e-12)
    np.testing.assert_allclose(anticommutator(A, B).entries, anticommutator(B, A).entries, atol=1e-12)
    with pytest.raises(OperatorError):
        commutator(A, identity_op(make_gauss_grid(0, 1, 5)))


def test_canonical_commutation_on_gaussian():
    g = make_uniform_grid(-12, 12, 2048)
    X, P = position_op(g), derivative_op(g)
    f = _gauss(g)
    cf = apply(commutator(X, P), f)
    inner = np.abs(g.nodes) <= 6
    err = np.linalg.norm((cf.values - 1j * f.values)[inner]) / np.linalg.norm(f.values[inner])
    assert err <= 1e-2


# --- position / derivative ------------------------------------------------

def test_position_on_constant():
    g = make_uniform_grid(-1, 1, 21)
    np.testing.assert_allclose(apply(position_op(g), GridFunction(np.ones(21), g)).values, g.nodes)


def test_derivative_second_order():
    omega = 3.0
    errs = []
    for n in (101, 201, 401):
        g = make_uniform_grid(-1, 1, n)
        f = sample(lambda t: np.exp(1j * omega * t), g)
        d = apply(derivative_op(g), f).values
        errs.append(np.max(np.abs(d - omega * f.values)[1:-1]))
    assert errs[0] / errs[1] == pytest.approx(4, rel=0.05)
    assert errs[1] / errs[2] == pytest.approx(4, rel=0.05)
    # one-sided ends are also second order
    assert abs(d[0] - omega * f.values[0]) < 10 * errs[2]


def test_derivative_of_constant():
    g = make_uniform_grid(0, 1, 11)
    np.testing.assert_allclose(apply(derivative_op(g), GridFunction(np.ones(11), g)).values, 0, atol=1e-12)


def test_derivative_needs_uniform_grid():
    with pytest.raises(OperatorError):
        derivative_op(make_gauss_grid(-1, 1, 10))


# --- expectation ----------------------------------------------------------

def test_expectation_of_scalar_operators(rng):
    g = make_gauss_grid(0, 1, 9)
    f = _random_fn(rng, g)
    rep = expectation_deviation(identity_op(g), f)
    assert rep.tau == pytest.approx(1) and rep.sigma == pytest.approx(0, abs=1e-12)
    rep = expectation_deviation(2.5 * identity_op(g), f)
    assert rep.tau == pytest.approx(2.5) and rep.sigma == pytest.approx(0, abs=1e-12)
    with pytest.raises(GridError):
        expectation_deviation(identity_op(g), GridFunction(np.zeros(9), g))


def test_expectation_of_position_on_gaussian():
    g = make_uniform_grid(-12, 12, 2048)
    rep = expectation_deviation(position_op(g), _gauss(g))
    assert abs(rep.tau) <= 1e-10
    assert rep.sigma**2 == pytest.approx(0.25, rel=1e-3)  # 1/(4r) for r = 1 and unit norm


def test_expectation_sigma_recomputable(rng):
    g = make_gauss_grid(-1, 1, 12)
    A = diagonal_op(g, rng.standard_normal(12))
    f = _random_fn(rng, g)
    rep = expectation_deviation(A, f)
    assert abs(rep.tau.imag) <= 1e-10 * abs(rep.tau)
    assert rep.sigma == pytest.approx(norm(apply(A, f) - rep.tau * f), rel=1e-12)
