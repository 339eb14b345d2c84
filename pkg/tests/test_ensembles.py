"""Entry distributions, base matrices, assembly, kappa audit."""

import math

import numpy as np
import pytest

from esdlab import (
    ConfigurationError,
    DegenerateInputError,
    RngStream,
    assemble,
    base_diagonal_from_measure,
    base_explicit,
    base_low_rank,
    base_two_block,
    base_zero,
    build_base_matrix,
    build_iid_matrix,
    kappa_controlled_estimate,
    sample_array,
    sample_scalar,
    scalar_distribution,
)

ALL_KINDS = ("bernoulli", "real_gaussian", "complex_gaussian", "uniform_centered",
             "two_point_asymmetric", "pareto_symmetrized")


def test_bernoulli_values_and_balance():
    x = sample_array(scalar_distribution("bernoulli"), RngStream(1, 0), 100_000)
    assert set(np.unique(x)) == {-1.0, 1.0}
    assert abs(np.mean(x)) < 0.02


def test_complex_gaussian_moments_at_1e6():
    x = sample_array(scalar_distribution("complex_gaussian"), RngStream(2, 0), 1_000_000)
    assert abs(np.mean(x)) < 0.005
    assert abs(np.mean(np.abs(x) ** 2) - 1.0) < 0.01


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_normalization_five_standard_errors(kind):
    n = 1_000_000
    x = sample_array(scalar_distribution(kind), RngStream(3, hash(kind) % 2**32), n)
    assert abs(np.mean(x)) <= 5.0 / math.sqrt(n)
    # variance about the declared zero mean
    var = np.mean(np.abs(x) ** 2)
    if kind == "pareto_symmetrized":
        # infinite fourth moment: the sample variance fluctuates at the
        # n^{-0.2} scale, so only a loose window is meaningful
        assert 0.7 < var < 1.5
    else:
        fourth = np.mean(np.abs(x) ** 4)
        se = math.sqrt(max(fourth - var**2, 0.0) / n)
        assert abs(var - 1.0) <= 5.0 * se + 1e-9


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_determinism_same_stream(kind):
    d = scalar_distribution(kind)
    a = sample_array(d, RngStream(7, 9), 5000)
    b = sample_array(d, RngStream(7, 9), 5000)
    assert np.array_equal(a, b)


@pytest.mark.parametrize("kind", ("real_gaussian", "complex_gaussian"))
def test_chunked_draws_match_single_draw(kind):
    # rejection sampling must leave the stream exactly where a scalar
    # loop would, so chunked and monolithic draws agree bit for bit
    d = scalar_distribution(kind)
    s1, s2 = RngStream(11, 4), RngStream(11, 4)
    chunks = np.concatenate([sample_array(d, s1, k) for k in (1, 2, 5, 17, 100)])
    assert np.array_equal(chunks, sample_array(d, s2, 125))


def _scalar_polar_reference(stream, count):
    """Element-at-a-time Marsaglia polar loop, the contract the vectorized
    sampler must reproduce bit for bit (including stream position)."""
    out = np.empty((count, 2))
    for i in range(count):
        while True:
            words = stream.raw(2)
            u = (float(int(words[0]) >> 11) + 0.5) * 2.0**-53 * 2.0 - 1.0
            v = (float(int(words[1]) >> 11) + 0.5) * 2.0**-53 * 2.0 - 1.0
            s = u * u + v * v
            if s < 1.0:
                f = math.sqrt(-2.0 * math.log(s) / s)
                out[i] = (u * f, v * f)
                break
    return out


@pytest.mark.parametrize("seed,count", [(0, 1), (1, 7), (2, 64), (3, 257)])
def test_vectorized_polar_matches_scalar_loop(seed, count):
    ref_stream = RngStream(31, seed)
    ref = _scalar_polar_reference(ref_stream, count)
    vec_stream = RngStream(31, seed)
    got = sample_array(scalar_distribution("complex_gaussian"), vec_stream, count)
    assert np.array_equal(got, (ref[:, 0] + 1j * ref[:, 1]) / math.sqrt(2.0))
    assert vec_stream.position == ref_stream.position
    # and the next draws from both streams still agree
    assert np.array_equal(vec_stream.raw(4), ref_stream.raw(4))


def test_two_point_support():
    d = scalar_distribution("two_point_asymmetric", p=0.9)
    x = sample_array(d, RngStream(5, 1), 50_000)
    values = np.unique(x)
    assert values.size == 2
    lo, hi = values
    assert lo == pytest.approx(-3.0, rel=1e-12)
    assert hi == pytest.approx(1.0 / 3.0, rel=1e-12)
    assert abs(np.mean(x == lo) - 0.1) < 0.01
    assert abs(np.mean(x)) < 1e-2 and abs(np.mean(x**2) - 1.0) < 0.05


def test_pareto_magnitude_floor_and_tail():
    alpha = 2.5
    d = scalar_distribution("pareto_symmetrized", exponent=alpha)
    x = sample_array(d, RngStream(5, 2), 200_000)
    scale = math.sqrt((alpha - 2.0) / alpha)
    assert np.min(np.abs(x)) >= scale * (1.0 - 1e-12)
    # P(|x| > t) = (t/scale)^-alpha
    t = 4.0 * scale
    assert abs(np.mean(np.abs(x) > t) - 4.0**-alpha) < 0.005


def test_invalid_distribution_parameters():
    with pytest.raises(ConfigurationError):
        scalar_distribution("pareto_symmetrized", exponent=2.0)
    with pytest.raises(ConfigurationError):
        scalar_distribution("two_point_asymmetric", p=1.0)
    with pytest.raises(ConfigurationError):
        scalar_distribution("cauchy")
    with pytest.raises(ConfigurationError):
        scalar_distribution("bernoulli", p=0.3)


def test_sample_scalar_is_first_element():
    d = scalar_distribution("uniform_centered")
    assert sample_scalar(d, RngStream(1, 1)) == complex(sample_array(d, RngStream(1, 1), 1)[0])


# ----------------------------------------------------------------- matrices

def test_iid_matrix_bitwise_reproducible():
    d = scalar_distribution("complex_gaussian")
    a = build_iid_matrix(2, d, RngStream(3, 3))
    b = build_iid_matrix(2, d, RngStream(3, 3))
    assert np.array_equal(a, b)


def test_iid_matrix_row_major_fill():
    d = scalar_distribution("uniform_centered")
    flat = sample_array(d, RngStream(8, 0), 12)
    m = np.asarray(build_iid_matrix(3, d, RngStream(8, 0)))
    assert np.array_equal(m.ravel(), flat[:9])


def test_iid_matrix_hs_norm():
    d = scalar_distribution("bernoulli")
    x = build_iid_matrix(500, d, RngStream(4, 0))
    assert np.sum(np.abs(x) ** 2) / 500**2 == 1.0
    g = build_iid_matrix(500, scalar_distribution("real_gaussian"), RngStream(4, 1))
    assert 0.9 < np.sum(np.abs(g) ** 2) / 500**2 < 1.1


def test_iid_matrix_size_validation():
    with pytest.raises(ConfigurationError):
        build_iid_matrix(0, scalar_distribution("bernoulli"), RngStream(0, 0))


def test_two_block_diagonal_figure_pattern():
    m = build_base_matrix(base_two_block(1.0, 2.5, 0.5), 6)
    assert np.array_equal(m, np.diag([1, 1, 1, 2.5, 2.5, 2.5]))


def test_zero_base():
    assert np.array_equal(build_base_matrix(base_zero(), 4), np.zeros((4, 4)))


def test_low_rank_base():
    m = build_base_matrix(base_low_rank(1, 1.0), 100)
    assert np.linalg.matrix_rank(m) == 1
    assert np.sum(np.abs(m) ** 2) / 100**2 <= 1.0 + 1e-12
    m3 = build_base_matrix(base_low_rank(3, 2.0), 30)
    assert np.linalg.matrix_rank(m3) == 3


def test_diagonal_from_measure_scaling_and_rng():
    spec = base_diagonal_from_measure([1.0, 2.5])
    with pytest.raises(ConfigurationError):
        build_base_matrix(spec, 8)
    m = build_base_matrix(spec, 8, RngStream(1, 2))
    d = np.diag(m) / math.sqrt(8)
    assert set(np.round(d.real, 12)) <= {1.0, 2.5}
    assert np.array_equal(m, build_base_matrix(spec, 8, RngStream(1, 2)))


def test_explicit_base_shape_check():
    spec = base_explicit([[1, 2], [3, 4]])
    assert np.array_equal(build_base_matrix(spec, 2), [[1, 2], [3, 4]])
    with pytest.raises(ConfigurationError):
        build_base_matrix(spec, 3)


@pytest.mark.parametrize("spec,n", [
    (base_zero(), 10),
    (base_two_block(1.0, 2.5, 0.5), 11),
    (base_two_block(1.0, 2.8, 0.5, scale_by_sqrt_n=True), 64),
    (base_low_rank(2, 1.5), 40),
    (base_diagonal_from_measure([0.5, 1.0, 2.0]), 25),
])
def test_hs_bound_invariant(spec, n):
    m = build_base_matrix(spec, n, RngStream(0, 1))
    assert np.sum(np.abs(m) ** 2) / n**2 <= spec.hs_bound + 1e-12


# ----------------------------------------------------------------- assembly

def test_assemble_shift_zero_base():
    x = build_iid_matrix(5, scalar_distribution("bernoulli"), RngStream(2, 0))
    assert np.array_equal(assemble(np.zeros((5, 5)), x, "shift"), x)


def test_assemble_sandwich_identity_reduces_to_shift():
    x = build_iid_matrix(6, scalar_distribution("real_gaussian"), RngStream(2, 1))
    m = build_base_matrix(base_two_block(1.0, 2.0), 6)
    eye = np.eye(6)
    assert np.allclose(assemble(m, x, "sandwich", k=eye, l=eye),
                       assemble(m, x, "shift"), rtol=0, atol=0)


def test_assemble_hadamard_all_ones_equals_shift():
    x = build_iid_matrix(7, scalar_distribution("complex_gaussian"), RngStream(2, 2))
    m = build_base_matrix(base_two_block(0.5, 1.5), 7)
    assert np.array_equal(assemble(m, x, "hadamard_profile", c=np.ones((7, 7))),
                          assemble(m, x, "shift"))


def test_assemble_validation():
    x = np.zeros((3, 3))
    with pytest.raises(ConfigurationError):
        assemble(np.zeros((2, 2)), x, "shift")
    with pytest.raises(ConfigurationError):
        assemble(x, x, "unknown")
    with pytest.raises(DegenerateInputError):
        assemble(x, x, "sandwich", k=np.zeros((3, 3)), l=np.eye(3))
    with pytest.raises(ConfigurationError):
        assemble(x, x, "hadamard_profile", c=np.zeros((3, 3)))


# -------------------------------------------------------------- kappa audit

_GRID_POINTS = [complex(a, b) for a in (-1.0, 0.0, 1.0) for b in (-1.0, 0.0, 1.0)]
_ZW_GRID = [(z, w) for z in _GRID_POINTS for w in _GRID_POINTS]


def test_kappa_bernoulli_is_one_controlled():
    report = kappa_controlled_estimate(scalar_distribution("bernoulli"), 1.0, 100_000,
                                       _ZW_GRID, RngStream(6, 0))
    assert report.second_moment_ok
    assert report.worst_margin >= -3.0 * report.worst_margin_sigma
    assert report.worst_margin >= -1e-12


def test_kappa_zero_z_rows_trivial():
    report = kappa_controlled_estimate(scalar_distribution("uniform_centered"), 2.0, 10_000,
                                       [(0.0, 1.0), (0.0, 1j)], RngStream(6, 1))
    assert all(p.lower_bound == 0.0 for p in report.points)
    assert all(p.margin >= 0.0 for p in report.points)


def test_kappa_gaussian_four_controlled_at_1e6():
    zw = [(z, w) for z in (1.0, -1.0, 1j, -1j, 0.0) for w in (1.0, -1.0, 1j, -1j, 0.0)]
    report = kappa_controlled_estimate(scalar_distribution("real_gaussian"), 4.0, 1_000_000,
                                       zw, RngStream(6, 2))
    assert report.second_moment_ok
    for p in report.points:
        assert p.margin >= -3.0 * p.margin_sigma
        assert p.margin >= -1e-12


def test_kappa_validation():
    with pytest.raises(ConfigurationError):
        kappa_controlled_estimate(scalar_distribution("bernoulli"), 0.5, 100_000,
                                  _ZW_GRID, RngStream(0, 0))
    with pytest.raises(ConfigurationError):
        kappa_controlled_estimate(scalar_distribution("bernoulli"), 1.0, 100,
                                  _ZW_GRID, RngStream(0, 0))
