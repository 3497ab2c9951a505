"""Property-based checks of the conservation and commutation invariants."""

import math

import numpy as np
from hypothesis import given, settings, strategies as st

from chiralcav import (
    ModelParams,
    build_basis,
    exchange_asymmetry,
    expected_photons,
    heisenberg_coeffs,
    small_time_amplitude,
)
from chiralcav.analysis import hermitian_image
from chiralcav.operators import build_H
from chiralcav.propagator import sector_propagator

coupling = st.floats(min_value=1e-3, max_value=2.0)
times = st.floats(min_value=0.0, max_value=500.0)
counts = st.integers(min_value=0, max_value=12)


@st.composite
def positive_params(draw):
    return ModelParams(draw(st.floats(min_value=0.1, max_value=5.0)), draw(coupling), draw(coupling))


@given(positive_params(), times)
def test_commutation_preserved(params, t):
    for r in heisenberg_coeffs(params, t).commutation_residuals():
        assert abs(r) <= 1e-12


@given(positive_params(), counts, counts, times)
def test_mean_photons_conserved(params, n_a, n_b, t):
    mean_a, mean_b = expected_photons(params, n_a, n_b, t)
    assert math.isclose(mean_a + mean_b, n_a + n_b, rel_tol=1e-14, abs_tol=1e-13)


@given(positive_params(), st.floats(min_value=1e-6, max_value=10.0))
def test_first_order_ratio(params, t):
    fwd = small_time_amplitude(params, (1, 0), (0, 1), t)
    bwd = small_time_amplitude(params, (0, 1), (1, 0), t)
    assert math.isclose(abs(fwd / bwd), params.omega_ab / params.omega_ba, rel_tol=1e-14)


@settings(max_examples=40)
@given(positive_params(), st.integers(min_value=1, max_value=5), st.floats(min_value=0.01, max_value=30.0))
def test_sector_ratio_is_coupling_ratio_squared(params, n_a, t):
    rep = exchange_asymmetry(params, (n_a, 0), t)
    if rep.sector_prob_backward > 1e-20:
        ratio = rep.sector_prob_forward / rep.sector_prob_backward
        assert math.isclose(ratio, (params.omega_ab / params.omega_ba) ** 2, rel_tol=1e-8)


@settings(max_examples=30)
@given(positive_params(), st.integers(min_value=0, max_value=6), st.floats(min_value=0.0, max_value=20.0))
def test_forward_and_backward_propagators_are_inverse(params, N, t):
    U = sector_propagator(params, N, t)
    V = sector_propagator(params, N, -t)
    assert np.abs(U @ V - np.eye(N + 1)).max() <= 1e-10 * max(1.0, np.abs(U).max() * np.abs(V).max())


@settings(max_examples=30)
@given(st.floats(min_value=-1.0, max_value=1.0), st.floats(min_value=-1.0, max_value=1.0))
def test_pt_symmetry_any_real_couplings(ab, ba):
    basis = build_basis(4)
    H = build_H(ModelParams(1.0, ab, ba), basis).data
    P = np.diag([(-1.0) ** s.total for s in basis.states])
    assert np.abs(P @ H.conj() @ P - H).max() <= 1e-12


@settings(max_examples=30)
@given(positive_params())
def test_similarity_image_is_hermitian(params):
    image = hermitian_image(params, build_basis(5))
    scale = max(1.0, np.abs(image).max())
    assert np.abs(image - image.conj().T).max() <= 1e-12 * scale
