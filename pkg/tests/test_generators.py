"""Determinism and contract checks for the seeded generators."""

import numpy as np
import pytest

from specflowlab import (
    ENDPOINT_CLAMP_GAP,
    InputError,
    clamp_spectrum_away_from_zero,
    concat_compatible_pair,
    cyclic_shift,
    family_path,
    half_integer_diagonal,
    homotopy_family,
    invertible_trig_path,
    normalization_path,
    random_hermitian,
    random_projection,
    random_spd,
    random_unitary,
    sf_endpoints,
    spawn_rngs,
    trig_path,
    unitary_rotation_path,
)

UNITARY_TOL = 1e-12
PROBE_TS = (0.0, 0.17, 0.5, 0.83, 1.0)


def test_trig_path_seed_determinism():
    a = trig_path(42, 5)
    b = trig_path(42, 5)
    for t in PROBE_TS:
        np.testing.assert_array_equal(a.matrix(t).mat, b.matrix(t).mat)
    c = trig_path(43, 5)
    assert not np.array_equal(a.matrix(0.5).mat, c.matrix(0.5).mat)


def test_spawn_rngs_reproducible_and_distinct():
    first = [r.standard_normal(4) for r in spawn_rngs(7, 3)]
    second = [r.standard_normal(4) for r in spawn_rngs(7, 3)]
    for x, y in zip(first, second):
        np.testing.assert_array_equal(x, y)
    assert not np.array_equal(first[0], first[1])
    with pytest.raises(InputError):
        spawn_rngs(7, -1)


@pytest.mark.parametrize("seed,dim", [(0, 2), (1, 4), (2, 7), (3, 12)])
def test_trig_path_endpoint_gaps(seed, dim):
    p = trig_path(seed, dim)
    g0, g1 = p.endpoint_gaps()
    # the clamp can only be weakened by float rounding in the tilt
    assert g0 >= ENDPOINT_CLAMP_GAP - 1e-9
    assert g1 >= ENDPOINT_CLAMP_GAP - 1e-9


def test_random_unitary_is_unitary():
    rng = np.random.default_rng(5)
    for dim in (1, 3, 8):
        u = random_unitary(rng, dim).mat
        np.testing.assert_allclose(
            u.conj().T @ u, np.eye(dim), atol=UNITARY_TOL
        )


def test_random_projection_rank_and_bounds():
    rng = np.random.default_rng(9)
    p = random_projection(rng, 6, 2)
    assert p.rank == 2
    with pytest.raises(InputError):
        random_projection(rng, 6, 7)


def test_random_spd_spectrum_window():
    rng = np.random.default_rng(11)
    h = random_spd(rng, 5, 0.2, 3.0)
    vals = np.linalg.eigvalsh(h.mat)
    assert np.all(vals >= 0.2 - 1e-12) and np.all(vals <= 3.0 + 1e-12)
    with pytest.raises(InputError):
        random_spd(rng, 5, -1.0, 3.0)


def test_clamp_keeps_signs_and_opens_gap():
    h = np.diag([-2.0, -0.05, 0.0, 0.08, 1.5])
    clamped = clamp_spectrum_away_from_zero(
        np.asarray(h, dtype=np.complex128), 0.3
    )
    np.testing.assert_allclose(
        np.linalg.eigvalsh(clamped.mat), [-2.0, -0.3, 0.3, 0.3, 1.5], atol=1e-12
    )
    with pytest.raises(InputError):
        clamp_spectrum_away_from_zero(h, 0.0)


def test_cyclic_shift_permutation_and_powers():
    w = cyclic_shift(5).mat
    for k in range(5):
        e = np.zeros(5)
        e[k] = 1.0
        out = w @ e
        assert out[(k + 1) % 5] == 1.0 and np.sum(np.abs(out)) == 1.0
    np.testing.assert_array_equal(cyclic_shift(5, 2).mat, w @ w)
    np.testing.assert_allclose(
        np.linalg.matrix_power(w, 5), np.eye(5), atol=0
    )
    with pytest.raises(InputError):
        cyclic_shift(0)


def test_half_integer_diagonal_layout():
    d = half_integer_diagonal(2)
    assert d.dim == 5
    np.testing.assert_array_equal(
        np.diag(d.mat).real, [-1.5, -0.5, 0.5, 1.5, 2.5]
    )
    assert np.min(np.abs(np.diag(d.mat))) == 0.5
    with pytest.raises(InputError):
        half_integer_diagonal(0)


def test_concat_pair_joins_exactly():
    f, g = concat_compatible_pair(3, 4)
    np.testing.assert_array_equal(f.matrix(1.0).mat, g.matrix(0.0).mat)
    for p in (f, g):
        g0, g1 = p.endpoint_gaps()
        assert min(g0, g1) >= ENDPOINT_CLAMP_GAP - 1e-9


def test_normalization_path_flows_one():
    for seed in (0, 1, 5):
        p = normalization_path(seed, 4)
        assert sf_endpoints(p) == 1
        # exactly one eigenvalue rides t - 1/2
        vals = p.values(0.25)
        assert np.min(np.abs(vals + 0.25)) < 1e-12


def test_invertible_trig_path_stays_invertible():
    p = invertible_trig_path(2, 5, gap=0.5)
    for t in np.linspace(0.0, 1.0, 41):
        assert np.min(np.abs(p.values(t))) >= 0.25 - 1e-12


def test_unitary_rotation_path_identity_at_zero():
    rng = np.random.default_rng(4)
    u_of = unitary_rotation_path(rng, 4)
    np.testing.assert_allclose(u_of(0.0), np.eye(4), atol=UNITARY_TOL)
    u = u_of(0.37)
    np.testing.assert_allclose(u.conj().T @ u, np.eye(4), atol=1e-11)


def test_homotopy_family_shapes():
    h_of, s_grid, label = homotopy_family(0, 3, s_samples=5)
    assert label in ("additive_drift", "unitary_conjugation")
    assert len(s_grid) == 5 and s_grid[0] == 0.0 and s_grid[-1] == 1.0
    m = h_of(0.5, 0.5)
    assert m.dim == 3


def test_family_path_errors():
    with pytest.raises(InputError):
        family_path("no_such_family")
    with pytest.raises(InputError):
        family_path("trig_random", {"dim": 4})  # seed missing
    with pytest.raises(InputError):
        family_path("fuglede_line", {"N": 8})  # n missing
    with pytest.raises(InputError):
        family_path("linear_interp", {"a": np.eye(2)})  # b missing


def test_family_path_linear_interp_endpoints():
    a = np.diag([1.0, -1.0])
    b = np.diag([2.0, 3.0])
    p = family_path("linear_interp", {"a": a, "b": b})
    np.testing.assert_array_equal(p.matrix(0.0).mat, a.astype(np.complex128))
    np.testing.assert_array_equal(p.matrix(1.0).mat, b.astype(np.complex128))
    np.testing.assert_allclose(
        p.matrix(0.5).mat, np.diag([1.5, 1.0]), atol=1e-15
    )
