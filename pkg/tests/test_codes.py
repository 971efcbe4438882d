import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sclab.codes import (
    Code,
    CodeKind,
    basis_union_code,
    certify,
    frame_bound_gap,
    identity_code,
    random_unit_code,
    tight_frame_code,
    welch_pair_floor,
)
from sclab.exceptions import ContractError, ConvergenceError


def test_random_code_d1_is_signs():
    c = random_unit_code(1, 3, seed=4)
    np.testing.assert_array_equal(np.abs(c.columns), np.ones((1, 3)))


def test_random_code_reproducible_and_unit():
    a = random_unit_code(16, 50, seed=9)
    b = random_unit_code(16, 50, seed=9)
    np.testing.assert_array_equal(a.columns, b.columns)
    assert np.max(np.abs(np.linalg.norm(a.columns, axis=0) - 1)) <= 1e-10
    assert a.kind is CodeKind.RANDOM_UNIT


def test_random_code_coherence_strictly_inside():
    mu = certify(random_unit_code(64, 4096, seed=7)).coherence
    assert 0 < mu < 1


def test_random_code_median_coherence_scale():
    # independent Monte Carlo (raw Gaussian Gram, separate generator) put the
    # ratio median(mu) / sqrt(ln d / d) at 2.216 for d=32, F=1024
    mus = [certify(random_unit_code(32, 1024, seed=s)).coherence for s in range(100)]
    ratio = np.median(mus) / math.sqrt(math.log(32) / 32)
    assert 2.0 <= ratio <= 2.45


def test_code_rejects_non_unit_columns():
    with pytest.raises(ContractError):
        Code(np.array([[1.0, 2.0], [0.0, 0.0]]))
    c = Code.from_matrix(np.array([[3.0, 0.0], [4.0, 2.0]]), normalize=True)
    np.testing.assert_allclose(np.linalg.norm(c.columns, axis=0), 1.0)


def test_code_is_read_only():
    c = identity_code(3)
    with pytest.raises(ValueError):
        c.columns[0, 0] = 5.0


def test_duplicate_columns_allowed():
    v = np.array([[1.0], [0.0]])
    c = Code(np.hstack([v, v, np.array([[0.0], [1.0]])]))
    assert certify(c).coherence == pytest.approx(1.0)


def test_basis_union_single_basis():
    cert = certify(basis_union_code(4, 1, seed=0))
    assert cert.coherence < 1e-12
    assert cert.is_tight_frame


def test_basis_union_two_bases_sum():
    cert = certify(basis_union_code(4, 2, seed=3))
    assert cert.F == 8
    assert cert.sum_sq_offdiag == pytest.approx(8.0, rel=1e-12)
    assert cert.is_tight_frame and cert.frame_bound_gap < 1e-9
    assert cert.welch_pair_floor == pytest.approx(math.sqrt(4 / 28), abs=1e-15)
    assert cert.welch_pair_floor == pytest.approx(0.3780, abs=5e-5)


def test_basis_union_frame_operator():
    phi = basis_union_code(2, 2, seed=11).columns
    np.testing.assert_allclose(phi @ phi.T, 2 * np.eye(2), atol=1e-12)


def test_basis_union_bit_reproducible():
    a = basis_union_code(5, 3, seed=42).columns
    b = basis_union_code(5, 3, seed=42).columns
    assert a.tobytes() == b.tobytes()


def test_tight_frame_3_6():
    c = tight_frame_code(3, 6, seed=0)
    cert = certify(c)
    assert cert.frame_bound_gap <= 1e-10
    assert cert.sum_sq_offdiag == pytest.approx(6.0, abs=1e-8)
    assert np.max(np.abs(np.linalg.norm(c.columns, axis=0) - 1)) <= 1e-12


def _equiangular_2_3_oracle(step=0.002):
    """Brute force over (0, t2, t3): every near-tight unit frame in R^2 with
    three vectors has pairwise |cos| close to 1/2."""
    seen = []
    grid = np.arange(0, np.pi, step)
    for t2 in grid:
        t3 = grid
        cols = np.stack([np.cos([np.zeros_like(t3), np.full_like(t3, t2), t3]),
                         np.sin([np.zeros_like(t3), np.full_like(t3, t2), t3])])
        # frame operator entries for each t3
        S = np.einsum("iak,jak->ijk", cols, cols)
        dev = np.max(np.abs(S - 1.5 * np.eye(2)[:, :, None]), axis=(0, 1))
        for k in np.flatnonzero(dev < 5e-3):
            c = cols[:, :, k]
            g = np.abs(c.T @ c)[np.triu_indices(3, 1)]
            seen.append(np.max(np.abs(g - 0.5)))
    return seen


def test_tight_frame_2_3_is_mercedes_benz():
    devs = _equiangular_2_3_oracle()
    assert devs and max(devs) < 1e-2
    cert = certify(tight_frame_code(2, 3, seed=5))
    assert cert.coherence == pytest.approx(0.5, abs=1e-6)
    phi = tight_frame_code(2, 3, seed=5).columns
    g = np.abs(phi.T @ phi)[np.triu_indices(3, 1)]
    np.testing.assert_allclose(g, 0.5, atol=1e-6)


def test_tight_frame_square_is_orthonormal():
    cert = certify(tight_frame_code(4, 4, seed=1))
    assert cert.frame_bound_gap < 1e-10
    assert cert.coherence < 1e-9


def test_tight_frame_nonconvergence_reports_gap():
    with pytest.raises(ConvergenceError) as info:
        tight_frame_code(4, 9, seed=0, tol=1e-15, max_iters=2)
    assert info.value.gap > 0


def test_tight_frame_needs_F_ge_d():
    with pytest.raises(ContractError):
        tight_frame_code(5, 3)


def test_certify_identity():
    cert = certify(identity_code(5))
    assert cert.coherence == 0 and cert.welch_pair_floor == 0
    assert cert.is_tight_frame


def test_certify_random_above_welch():
    cert = certify(random_unit_code(16, 256, seed=2))
    assert cert.coherence >= cert.welch_pair_floor


def test_frame_gap_definition(rng):
    phi = rng.standard_normal((3, 10))
    phi /= np.linalg.norm(phi, axis=0)
    sv = np.linalg.svd((3 / 10) * phi @ phi.T, compute_uv=False)
    assert frame_bound_gap(phi) == pytest.approx(np.max(np.abs(sv - 1)), abs=1e-14)


def test_welch_pair_floor_values():
    assert welch_pair_floor(4, 4) == 0
    assert welch_pair_floor(4, 8) == pytest.approx(math.sqrt(4 / 28))


@settings(max_examples=40, deadline=None)
@given(d=st.integers(1, 12), extra=st.integers(1, 100), seed=st.integers(0, 10**6))
def test_certified_coherence_respects_welch(d, extra, seed):
    F = d + extra
    c = random_unit_code(d, F, seed=seed)
    assert np.max(np.abs(np.linalg.norm(c.columns, axis=0) - 1)) <= 1e-10
    cert = certify(c)
    assert cert.coherence >= welch_pair_floor(d, F) - 1e-9


@settings(max_examples=25, deadline=None)
@given(d=st.integers(2, 8), k=st.integers(1, 6), seed=st.integers(0, 10**6))
def test_tight_frames_meet_welch_sum(d, k, seed):
    for code in (basis_union_code(d, k, seed=seed), tight_frame_code(d, d * k + 1, seed=seed)):
        cert = certify(code)
        assert cert.frame_bound_gap <= 1e-9
        F = cert.F
        want = F * (F - d) / d
        assert abs(cert.sum_sq_offdiag - want) <= 1e-6 * max(want, 1.0)
