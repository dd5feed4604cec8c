import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qrgames.numerics import (
    eigensystem,
    gram_embed,
    hermitian,
    pinv_sqrt,
    spectral_norm,
)


def random_hermitian(rng, d, complex_entries=True):
    a = rng.standard_normal((d, d))
    if complex_entries:
        a = a + 1j * rng.standard_normal((d, d))
    return (a + a.conj().T) / 2


def random_psd(rng, d, rank=None, complex_entries=True):
    r = rank if rank is not None else d
    a = rng.standard_normal((d, r))
    if complex_entries:
        a = a + 1j * rng.standard_normal((d, r))
    return a @ a.conj().T


class TestHermitian:
    def test_symmetrizes_noise(self):
        h = np.array([[1.0, 0.5 + 1e-13], [0.5 - 1e-13, 2.0]])
        out = hermitian(h)
        assert np.array_equal(out, out.conj().T)

    def test_rejects_material_asymmetry(self):
        with pytest.raises(ValueError):
            hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_rejects_non_square(self):
        with pytest.raises(ValueError):
            hermitian(np.zeros((2, 3)))

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            hermitian(np.array([[np.nan, 0.0], [0.0, 1.0]]))


class TestEigensystem:
    @given(seed=st.integers(0, 2**32 - 1), d=st.integers(1, 16))
    @settings(max_examples=60, deadline=None)
    def test_reconstruction(self, seed, d):
        h = random_hermitian(np.random.default_rng(seed), d)
        vals, vecs = eigensystem(h)
        norm = max(1.0, float(np.max(np.abs(vals))))
        assert np.all(np.diff(vals) >= -1e-12)
        recon = (vecs * vals) @ vecs.conj().T
        assert np.max(np.abs(recon - h)) <= 1e-10 * norm
        ortho = vecs.conj().T @ vecs
        assert np.max(np.abs(ortho - np.eye(d))) <= 1e-10

    def test_known_two_by_two(self):
        vals, _ = eigensystem(np.array([[0.0, 1.0], [1.0, 0.0]]))
        assert np.allclose(vals, [-1.0, 1.0])


class TestSpectralNorm:
    def test_quarter_all_ones_block(self):
        # 0.25 * J_3 has eigenvalues (0, 0, 0.75)
        h = 0.25 * np.ones((3, 3))
        assert spectral_norm(h) == pytest.approx(0.75, abs=1e-12)

    def test_negative_dominates(self):
        h = np.diag([-2.0, 1.0])
        assert spectral_norm(h) == pytest.approx(2.0)

    @given(seed=st.integers(0, 2**32 - 1))
    @settings(max_examples=30, deadline=None)
    def test_matches_singular_value(self, seed):
        h = random_hermitian(np.random.default_rng(seed), 8)
        assert spectral_norm(h) == pytest.approx(
            float(np.linalg.norm(h, 2)), rel=1e-10
        )


class TestPinvSqrt:
    def test_scaled_identity(self):
        n = 5
        w = pinv_sqrt(np.eye(n) / n)
        assert np.allclose(w, np.sqrt(n) * np.eye(n), atol=1e-12)

    def test_projector_is_fixed_point(self):
        v = np.array([1.0, 1.0, 0.0]) / np.sqrt(2)
        p = np.outer(v, v)
        assert np.allclose(pinv_sqrt(p), p, atol=1e-12)

    def test_zero_matrix(self):
        assert np.array_equal(pinv_sqrt(np.zeros((3, 3))), np.zeros((3, 3)))

    def test_rejects_material_negativity(self):
        with pytest.raises(ValueError):
            pinv_sqrt(np.diag([1.0, -0.5]))

    @given(seed=st.integers(0, 2**32 - 1), rank=st.integers(1, 6))
    @settings(max_examples=40, deadline=None)
    def test_support_identity(self, seed, rank):
        rng = np.random.default_rng(seed)
        h = random_psd(rng, 6, rank=rank)
        w = pinv_sqrt(h)
        vals, vecs = eigensystem(h)
        support = vecs[:, vals > 1e-9 * vals[-1]]
        proj = support @ support.conj().T
        assert np.max(np.abs(w @ h @ w - proj)) <= 1e-8 * max(1.0, vals[-1])


class TestGramEmbed:
    @given(
        seed=st.integers(0, 2**32 - 1),
        d=st.integers(1, 12),
        complex_entries=st.booleans(),
    )
    @settings(max_examples=60, deadline=None)
    def test_round_trip(self, seed, d, complex_entries):
        rng = np.random.default_rng(seed)
        g = random_psd(rng, d, complex_entries=complex_entries)
        v = gram_embed(g)
        recon = v.conj() @ v.T
        assert np.max(np.abs(recon - g)) <= 1e-10 * max(1.0, spectral_norm(g))

    def test_rank_deficiency_compresses(self):
        g = np.ones((4, 4))  # rank one
        v = gram_embed(g)
        assert v.shape == (4, 1)
        assert np.allclose(v.conj() @ v.T, g, atol=1e-12)

    def test_real_gram_gives_real_vectors(self):
        g = np.array([[1.0, 0.5], [0.5, 1.0]])
        assert not np.iscomplexobj(gram_embed(g))

    def test_rejects_indefinite(self):
        with pytest.raises(ValueError):
            gram_embed(np.diag([1.0, -1.0]))
