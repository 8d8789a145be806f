import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_state, random_symplectic, single_mode_cov
from memsim.channels import bs_transform, sq_transform
from memsim.errors import PhysicalityError
from memsim.gaussian import (
    GaussianState,
    ModeRegistry,
    SymplecticTransform,
    apply_transform,
    as_registry,
    coherent_state,
    epr_variance,
    gaussian_fidelity,
    partial_state,
    product_state,
    symplectic_defect,
    symplectic_eigenvalues,
    symplectic_form,
    thermal_state,
    vacuum_state,
)

# Frozen from tests/oracles.py (Fock cutoff 40, padded construction).
FID_VACUUM_THERMAL = 0.6666666666666666
FID_MIXED = 0.7265902889186433  # (nbar .3, r .4, a .5+.2i) vs (nbar .2, r -.1, a .1)
FID_COHERENT_SQUEEZED = 0.43320168562256894  # a = .7 vs r = .5


def state_1m(nbar, r, alpha):
    cov = single_mode_cov(nbar + 0.5, r)
    return GaussianState(as_registry(["y2+"]), np.sqrt(2) * np.array([alpha.real, alpha.imag]), cov)


class TestRegistry:
    def test_roles_default_to_label(self):
        reg = ModeRegistry(["yC", "A1"])
        assert reg.index("A1") == 1
        assert reg.is_atomic("A1") and not reg.is_atomic("yC")

    def test_duplicate_labels_rejected(self):
        with pytest.raises(ValueError):
            ModeRegistry(["yC", "yC"])

    def test_unknown_role_rejected(self):
        with pytest.raises(ValueError):
            ModeRegistry(["mystery"])

    def test_unknown_label_lookup(self):
        with pytest.raises(KeyError):
            ModeRegistry(["yC"]).index("yS")

    def test_union_keeps_order(self):
        reg = ModeRegistry(["yC"]).union(ModeRegistry(["A1", "yS"]))
        assert reg.labels == ("yC", "A1", "yS")


class TestConstruction:
    def test_vacuum(self):
        s = vacuum_state(["yC"])
        assert np.array_equal(s.means, [0, 0])
        assert np.array_equal(s.cov, 0.5 * np.eye(2))
        assert vacuum_state(["yC", "yS", "A1"]).cov.shape == (6, 6)
        assert np.allclose(symplectic_eigenvalues(vacuum_state(["yC", "yS", "A1"]).cov), 0.5)

    def test_vacuum_needs_modes(self):
        with pytest.raises(ValueError):
            vacuum_state([])

    @pytest.mark.parametrize("alpha, means", [(0, [0, 0]), (1, [np.sqrt(2), 0]), (1j, [0, np.sqrt(2)])])
    def test_coherent_means(self, alpha, means):
        s = coherent_state(["y2+"], [alpha])
        assert np.allclose(s.means, means, atol=1e-15)
        assert np.array_equal(s.cov, 0.5 * np.eye(2))

    def test_coherent_length_mismatch(self):
        with pytest.raises(ValueError):
            coherent_state(["yC", "yS"], [1.0])

    def test_asymmetric_cov_rejected(self):
        with pytest.raises(ValueError):
            GaussianState(as_registry(["yC"]), np.zeros(2), np.array([[0.5, 0.1], [0.0, 0.5]]))

    def test_unphysical_cov_rejected(self):
        with pytest.raises(PhysicalityError):
            GaussianState(as_registry(["yC"]), np.zeros(2), 0.4 * np.eye(2))

    def test_non_symplectic_transform_rejected(self):
        with pytest.raises(ValueError):
            SymplecticTransform(("yC",), np.diag([2.0, 2.0]))

    def test_apply_dimension_mismatch(self):
        T = bs_transform(0.3)
        with pytest.raises(KeyError):
            apply_transform(T, vacuum_state(["yC"]))


class TestSymplecticEigenvalues:
    def test_thermal(self):
        assert np.allclose(symplectic_eigenvalues(np.diag([1.7, 1.7])), [1.7])

    def test_two_mode_squeezed_is_pure(self):
        s = apply_transform(sq_transform(0.8), vacuum_state(["y2-", "A2"]))
        assert np.allclose(symplectic_eigenvalues(s.cov), [0.5, 0.5], atol=1e-12)

    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError):
            symplectic_eigenvalues(np.array([[1.0, 0.2], [0.0, 1.0]]))

    def test_random_symplectic_on_vacuum_is_pure(self, rng):
        for _ in range(20):
            S = random_symplectic(3, rng)
            s = apply_transform(SymplecticTransform(("yC", "yS", "A1"), S), vacuum_state(["yC", "yS", "A1"]))
            assert np.allclose(symplectic_eigenvalues(s.cov), 0.5, atol=1e-9)
            assert s.purity() == pytest.approx(1.0, abs=1e-9)


class TestFidelity:
    def test_identical(self, rng):
        s = random_state(["yC"], rng)
        assert gaussian_fidelity(s, s, "yC") == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("alpha", [0.3, 1 + 1j, -2j])
    def test_vacuum_vs_coherent(self, alpha):
        f = gaussian_fidelity(vacuum_state(["yC"]), coherent_state(["yC"], [alpha]), "yC")
        assert f == pytest.approx(np.exp(-abs(alpha) ** 2), rel=1e-12)

    def test_vacuum_vs_thermal_matches_fock_oracle(self):
        f = gaussian_fidelity(vacuum_state(["yC"]), thermal_state(["yC"], 1.0), "yC")
        assert f == pytest.approx(FID_VACUUM_THERMAL, abs=1e-6)

    def test_mixed_pair_matches_fock_oracle(self):
        f = gaussian_fidelity(state_1m(0.3, 0.4, 0.5 + 0.2j), state_1m(0.2, -0.1, 0.1 + 0j), "y2+")
        assert f == pytest.approx(FID_MIXED, abs=1e-6)

    def test_coherent_vs_squeezed_matches_fock_oracle(self):
        f = gaussian_fidelity(state_1m(0, 0, 0.7 + 0j), state_1m(0, 0.5, 0j), "y2+")
        assert f == pytest.approx(FID_COHERENT_SQUEEZED, abs=1e-6)

    def test_missing_mode(self):
        with pytest.raises(KeyError):
            gaussian_fidelity(vacuum_state(["yC"]), vacuum_state(["yC"]), "yS")

    @pytest.mark.slow
    def test_frozen_values_reproduce(self):
        import oracles as o
        assert o.fock_fidelity(o.fock_gaussian_dm(), o.fock_gaussian_dm(0.5)) == pytest.approx(FID_VACUUM_THERMAL, abs=1e-9)
        assert o.fock_fidelity(o.fock_gaussian_dm(0.3, 0.4, 0.5 + 0.2j),
                               o.fock_gaussian_dm(0.2, -0.1, 0.1)) == pytest.approx(FID_MIXED, abs=1e-9)


class TestEprAndMarginals:
    def test_vacuum_epr(self):
        assert epr_variance(vacuum_state(["y2+", "A2"]), "y2+", "A2") == pytest.approx(2.0)

    def test_bs_keeps_vacuum_epr(self):
        s = apply_transform(bs_transform(0.7), vacuum_state(["y2+", "A2"]))
        assert epr_variance(s, "y2+", "A2") == pytest.approx(2.0, abs=1e-12)

    def test_same_mode_rejected(self):
        with pytest.raises(ValueError):
            epr_variance(vacuum_state(["y2+", "A2"]), "A2", "A2")

    def test_full_subset_is_identity(self, rng):
        s = random_state(["yC", "yS"], rng)
        p = partial_state(s, ["yC", "yS"])
        assert np.array_equal(p.cov, s.cov) and np.array_equal(p.means, s.means)

    def test_subset_order(self, rng):
        s = random_state(["yC", "yS"], rng)
        p = partial_state(s, ["yS", "yC"])
        assert np.allclose(p.cov[:2, :2], s.block("yS"))

    def test_arm_of_two_mode_squeezed_is_thermal(self):
        r = 0.6
        s = apply_transform(sq_transform(r), vacuum_state(["y2-", "A2"]))
        assert symplectic_eigenvalues(partial_state(s, "A2").cov)[0] == pytest.approx(np.cosh(2 * r) / 2, rel=1e-12)

    def test_marginal_of_vacuum(self):
        p = partial_state(vacuum_state(["yC", "yS"]), "yS")
        assert p.labels == ("yS",) and np.array_equal(p.cov, 0.5 * np.eye(2))

    def test_unknown_label(self):
        with pytest.raises(KeyError):
            partial_state(vacuum_state(["yC"]), ["A1"])


class TestTransformAlgebra:
    def test_identity(self, rng):
        s = random_state(["yC", "A1"], rng)
        out = apply_transform(SymplecticTransform.identity(["yC", "A1"]), s)
        assert np.array_equal(out.cov, s.cov)

    def test_inverse(self, rng):
        S = random_symplectic(2, rng)
        T = SymplecticTransform(("yC", "A1"), S, rng.normal(size=4))
        s = random_state(["yC", "A1"], rng)
        back = apply_transform(T.inverse(), apply_transform(T, s))
        assert np.allclose(back.cov, s.cov, atol=1e-10) and np.allclose(back.means, s.means, atol=1e-10)

    def test_composition_order(self, rng):
        """``T2 @ T1`` applies T1 first, over 100 random draws."""
        for _ in range(100):
            T1 = SymplecticTransform(("yC", "A1"), random_symplectic(2, rng), rng.normal(size=4))
            T2 = SymplecticTransform(("yC", "A1"), random_symplectic(2, rng), rng.normal(size=4))
            s = random_state(["yC", "A1"], rng)
            a = apply_transform(T2 @ T1, s)
            b = apply_transform(T2, apply_transform(T1, s))
            assert np.allclose(a.means, b.means, atol=1e-12, rtol=0)
            assert np.allclose(a.cov, b.cov, atol=1e-12 * max(1, np.abs(b.cov).max()), rtol=0)

    def test_embedding_acts_locally(self):
        s = product_state(coherent_state(["yC"], [1.0]), vacuum_state(["y2+", "A2"]))
        out = apply_transform(bs_transform(np.pi / 2), s)
        assert np.array_equal(out.mean("yC"), s.mean("yC"))


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 3))
def test_symplectic_invariance_property(seed, n):
    rng = np.random.default_rng(seed)
    labels = ["yC", "yS", "A1"][:n]
    s = random_state(labels, rng)
    S = random_symplectic(n, rng)
    assert symplectic_defect(S) < 1e-10
    out = apply_transform(SymplecticTransform(tuple(labels), S), s)
    assert np.allclose(symplectic_eigenvalues(out.cov), symplectic_eigenvalues(s.cov), rtol=1e-9, atol=1e-9)
    assert symplectic_eigenvalues(out.cov).min() >= 0.5 - 1e-9


@settings(max_examples=60, deadline=None)
@given(nu1=st.floats(0.5, 4), nu2=st.floats(0.5, 4), r1=st.floats(-1, 1), r2=st.floats(-1, 1),
       x=st.floats(-2, 2), p=st.floats(-2, 2))
def test_fidelity_bounded_and_symmetric(nu1, nu2, r1, r2, x, p):
    a = GaussianState(as_registry(["yC"]), np.array([x, p]), single_mode_cov(nu1, r1))
    b = GaussianState(as_registry(["yC"]), np.zeros(2), single_mode_cov(nu2, r2, 0.3))
    f = gaussian_fidelity(a, b, "yC")
    assert 0.0 <= f <= 1.0
    assert f == pytest.approx(gaussian_fidelity(b, a, "yC"), rel=1e-9, abs=1e-12)


def test_symplectic_form_shape():
    W = symplectic_form(2)
    assert np.array_equal(W, -W.T) and np.array_equal(W @ W, -np.eye(4))
