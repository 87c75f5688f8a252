import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from qfridge import qop

complex_2x2 = arrays(
    np.complex128, (2, 2),
    elements=st.complex_numbers(max_magnitude=10.0, allow_nan=False, allow_infinity=False),
)


class TestBasis:
    @pytest.mark.parametrize("label, index", [((0, 0, 0), 0), ((0, 1, 0), 2), ((1, 0, 1), 5),
                                              ((1, 1, 1), 7)])
    def test_index(self, label, index):
        assert qop.basis_index(*label) == index

    def test_bijection(self):
        indices = [qop.basis_index(*lab) for lab in qop.basis_labels()]
        assert indices == list(range(8))
        assert [qop.basis_label(i) for i in range(8)] == qop.basis_labels()

    def test_rejects_bad_occupation(self):
        with pytest.raises(ValueError):
            qop.basis_index(0, 2, 0)


class TestEmbed:
    @pytest.mark.parametrize("site", [1, 2, 3])
    def test_identity(self, site):
        assert qop.allclose(qop.embed_single(np.eye(2), site), np.eye(8))

    def test_number_site2(self):
        v = qop.ket(0, 1, 0)
        assert qop.allclose(qop.number(2) @ v, v)
        assert qop.allclose(qop.number(1) @ v, 0 * v)

    def test_lowering_site2(self):
        assert qop.allclose(qop.lowering(2) @ qop.ket(0, 1, 0), qop.ket(0, 0, 0))
        assert qop.allclose(qop.lowering(2) @ qop.ket(0, 0, 0), np.zeros(8))

    def test_number_matches_labels(self):
        for site in (1, 2, 3):
            diag = np.diagonal(qop.number(site)).real
            assert list(diag) == [lab[site - 1] for lab in qop.basis_labels()]

    @pytest.mark.parametrize("site", [0, 4, "2"])
    def test_bad_site(self, site):
        with pytest.raises(ValueError):
            qop.embed_single(np.eye(2), site)

    def test_bad_shape(self):
        with pytest.raises(ValueError):
            qop.embed_single(np.eye(3), 1)

    @given(complex_2x2, complex_2x2, st.sampled_from([(1, 2), (1, 3), (2, 3), (3, 1)]))
    @settings(max_examples=50, deadline=None)
    def test_distinct_sites_commute(self, a, b, sites):
        s, t = sites
        x, y = qop.embed_single(a, s), qop.embed_single(b, t)
        assert np.max(np.abs(x @ y - y @ x)) <= 1e-12 * max(1.0, np.abs(x).max() * np.abs(y).max())

    def test_canonical_commutator(self):
        a = qop.lowering(3)
        assert qop.allclose(qop.commutator(a, qop.dagger(a)), np.eye(8) - 2 * qop.number(3))


class TestDensity:
    def test_maximally_mixed(self):
        d = qop.validate_density_matrix(np.eye(8) / 8)
        assert d.valid
        assert d.min_eigenvalue == pytest.approx(1 / 8, abs=1e-15)

    def test_pure(self):
        d = qop.validate_density_matrix(qop.projector(0, 0, 0))
        assert d.valid
        assert d.min_eigenvalue == pytest.approx(0.0, abs=1e-15)

    def test_scaled_flagged(self):
        d = qop.validate_density_matrix(0.9 * np.eye(8) / 8)
        assert not d.valid
        assert d.trace_deviation == pytest.approx(0.1, abs=1e-14)

    def test_non_hermitian_flagged(self):
        rho = np.eye(8, dtype=complex) / 8
        rho[0, 1] = 1e-6
        assert not qop.validate_density_matrix(rho).valid

    def test_negative_flagged(self):
        rho = np.diag([1.1, -0.1, 0, 0, 0, 0, 0, 0]).astype(complex)
        d = qop.validate_density_matrix(rho)
        assert not d.valid and d.min_eigenvalue == pytest.approx(-0.1)

    def test_wrong_shape(self):
        with pytest.raises(ValueError):
            qop.validate_density_matrix(np.eye(4))

    def test_trace_distance(self):
        assert qop.trace_distance(qop.projector(0, 0, 0), qop.projector(1, 1, 1)) == pytest.approx(1.0)
        assert qop.trace_distance(np.eye(8) / 8, np.eye(8) / 8) == 0.0


class TestEigvals:
    @given(arrays(np.complex128, (8, 8),
                  elements=st.complex_numbers(max_magnitude=5.0, allow_nan=False,
                                              allow_infinity=False)))
    @settings(max_examples=30, deadline=None)
    def test_real_spectrum(self, m):
        h = qop.hermitize(m)
        w = qop.hermitian_eigvals(h)
        assert w.dtype.kind == "f"
        general = np.linalg.eigvals(h)
        assert np.max(np.abs(general.imag)) <= 1e-10 * max(1.0, np.abs(h).max())
        assert np.allclose(np.sort(general.real), w, atol=1e-10)

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError):
            qop.hermitian_eigvals(qop.lowering(1))
