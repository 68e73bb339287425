import warnings

import numpy as np
import pytest

from mukit import catalog, matnum
from mukit.constructors import (
    CirculantSpec,
    NormClaimWarning,
    OmegaCertificate,
    Parity,
    birkhoff,
    checkerboard,
    circulant,
    circulant_eigs,
    circulant_even,
    circulant_odd,
    cone_combo,
    omega_build,
)
from mukit.errors import DimensionError, InputError
from mukit.verify import multiset_distance

SQRT3 = np.sqrt(3.0)


def test_circulant_shifts_right():
    C = circulant([1, 2, 3])
    np.testing.assert_array_equal(C.real, [[1, 2, 3], [3, 1, 2], [2, 3, 1]])
    with pytest.raises(InputError):
        circulant([])


def test_spec_validation():
    with pytest.raises(InputError):
        CirculantSpec(Parity.EVEN, 0.0, 1.0)
    with pytest.raises(InputError):
        CirculantSpec(Parity.EVEN, 1.0, 1.0, alphas=(0.5, -1.0))
    with pytest.raises(InputError):
        CirculantSpec(Parity.ODD, 1.0, 1.0)


def test_spec_round_trip():
    spec = CirculantSpec(Parity.ODD, 0.3, -0.2, 0.5, (0.1, 0.7))
    assert CirculantSpec.from_dict(spec.to_dict()) == spec
    assert spec.n == 7


def test_even_example():
    M, delta = circulant_even(1.0, -0.5, [1 / 3])
    np.testing.assert_allclose(M, catalog.EVEN_EXAMPLE_LITERAL, atol=1e-15)
    assert delta == pytest.approx(8 / 3)
    assert matnum.spectral_norm(M) == pytest.approx(8 / 3, abs=1e-9)


def test_even_counterexample_warns():
    with pytest.warns(NormClaimWarning):
        M, delta = circulant_even(1.0, 2.0, [3.0])
    np.testing.assert_allclose(M, catalog.EVEN_COUNTEREXAMPLE_LITERAL, atol=1e-15)
    assert delta == 8.0
    assert matnum.spectral_norm(M) == pytest.approx(16.0, abs=1e-9)
    assert not catalog.EVEN_COUNTEREXAMPLE.norm_is_row_sum


def test_even_trivial():
    M, delta = circulant_even(1.0, 0.0)
    np.testing.assert_allclose(M, np.ones((2, 2)))
    assert delta == 2.0 and matnum.spectral_norm(M) == pytest.approx(2.0)


def test_even_norm_can_exceed_row_sum_even_when_a_at_least_b():
    # a >= |b| is not enough: at j = n/4 the factor |z + conj(z) i| is
    # sqrt(2)|a + b|, which beats 2a once alpha_2 is small
    spec = CirculantSpec(Parity.EVEN, 1.0, 1.0, alphas=(0.1,))
    assert spec.template_condition
    assert spec.spectral_norm == pytest.approx(2.8284271247 * 0.9, rel=1e-9)
    assert spec.row_sum == pytest.approx(2.2)
    assert not spec.norm_is_row_sum
    with pytest.warns(NormClaimWarning):
        circulant_even(1.0, 1.0, [0.1])


def test_odd_example():
    M, delta = circulant_odd(1 / 20, -SQRT3 / 20, 0.9)
    np.testing.assert_allclose(M, catalog.ODD_EXAMPLE_LITERAL, atol=1e-15)
    assert delta == pytest.approx(1.0)
    np.testing.assert_allclose(matnum.singular_values(M), [1, 1, 0.7], atol=1e-9)


def test_odd_small_b():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        M, delta = circulant_odd(0.5, 0.0, 1.0)
    assert delta == 2.0 and matnum.spectral_norm(M) == pytest.approx(2.0, abs=1e-9)


def test_odd_large_b_breaks_norm():
    # the first-row phase matters: with b = 100 the j = 1 eigenvalue dominates
    with pytest.warns(NormClaimWarning):
        M, delta = circulant_odd(1.0, 100.0, 1.0)
    assert delta == 3.0
    assert matnum.spectral_norm(M) == pytest.approx(100 * SQRT3, rel=1e-9)


def test_circulant_eigs():
    np.testing.assert_allclose(circulant_eigs([2.5, 0, 0, 0]), [2.5] * 4)
    lam = circulant_eigs(catalog.ODD_EXAMPLE.first_row())
    assert abs(lam[0]) == pytest.approx(1.0) and np.argmax(np.abs(lam)) == 0
    with pytest.raises(InputError):
        circulant_eigs([])


def test_circulant_eigs_match_dense(rng):
    for n in range(1, 17):
        row = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        C = circulant(row)
        assert multiset_distance(circulant_eigs(row), matnum.eigenvalues(C)) <= 1e-9
        assert matnum.is_normal(C)[1] <= 1e-10 * max(1.0, matnum.frobenius_norm(C))


def test_birkhoff_examples():
    P = birkhoff(5, 1, seed=0)
    assert set(np.unique(P.real)) == {0.0, 1.0}
    assert matnum.spectral_norm(P) == pytest.approx(1.0)
    M = birkhoff(2, 2, seed=4)
    w = M[0, 0].real
    np.testing.assert_allclose(M, [[w, 1 - w], [1 - w, w]], atol=1e-15)
    with pytest.raises(InputError):
        birkhoff(3, 0, seed=0)


@pytest.mark.parametrize("n,k,seed", [(1, 1, 0), (4, 3, 7), (9, 6, 2), (12, 20, 5)])
def test_birkhoff_invariants(n, k, seed):
    M = birkhoff(n, k, seed)
    assert M.real.min() >= -1e-15 and np.all(M.imag == 0)
    np.testing.assert_allclose(M.sum(axis=0), 1.0, atol=1e-12)
    np.testing.assert_allclose(M.sum(axis=1), 1.0, atol=1e-12)
    assert matnum.spectral_norm(M) == pytest.approx(1.0, abs=1e-10)


def test_checkerboard():
    D = checkerboard(5)
    assert D[0, 0] == 1 and D[0, 1] == -1
    assert matnum.spectral_norm(D) == pytest.approx(5.0, abs=1e-9)
    np.testing.assert_array_equal(checkerboard(1), [[1]])
    D3 = checkerboard(3)
    assert matnum.spectral_norm(D3) == pytest.approx(3.0, abs=1e-9)
    v = np.array([1, -1, 1])
    np.testing.assert_allclose(D3 @ v, 3 * v)
    with pytest.raises(InputError):
        checkerboard(4)


def test_cone_examples():
    D = birkhoff(4, 2, seed=1)
    X, r = cone_combo([(3.0, D)])
    np.testing.assert_allclose(X, 3 * D)
    assert r == 3.0
    X, r = cone_combo([(1.0, catalog.STOCHASTIC_ADDEND)], [(1.0, catalog.EVEN_EXAMPLE)])
    np.testing.assert_allclose(X, catalog.SUM_EXAMPLE_LITERAL, atol=1e-14)
    assert r == pytest.approx(11 / 3)
    assert not matnum.is_normal(X)[0]
    X, r = cone_combo(cir_terms=[(1.0, catalog.EVEN_EXAMPLE)])
    assert r == pytest.approx(8 / 3)


def test_cone_radial(rng):
    X, r = cone_combo(
        [(0.4, birkhoff(5, 3, seed=3))],
        [(0.8, CirculantSpec(Parity.ODD, 0.2, 0.1, 0.5, (0.3,)))],
    )
    assert matnum.spectral_radius(X) == pytest.approx(r, abs=1e-8)
    assert matnum.spectral_norm(X) == pytest.approx(r, abs=1e-8)


def test_cone_rejections():
    with pytest.raises(InputError):
        cone_combo()
    with pytest.raises(InputError):
        cone_combo(cir_terms=[(1.0, catalog.EVEN_COUNTEREXAMPLE)])
    with pytest.raises(InputError):
        cone_combo(cir_terms=[(1.0, CirculantSpec(Parity.ODD, 1.0, 100.0, 1.0))])
    with pytest.raises(InputError):
        cone_combo([(-1.0, np.eye(3))])
    with pytest.raises(InputError):
        cone_combo([(1.0, 2 * np.eye(3))])
    with pytest.raises(DimensionError):
        cone_combo([(1.0, np.eye(3))], [(1.0, catalog.EVEN_EXAMPLE)])


def test_omega_examples():
    A = omega_build(catalog.rotated_a_certificate(1))
    np.testing.assert_allclose(A, catalog.ROTATED_A, atol=1e-12)
    cert = OmegaCertificate(3, 1.0, np.zeros(3), np.zeros(3), 1, ds_terms=[(1.0, np.eye(3))])
    np.testing.assert_array_equal(omega_build(cert), np.eye(3))
    assert cert.expected_mu == 1.0


def test_omega_random_phase_square(rng):
    cert = OmegaCertificate(3, 2.0, rng.uniform(0, 2 * np.pi, 3), np.zeros(3), 2,
                            cir_terms=[(1.0, catalog.ODD_EXAMPLE)])
    assert cert.expected_mu == pytest.approx(2.0)
    assert not cert.exact
    assert matnum.spectral_norm(omega_build(cert)) <= 2.0 + 1e-12


def test_omega_certificate_validation_and_round_trip():
    with pytest.raises(DimensionError):
        OmegaCertificate(3, 1.0, np.zeros(2), np.zeros(3), 1)
    with pytest.raises(InputError):
        OmegaCertificate(3, 0.0, np.zeros(3), np.zeros(3), 1)
    with pytest.raises(InputError):
        OmegaCertificate(3, 1.0, np.zeros(3), np.zeros(3), 0)
    cert = catalog.rotated_a_certificate(1)
    cert.cir_terms = [(0.5, catalog.ODD_EXAMPLE)]
    back = OmegaCertificate.from_dict(cert.to_dict())
    np.testing.assert_allclose(omega_build(back), omega_build(cert))
    assert back.r == pytest.approx(cert.r)
    with pytest.raises(DimensionError):
        omega_build(OmegaCertificate(4, 1.0, np.zeros(4), np.zeros(4), 1, ds_terms=[(1.0, np.eye(3))]))
