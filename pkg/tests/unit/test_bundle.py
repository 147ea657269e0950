"""Unit tests for the principal-bundle certificates and W_q identities."""
import pytest

from src.ncalg.bundle import (
    bundle_generators, commutator_expansion_check, is_idempotent, line_idempotent,
    poly_F, poly_Ftilde, poly_G, power_certificate, q_binomial, verify_partition_of_unity,
    verify_wq_relations, wq_commutation_check, wq_commutation_details,
)
from src.ncalg.laurent import LaurentPoly, q_power
from src.ncalg.ncpoly import lens_membership
from src.ncalg.polynomial import Polynomial


@pytest.mark.unit
class TestPolynomials:

    def test_F_for_l_1(self):
        # (1 - (1 - q^-2 X)) / X = q^-2
        assert poly_F(1) == Polynomial([q_power(-2)])

    def test_Ftilde_for_l_2(self):
        # 1 - (1 - X)(1 - q^2 X) = (1 + q^2) X - q^2 X^2
        assert poly_Ftilde(2) == Polynomial([1 + q_power(2), -q_power(2)])

    def test_G(self):
        assert poly_G(1) == Polynomial([1])
        # (1 - (1 - X)^3) / X = 3 - 3X + X^2
        assert poly_G(3) == Polynomial([3, -3, 1])

    def test_G_identity(self):
        x = Polynomial([0, 1])
        for k in range(1, 5):
            assert Polynomial([1]) - (Polynomial([1]) - x) ** k == poly_G(k) * x

    def test_evaluate(self):
        assert poly_G(2).evaluate(0.5, 0.25) == pytest.approx(1.75)


@pytest.mark.unit
class TestPartitionOfUnity:

    @pytest.mark.parametrize('k,l', [(1, 1), (1, 2), (2, 1), (2, 3), (3, 2)])
    def test_certificate_reduces_to_one(self, k, l):
        assert verify_partition_of_unity(bundle_generators(k, l))

    @pytest.mark.slow
    @pytest.mark.parametrize('k,l', [(3, 5), (4, 7)])
    def test_certificate_reduces_to_one_large_weights(self, k, l):
        assert verify_partition_of_unity(bundle_generators(k, l))

    def test_non_coprime_weights_rejected(self):
        with pytest.raises(ValueError, match='not coprime'):
            bundle_generators(2, 4)

    def test_charges(self):
        cert = bundle_generators(2, 3)
        charges = cert.charges()

        assert charges['xi'] == [{-6}, {-6}]
        assert charges['eta'] == [{6}, {6}]
        assert charges['alpha'] == [{6}, {6}]
        assert charges['beta'] == [{-6}, {-6}]

    def test_broken_certificate_fails(self):
        cert = bundle_generators(1, 1)
        broken = type(cert)(k=1, l=1, xi=cert.xi, eta=(cert.eta[0], cert.eta[0]),
                            alpha=cert.alpha, beta=cert.beta)
        assert not verify_partition_of_unity(broken)


@pytest.mark.unit
class TestPowerCertificates:

    @pytest.mark.parametrize('k,l', [(1, 1), (2, 3)])
    @pytest.mark.parametrize('d', [1, 2])
    def test_power_certificate(self, k, l, d):
        cert = power_certificate(bundle_generators(k, l), d)

        assert cert.power == d
        assert len(cert.xi) == 2 ** d
        assert verify_partition_of_unity(cert)
        for x in cert.xi + cert.eta + cert.alpha + cert.beta:
            assert lens_membership(x, k, l, d)

    @pytest.mark.slow
    def test_third_power(self):
        for k, l in ((1, 1), (2, 3)):
            assert verify_partition_of_unity(power_certificate(bundle_generators(k, l), 3))

    def test_invalid_power(self):
        with pytest.raises(ValueError):
            power_certificate(bundle_generators(1, 1), 0)


@pytest.mark.unit
class TestIdempotents:

    @pytest.mark.parametrize('k,l', [(1, 1), (1, 2), (2, 3)])
    @pytest.mark.parametrize('sign', [1, -1])
    def test_line_idempotent(self, k, l, sign):
        e = line_idempotent(bundle_generators(k, l), sign)
        assert len(e) == 2
        assert is_idempotent(e)

    def test_invalid_sign(self):
        with pytest.raises(ValueError, match='Invalid sign'):
            line_idempotent(bundle_generators(1, 1), 0)


@pytest.mark.unit
class TestWqIdentities:

    @pytest.mark.parametrize('k,l', [(1, 1), (2, 3), (3, 5)])
    def test_wq_relations(self, k, l):
        results = verify_wq_relations(k, l)
        assert set(results) == {'b_selfadjoint', 'b_a', 'a_astar', 'astar_a'}
        assert all(results.values())

    @pytest.mark.parametrize('l', [1, 2, 3, 4])
    def test_commutation_products(self, l):
        assert all(wq_commutation_details(l).values())
        assert wq_commutation_check(l)

    @pytest.mark.parametrize('l', [1, 2, 3, 5])
    def test_commutator_expansion(self, l):
        assert commutator_expansion_check(l)

    def test_q_binomial(self):
        assert q_binomial(3, 0) == 1
        assert q_binomial(3, 3) == 1
        # [3 choose 1]_{q^2} = 1 + q^2 + q^4
        assert q_binomial(3, 1) == LaurentPoly({0: 1, 2: 1, 4: 1})
        assert q_binomial(4, 2) == LaurentPoly({0: 1, 2: 1, 4: 2, 6: 1, 8: 1})

    def test_q_binomial_out_of_range(self):
        with pytest.raises(ValueError):
            q_binomial(3, 4)
