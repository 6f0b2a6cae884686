# Global sign certificate tests
import random
from fractions import Fraction
from itertools import islice

import pytest
from hypothesis import given, strategies as st

from app.algebra.poly import Polynomial, jacobian_det
from app.core.exceptions import MissingCertificateError, ReplayMismatchError
from app.schemas import CertMethod, Sign, SignCertificate, Verdict
from app.services.certify import (
    SignMethod,
    center_sequence,
    curve_emptiness,
    distance_system,
    nonvanishing_sign,
    replay_sign_certificate,
    verify_sos,
)
from app.services.maps import map_service
from tests.strategies import points

_X, _Y = Polynomial.var("x"), Polynomial.var("y")


def _assert_sign_on_samples(cert: SignCertificate, samples: int = 1000, seed: int = 0) -> None:
    """A never-vanishing certificate must agree with the sign at random rational points."""
    g = cert.polynomial.with_vars(("x", "y"))
    rng = random.Random(seed)
    for _ in range(samples):
        point = tuple(Fraction(rng.randint(-500, 500), rng.randint(1, 50)) for _ in range(2))
        value = g.eval_exact(point)
        assert value != 0
        assert (value > 0) is (cert.sign is Sign.POSITIVE)


class TestSOS:
    """Sum-of-squares route."""

    @pytest.mark.unit
    def test_identity_check(self, X, Y):
        assert verify_sos(X**2 + 2 * X * Y + 2 * Y**2, [X + Y, Y])
        assert not verify_sos(X**2 + Y**2 + 1, [X, Y])

    @pytest.mark.unit
    def test_psi_jacobian_vanishes_at_origin(self, psi):
        """det(D psi) is a sum of squares whose parts share the zero (0, 0)."""
        cert = nonvanishing_sign(jacobian_det(psi))
        assert cert.method is CertMethod.SOS
        assert cert.verdict is Verdict.VANISHES
        assert cert.witness.to_box().contains((0, 0))

    @pytest.mark.unit
    def test_positive_sum_of_squares(self, X, Y):
        """(xy + 1)^2 + x^2 with explicit parts never vanishes."""
        cert = nonvanishing_sign((X * Y + 1) ** 2 + X**2, sos_parts=[X * Y + 1, X], method=SignMethod.SOS)
        assert cert.positive
        _assert_sign_on_samples(cert)

    @pytest.mark.unit
    def test_sos_without_parts(self, X, Y):
        with pytest.raises(MissingCertificateError):
            nonvanishing_sign(X**2 + Y**2 + 1, method=SignMethod.SOS)

    @pytest.mark.unit
    def test_three_parts_with_a_common_zero(self, X, Y):
        """x, y and x + y all vanish at the origin; the third part only filters."""
        parts = [X, Y, X + Y]
        cert = nonvanishing_sign(X**2 + Y**2 + (X + Y) ** 2, sos_parts=parts, method=SignMethod.SOS)
        assert cert.verdict is Verdict.VANISHES
        assert cert.witness.to_box().contains((0, 0))
        assert replay_sign_certificate(cert).verdict is Verdict.VANISHES

    @pytest.mark.unit
    def test_third_part_removes_the_common_zeros(self, X, Y):
        """x^2 - 1 and y^2 - 1 meet at four points; x + y - 3 misses all of them."""
        parts = [X**2 - 1, Y**2 - 1, X + Y - 3]
        g = sum((p * p for p in parts[1:]), parts[0] * parts[0])
        cert = nonvanishing_sign(g, sos_parts=parts, method=SignMethod.SOS)
        assert cert.positive
        assert cert.method is CertMethod.SOS
        _assert_sign_on_samples(cert)

    @pytest.mark.unit
    def test_third_part_keeps_some_common_zeros(self, X, Y):
        parts = [X**2 - 1, Y**2 - 1, X - Y]
        g = sum((p * p for p in parts[1:]), parts[0] * parts[0])
        cert = nonvanishing_sign(g, sos_parts=parts, method=SignMethod.SOS)
        assert cert.verdict is Verdict.VANISHES
        box = cert.witness.to_box()
        assert box.contains((-1, -1)) or box.contains((1, 1))

    @pytest.mark.unit
    def test_constant_part(self, X, Y):
        cert = nonvanishing_sign(X**2 + Y**2 + 4, sos_parts=[X, Y, Polynomial.constant(2)], method=SignMethod.SOS)
        assert cert.positive
        _assert_sign_on_samples(cert)


class TestDistanceCritical:
    """Critical points of the distance to a center."""

    @pytest.mark.unit
    def test_centers_start_at_origin_and_are_seeded(self):
        first = list(islice(center_sequence(7), 4))
        assert first[0] == (0, 0)
        assert first == list(islice(center_sequence(7), 4))

    @pytest.mark.unit
    def test_lagrange_condition(self, X, Y):
        g, L = distance_system(X**2 + Y**2 - 1, (Fraction(0), Fraction(0)))
        assert L.is_zero()

    @pytest.mark.unit
    def test_empty_curve(self, X, Y):
        """x^2 + y^2 + 1 is positive everywhere."""
        cert = curve_emptiness(X**2 + Y**2 + 1)
        assert cert.verdict is Verdict.NEVER_VANISHES
        assert cert.sign is Sign.POSITIVE
        assert cert.method is CertMethod.DISTANCE_CRITICAL
        _assert_sign_on_samples(cert)

    @pytest.mark.unit
    def test_degenerate_center_is_skipped(self, X, Y):
        """A circle around the origin makes the first center degenerate; the next one works."""
        cert = curve_emptiness(X**2 + Y**2 - 1)
        assert cert.verdict is Verdict.VANISHES
        assert cert.center != (0, 0)

    @pytest.mark.unit
    def test_negative_everywhere(self, X, Y):
        cert = nonvanishing_sign(-(X**2) - (X * Y - 1) ** 2, method=SignMethod.DISTANCE)
        assert cert.never_vanishes
        assert cert.sign is Sign.NEGATIVE
        _assert_sign_on_samples(cert)

    @pytest.mark.unit
    def test_center_on_curve(self, X, Y):
        cert = curve_emptiness(X * Y)
        assert cert.verdict is Verdict.VANISHES
        assert cert.witness.to_box().contains((0, 0))

    @pytest.mark.slow
    @pytest.mark.property
    @given(
        st.integers(1, 5),
        st.integers(1, 5),
        points,
        st.integers(-9, 9).filter(lambda e: e != 0),
        st.integers(0, 20),
    )
    def test_ellipses(self, a, b, center, e, seed):
        """a(x - c1)^2 + b(y - c2)^2 + e has real points exactly when e < 0."""
        c1, c2 = center
        g = a * (_X - c1) ** 2 + b * (_Y - c2) ** 2 + e
        cert = curve_emptiness(g, seed=seed)
        if e > 0:
            assert cert.positive
            _assert_sign_on_samples(cert, seed=seed)
        else:
            assert cert.verdict is Verdict.VANISHES
            assert g.eval_interval(cert.witness.to_box()).contains_zero()

    @pytest.mark.integration
    def test_psi_second_component(self, psi):
        """(xy + 1)^2 + x^2 > 0 by the distance method."""
        cert = nonvanishing_sign(psi.components[1], method=SignMethod.DISTANCE)
        assert cert.positive
        _assert_sign_on_samples(cert)

    @pytest.mark.slow
    def test_jacobian_of_F(self, F):
        """det(DF) never vanishes and is positive, anchored by the value 2 at the origin."""
        cert = nonvanishing_sign(jacobian_det(F))
        assert cert.method is CertMethod.DISTANCE_CRITICAL
        assert cert.positive
        assert jacobian_det(F).eval_exact((0, 0)) == 2
        _assert_sign_on_samples(cert)


class TestReplay:
    """Re-deriving certificates from their records."""

    @pytest.mark.unit
    def test_round_trip_and_replay(self, X, Y):
        cert = curve_emptiness(X**2 + Y**2 + 1, seed=3)
        parsed = SignCertificate.model_validate_json(cert.model_dump_json())
        assert parsed == cert
        assert replay_sign_certificate(parsed).verdict is cert.verdict

    @pytest.mark.unit
    def test_tampered_verdict(self, X, Y):
        cert = curve_emptiness(X**2 + Y**2 + 1)
        forged = cert.model_copy(update={"verdict": Verdict.VANISHES, "sign": None})
        with pytest.raises(ReplayMismatchError):
            replay_sign_certificate(forged)

    @pytest.mark.unit
    def test_tampered_system(self, X, Y):
        cert = curve_emptiness(X**2 + Y**2 + 1)
        forged = cert.model_copy(update={"auxiliary_system": (X, Y)})
        with pytest.raises(ReplayMismatchError):
            replay_sign_certificate(forged)

    @pytest.mark.unit
    def test_sos_replay(self, psi):
        cert = nonvanishing_sign(jacobian_det(psi))
        assert replay_sign_certificate(cert).verdict is Verdict.VANISHES

    @pytest.mark.unit
    def test_F_decomposition_on_request(self, F):
        """The F decomposition certifies positivity once its parts are supplied."""
        cert = nonvanishing_sign(jacobian_det(F), sos_parts=map_service.jacobian_sos("F"), method=SignMethod.SOS)
        assert cert.positive
        assert cert.method is CertMethod.SOS
        _assert_sign_on_samples(cert)
