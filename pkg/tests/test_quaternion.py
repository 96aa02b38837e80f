import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quatspec.exceptions import DomainError
from quatspec.quaternion import (
    I, J, K, ONE,
    EigenSphere,
    Quaternion,
    SliceFrame,
    complete_frame,
    conj,
    conjugacy_class,
    conjugate_by,
    conjugator,
    im,
    imaginary_unit,
    inv,
    modulus,
    mul,
    qconj_array,
    qmul_array,
    re,
)

from conftest import nonzero_quaternions, oracle_mul, quaternions

EPS = np.finfo(float).eps


def close(p, q, tol=1e-12):
    return np.allclose(p.to_array(), Quaternion.coerce(q).to_array(), atol=tol, rtol=0)


class TestArithmetic:
    def test_multiplication_table(self):
        table = {
            (I, I): -ONE, (J, J): -ONE, (K, K): -ONE,
            (I, J): K, (J, K): I, (K, I): J,
            (J, I): -K, (K, J): -I, (I, K): -J,
        }
        for (p, q), r in table.items():
            assert mul(p, q) == r
        assert mul(mul(I, J), K) == -ONE

    def test_examples(self):
        assert I * J == K
        q = Quaternion(0.3, -1.2, 2.5, 0.7)
        assert q * 1 == q and mul(q, ONE) == q
        assert (ONE + I) * (ONE + J) == Quaternion(1, 1, 1, 1)

    def test_conj_modulus_inv(self):
        assert conj(Quaternion(1, 2, 3, 4)) == Quaternion(1, -2, -3, -4)
        assert modulus(Quaternion(1, 1, 1, 1)) == 2.0
        assert inv(I) == -I
        q = Quaternion(1, 2, 3, 4)
        assert close(inv(q), Quaternion(1, -2, -3, -4) / 30.0)
        assert re(q) == 1.0 and im(q) == Quaternion(0, 2, 3, 4)

    def test_inv_zero(self):
        with pytest.raises(DomainError, match="zero quaternion has no inverse"):
            inv(Quaternion())

    @given(quaternions, quaternions)
    def test_product_matches_matrix_oracle(self, p, q):
        scale = max(abs(p) * abs(q), 1.0)
        assert close(p * q, oracle_mul(p, q), 8 * EPS * scale)

    @given(quaternions, quaternions)
    def test_modulus_multiplicative(self, p, q):
        assert abs(modulus(p * q) - modulus(p) * modulus(q)) <= 4 * EPS * modulus(p) * modulus(q)

    @given(nonzero_quaternions)
    def test_inverse(self, q):
        assert close(q * inv(q), ONE, 1e-12) and close(inv(q) * q, ONE, 1e-12)

    @given(quaternions, quaternions)
    def test_conj_antimultiplicative(self, p, q):
        assert close(conj(p * q), conj(q) * conj(p), 8 * EPS * max(abs(p) * abs(q), 1.0))

    def test_array_helpers_agree(self, rng):
        p, q = rng.normal(size=(5, 4)), rng.normal(size=(5, 4))
        out = qmul_array(p, q)
        for a, b, c in zip(p, q, out):
            assert np.allclose(c, mul(Quaternion.from_array(a), Quaternion.from_array(b)).to_array())
        assert np.array_equal(qconj_array(p)[:, 1:], -p[:, 1:])

    def test_json_order(self):
        assert Quaternion(1, 2, 3, 4).to_list() == [1, 2, 3, 4]


class TestConjugacy:
    def test_class_examples(self):
        assert conjugacy_class(I) == EigenSphere(0, 1)
        assert conjugacy_class(Quaternion(5)) == EigenSphere(5, 0)
        c = conjugacy_class(Quaternion(1, 2))
        assert c.re == 1 and c.rad == 2

    def test_conjugate_by_examples(self):
        assert conjugate_by(I, J) == -I
        q = Quaternion(0.1, 0.2, 0.3, 0.4)
        assert conjugate_by(q, ONE) == q
        assert close(conjugate_by(Quaternion(5), Quaternion(1, -2, 0.5, 3)), Quaternion(5))

    def test_conjugate_by_zero(self):
        with pytest.raises(DomainError):
            conjugate_by(I, Quaternion())

    @given(quaternions, nonzero_quaternions)
    def test_class_invariant(self, q, s):
        c1, c2 = conjugacy_class(q), conjugacy_class(conjugate_by(q, s))
        tol = 1e-12 * max(abs(q), 1.0)
        assert abs(c1.re - c2.re) <= tol and abs(c1.rad - c2.rad) <= tol

    def test_sphere_point_and_contains(self):
        s = EigenSphere(1.0, 2.0)
        p = s.point(J)
        assert p == Quaternion(1, 0, 2, 0)
        assert s.contains(conjugate_by(p, Quaternion(1, 1, 0, 2)))
        assert not s.contains(Quaternion(1, 2.1))
        with pytest.raises(DomainError):
            EigenSphere(0.0, -1.0)


def frame_invariants(f: SliceFrame, tol=1e-12):
    for u in (f.i, f.j, f.k):
        assert abs(u.a) <= tol and abs(modulus(u) - 1) <= tol
    assert close(f.i * f.j, f.k, tol)
    assert close(f.i * f.j, -(f.j * f.i), tol)
    assert close(f.i * f.i, -ONE, tol)


unit_vectors = st.tuples(
    st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1)
).filter(lambda v: math.hypot(*v) > 1e-3).map(lambda v: np.array(v) / np.linalg.norm(v))


class TestFrames:
    def test_standard_i(self):
        f = complete_frame(I)
        assert (f.i, f.j, f.k) == (I, J, K)
        frame_invariants(f)

    def test_standard_k(self):
        f = complete_frame(K)
        frame_invariants(f)
        assert abs(float(f.j.vector @ K.vector)) <= 1e-15

    def test_diagonal_unit(self):
        u = Quaternion(0, 1, 1, 0) / math.sqrt(2)
        f = complete_frame(u)
        frame_invariants(f)
        assert abs(float(f.j.vector @ u.vector)) <= 1e-15

    @given(unit_vectors)
    def test_invariants_and_determinism(self, v):
        f = complete_frame(v)
        frame_invariants(f)
        g = complete_frame(Quaternion(0.0, *v))
        assert f == g
        assert all(np.array_equal(a.to_array(), b.to_array()) for a, b in zip((f.i, f.j, f.k), (g.i, g.j, g.k)))

    def test_rejects_non_unit(self):
        with pytest.raises(DomainError):
            complete_frame(Quaternion(0, 2, 0, 0))
        with pytest.raises(DomainError):
            complete_frame(Quaternion(0.5, 0.5, 0.5, 0.5))
        with pytest.raises(DomainError):
            imaginary_unit([0.0, 0.0, 0.0])

    def test_frame_validation(self):
        with pytest.raises(DomainError):
            SliceFrame(I, I, K)
        with pytest.raises(DomainError):
            SliceFrame(I, J, -K)


class TestConjugator:
    def test_examples(self):
        s = conjugator(I, J)
        assert close(s, (I + J) / math.sqrt(2))
        assert close(inv(s) * I * s, J)
        s = conjugator(I, I)
        assert s == I
        assert close(inv(s) * I * s, I)
        a = conjugator(I, -I)
        assert abs(a.a) == 0 and abs(float(a.vector @ I.vector)) <= 1e-15
        assert close(inv(a) * I * a, -I)
        assert close(inv(J) * I * J, -I)

    def test_thousand_random_pairs(self, rng):
        worst = 0.0
        for _ in range(1000):
            u, v = rng.normal(size=(2, 3))
            u, v = Quaternion(0, *(u / np.linalg.norm(u))), Quaternion(0, *(v / np.linalg.norm(v)))
            s = conjugator(u, v)
            worst = max(worst, modulus(conjugate_by(u, s) - v), modulus(inv(s) * u * s - v))
        assert worst <= 1e-12

    def test_near_antipodal(self):
        v = Quaternion(0, -1, 1e-12, 0)
        v = v / modulus(v)
        s = conjugator(I, v)
        assert modulus(conjugate_by(I, s) - v) <= 1e-10
