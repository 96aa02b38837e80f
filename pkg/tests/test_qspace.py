import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quatspec.exceptions import DomainError
from quatspec.quaternion import I, J, K, ONE, Quaternion, complete_frame, conj, conjugate_by, modulus
from quatspec.qspace import (
    PROFILES,
    QOperator,
    QVector,
    adjoint,
    apply,
    compose,
    gram_schmidt,
    inner,
    is_normal,
    normality_residual,
    operator_norm_fro,
    q_operator,
    qmatmul,
    random_normal,
    random_unitary,
    slice_inner,
    sup_norm_lower_bound,
)

from conftest import oracle_mul, quaternions


def qclose(p, q, tol):
    return modulus(Quaternion.coerce(p) - Quaternion.coerce(q)) <= tol


def rvec(rng, n):
    return QVector(rng.standard_normal((n, 4)))


def rop(rng, n):
    return QOperator(rng.standard_normal((n, n, 4)))


class TestInner:
    def test_examples(self):
        e1, e2 = QVector.basis(2, 0), QVector.basis(2, 1)
        assert inner(e1, e2) == Quaternion() and inner(e1, e1) == ONE
        x = QVector([I, J])
        assert inner(x, x) == Quaternion(2)
        assert qclose(inner(x * J, x), Quaternion(2) * J, 0)

    def test_loop_oracle(self, rng):
        x, y = rvec(rng, 5), rvec(rng, 5)
        ref = Quaternion()
        for m in range(5):
            ref = ref + oracle_mul(conj(y[m]), x[m])
        assert qclose(inner(x, y), ref, 1e-12)

    def test_axioms_thousand_triples(self, rng):
        worst = 0.0
        for _ in range(1000):
            n = int(rng.integers(1, 6))
            x, y, z = rvec(rng, n), rvec(rng, n), rvec(rng, n)
            p, q = Quaternion(*rng.standard_normal(4)), Quaternion(*rng.standard_normal(4))
            scale = (x.norm() + y.norm()) * z.norm() * (abs(p) + abs(q))
            lhs = inner(x * p + y * q, z)
            rhs = inner(x, z) * p + inner(y, z) * q
            worst = max(worst, modulus(lhs - rhs) / scale)
            worst = max(worst, modulus(inner(x, y) - conj(inner(y, x))) / (x.norm() * y.norm()))
            xx = inner(x, x)
            assert xx.a > 0 and max(abs(xx.b), abs(xx.c), abs(xx.d)) <= 1e-12 * xx.a
        assert worst <= 1e-12

    def test_zero_vector_norm(self):
        assert inner(QVector(np.zeros((3, 4))), QVector(np.zeros((3, 4)))) == Quaternion()

    def test_dimension_mismatch(self, rng):
        with pytest.raises(DomainError):
            inner(rvec(rng, 2), rvec(rng, 3))


class TestSliceInner:
    def test_pure_j_projects_to_zero(self):
        x = QVector([ONE])
        y = QVector([-J])  # <x,y> = conj(-j) * 1 = j
        assert inner(x, y) == J
        assert slice_inner(x, y, complete_frame(I)) == Quaternion()

    def test_self_and_slice_values(self, rng):
        f = complete_frame(I)
        x = rvec(rng, 4)
        assert qclose(slice_inner(x, x, f), inner(x, x), 1e-12)
        y = QVector([Quaternion(0.5, 2.0), Quaternion(-1.0, 0.25)])
        x2 = QVector([ONE, ONE])
        v = inner(x2, y)
        assert v.c == 0 and v.d == 0
        assert slice_inner(x2, y, f) == v

    def test_axioms_in_slice(self, rng):
        u = rng.standard_normal(3)
        f = complete_frame(u / np.linalg.norm(u))
        for _ in range(200):
            x, y, z = rvec(rng, 3), rvec(rng, 3), rvec(rng, 3)
            a, b = rng.standard_normal(2)
            c = Quaternion(a) + f.i * b
            s = slice_inner(x, y, f)
            # value lies in C_i
            resid = s.vector - (s.vector @ f.i.vector) * f.i.vector
            assert np.linalg.norm(resid) <= 1e-12 * x.norm() * y.norm()
            # right C_i-linearity and conjugate symmetry
            assert qclose(slice_inner(x * c + z, y, f), slice_inner(x, y, f) * c + slice_inner(z, y, f),
                          1e-11 * (x.norm() * abs(c) + z.norm()) * y.norm())
            assert qclose(s, conj(slice_inner(y, x, f)), 1e-12 * x.norm() * y.norm())


class TestOperators:
    def test_apply_examples(self, rng):
        x = rvec(rng, 3)
        assert apply(QOperator.identity(3), x).allclose(x, 0)
        P = QOperator.from_real([[0, 1], [1, 0]])
        assert apply(P, QVector([ONE, Quaternion()])).allclose(QVector([Quaternion(), ONE]), 0)
        Tj = QOperator([[J.to_array()]])
        assert compose(Tj, Tj).allclose(QOperator([[(-ONE).to_array()]]), 0)

    def test_qmatmul_loop_oracle(self, rng):
        S, T = rng.standard_normal((3, 4, 4)), rng.standard_normal((4, 2, 4))
        out = qmatmul(S, T)
        for r in range(3):
            for c in range(2):
                ref = Quaternion()
                for m in range(4):
                    ref = ref + oracle_mul(Quaternion.from_array(S[r, m]), Quaternion.from_array(T[m, c]))
                assert np.allclose(out[r, c], ref.to_array(), atol=1e-12)

    def test_right_linearity(self, rng):
        T, x = rop(rng, 4), rvec(rng, 4)
        q = Quaternion(*rng.standard_normal(4))
        assert apply(T, x * q).allclose(apply(T, x) * q, 1e-12)

    def test_real_scalars_commute(self, rng):
        T, x = rop(rng, 3), rvec(rng, 3)
        assert apply(T * 2.5, x).allclose(apply(T, x * 2.5), 1e-12)

    def test_adjoint_examples(self, rng):
        assert adjoint(QOperator([[I.to_array()]])).allclose(QOperator([[(-I).to_array()]]), 0)
        A = rng.standard_normal((4, 4))
        S = QOperator.from_real(A + A.T)
        assert adjoint(S).allclose(S, 0)
        for _ in range(20):
            S, T = rop(rng, 3), rop(rng, 3)
            assert operator_norm_fro(adjoint(compose(S, T)) - compose(adjoint(T), adjoint(S))) <= 1e-12 * S.fro() * T.fro()

    def test_adjoint_probe(self, rng):
        worst = 0.0
        for _ in range(200):
            n = int(rng.integers(1, 7))
            T, x, y = rop(rng, n), rvec(rng, n), rvec(rng, n)
            d = modulus(inner(apply(T, x), y) - inner(x, apply(adjoint(T), y)))
            worst = max(worst, d / (T.fro() * x.norm() * y.norm()))
        assert worst <= 1e-12

    def test_dimension_mismatch(self, rng):
        with pytest.raises(DomainError):
            compose(rop(rng, 2), rop(rng, 3))
        with pytest.raises(DomainError):
            apply(rop(rng, 2), rvec(rng, 3))


class TestNormality:
    def test_examples(self, rng):
        A = rop(rng, 4)
        assert is_normal(A + adjoint(A))
        assert not is_normal(QOperator.from_real([[0, 1], [0, 0]]))
        assert is_normal(QOperator.diag([Quaternion(*rng.standard_normal(4)) for _ in range(4)]))

    def test_norm(self):
        T = QOperator.diag([Quaternion(1, 1, 1, 1), Quaternion(0, 0, 3, 4)])
        assert operator_norm_fro(T) == pytest.approx(np.sqrt(4 + 25))
        assert sup_norm_lower_bound(T) <= 5.0 + 1e-12


class TestQOperator:
    def test_examples(self):
        Ti = QOperator([[I.to_array()]])
        assert q_operator(Ti, K).allclose(QOperator.zeros(1), 0)
        assert q_operator(Ti, ONE).allclose(QOperator([[(I * -2.0).to_array()]]), 0)

    def test_conjugation_bitwise_exact_inputs(self, rng):
        T = QOperator(rng.integers(-4, 5, size=(3, 3, 4)).astype(float) / 4)
        for q in [Quaternion(1, 2, 0, 0), Quaternion(0.5, -1, 0.25, 2), Quaternion(-3, 0, 0, 1.5)]:
            for s in [J, K, I, ONE + I, Quaternion(1, 1, 1, 1)]:
                p = conjugate_by(q, s)
                assert np.array_equal(q_operator(T, q).data, q_operator(T, p).data)

    def test_conjugation_rounded_inputs(self, rng):
        T = rop(rng, 4)
        q, s = Quaternion(*rng.standard_normal(4)), Quaternion(*rng.standard_normal(4))
        assert q_operator(T, q).allclose(q_operator(T, conjugate_by(q, s)), 1e-12 * T.fro()**2)


class TestGenerators:
    @pytest.mark.parametrize("n", [1, 2, 5, 16])
    def test_unitary(self, n):
        U = random_unitary(n, 7)
        assert operator_norm_fro(compose(adjoint(U), U) - QOperator.identity(n)) <= 1e-10
        assert operator_norm_fro(compose(U, adjoint(U)) - QOperator.identity(n)) <= 1e-10

    @pytest.mark.parametrize("profile", PROFILES)
    def test_normal(self, profile):
        T = random_normal(8, 3, profile)
        assert is_normal(T, 1e-10)
        if profile == "real":
            assert operator_norm_fro(T - adjoint(T)) <= 1e-10

    def test_determinism(self):
        a, b = random_normal(6, 42, "clustered"), random_normal(6, 42, "clustered")
        assert np.array_equal(a.data, b.data)
        assert np.array_equal(random_unitary(5, 1).data, random_unitary(5, 1).data)

    def test_errors(self):
        with pytest.raises(DomainError):
            random_normal(0, 1)
        with pytest.raises(DomainError):
            random_normal(3, 1, "weird")

    def test_gram_schmidt_dependent(self, rng):
        v = rng.standard_normal((3, 1, 4))
        cols = np.concatenate([v, v], axis=1)
        with pytest.raises(DomainError):
            gram_schmidt(cols)


class TestJson:
    def test_operator_round_trip(self, rng):
        T = rop(rng, 3)
        obj = json.loads(json.dumps(T.to_json()))
        assert obj["n"] == 3 and len(obj["entries"]) == 9 and len(obj["entries"][0]) == 4
        assert np.array_equal(QOperator.from_json(obj).data, T.data)

    def test_vector_round_trip(self, rng):
        x = rvec(rng, 4)
        assert np.array_equal(QVector.from_json(json.loads(json.dumps(x.to_json()))).data, x.data)

    def test_bad_size(self):
        with pytest.raises(DomainError):
            QOperator.from_json({"n": 2, "entries": [[0, 0, 0, 0]] * 3})
