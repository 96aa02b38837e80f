import numpy as np
import pytest
from hypothesis import strategies as st

from quatspec.quaternion import Quaternion

finite = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False, allow_infinity=False)
quaternions = st.builds(Quaternion, finite, finite, finite, finite)
nonzero_quaternions = quaternions.filter(lambda q: abs(q) > 1e-3)


def left_matrix(q):
    """Real 4x4 matrix of p -> q p; an independent Hamilton product oracle."""
    a, b, c, d = q
    return np.array(
        [
            [a, -b, -c, -d],
            [b, a, -d, c],
            [c, d, a, -b],
            [d, -c, b, a],
        ]
    )


def oracle_mul(p, q):
    return Quaternion.from_array(left_matrix(p) @ np.array(list(q)))


def complex_pair(q):
    """2x2 complex matrix of left multiplication by q on H = C + jC (standard frame)."""
    a, b, c, d = q
    alpha, beta = complex(a, b), complex(c, -d)
    return np.array([[alpha, -np.conj(beta)], [beta, np.conj(alpha)]])


def oracle_chi(data):
    """Block matrix of a quaternionic matrix in the basis e_1..e_n, e_1 j..e_n j."""
    n = data.shape[0]
    M = np.zeros((2 * n, 2 * n), dtype=complex)
    for r in range(n):
        for s in range(n):
            B = complex_pair(data[r, s])
            M[r, s], M[r, n + s] = B[0]
            M[n + r, s], M[n + r, n + s] = B[1]
    return M


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
