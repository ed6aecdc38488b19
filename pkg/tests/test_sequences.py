import numpy as np
import pytest

from indmom import SeqVector, apply_jacobi, moment

# Exact moments of the power-law preset, computed by integer banded powers.
MOMENTS = [1.0, 0.0, 1.0, 0.0, 17.0, 0.0, 1585.0, 0.0, 485729.0]


class TestSeqVector:
    def test_norm(self):
        v = SeqVector.from_entries([3.0, 4.0j])
        assert v.norm() == pytest.approx(5.0)

    def test_basis(self):
        e2 = SeqVector.basis(2)
        assert e2.M == 2
        assert e2.entries[2] == 1.0

    def test_add_and_scale(self):
        v = 2.0 * SeqVector.from_entries([1.0, 1.0]) + SeqVector.basis(3)
        assert np.allclose(v.entries, [2.0, 2.0, 0.0, 1.0])


class TestApplyJacobi:
    def test_first_column(self, src):
        out = apply_jacobi(src, SeqVector.basis(0))
        assert np.allclose(out.entries, [0.0, 1.0])

    def test_third_column(self, src):
        out = apply_jacobi(src, SeqVector.basis(2))
        assert np.allclose(out.entries, [0.0, 4.0, 0.0, 9.0])

    def test_matches_dense_product(self, src):
        rng = np.random.default_rng(11)
        c = SeqVector(rng.normal(size=4) + 1j * rng.normal(size=4))
        dense = np.zeros((6, 6), dtype=complex)
        for n in range(6):
            dense[n, n] = src.coeffs(n)[1]
        for n in range(5):
            a = src.coeffs(n)[0]
            dense[n + 1, n] = a
            dense[n, n + 1] = a
        out = apply_jacobi(src, c)
        expected = dense @ c.padded(6)
        assert np.allclose(out.entries, expected[: c.M + 2], atol=1e-14)

    def test_output_range(self, src):
        assert apply_jacobi(src, SeqVector.basis(5)).M == 6


@pytest.mark.parametrize("n,expected", list(enumerate(MOMENTS)))
def test_moments(src, n, expected):
    assert moment(src, n) == expected


def test_moment_rejects_negative(src):
    with pytest.raises(ValueError):
        moment(src, -1)
