import numpy as np
import pytest

from horst._src.solver.lowrank import (UNIT_ROUNDOFF, LowRankBlock,
                                       _decode, _encode, choose_format,
                                       compress_block, mp_partition)

pytestmark = pytest.mark.smoke


def _rank_k(m: int, n: int, k: int, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((m, k)) + 1j * rng.standard_normal((m, k))
    Y = rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
    return X @ Y.T


def _decaying(m: int, n: int, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    U, _ = np.linalg.qr(rng.standard_normal((m, m))
                        + 1j * rng.standard_normal((m, m)))
    V, _ = np.linalg.qr(rng.standard_normal((n, n))
                        + 1j * rng.standard_normal((n, n)))
    sigma = 10.0 ** -np.arange(min(m, n), dtype=float)
    return (U[:, :sigma.size] * sigma) @ V[:, :sigma.size].T


def test_exact_low_rank_block():
    B = _rank_k(32, 24, 3)
    block = compress_block(B, 1e-8)
    assert isinstance(block, LowRankBlock)
    assert block.rank == 3
    assert block.shape == (32, 24)
    np.testing.assert_allclose(block.to_dense(), B, atol=1e-10 * abs(B).max())


def test_truncation_error_follows_the_threshold():
    B = _decaying(40, 40)
    eps = 1e-5
    block = compress_block(B, eps)
    assert block.rank <= 8
    error = np.linalg.norm(block.to_dense() - B)
    assert error <= 10.0 * eps * np.linalg.norm(B)


def test_full_rank_block_stays_dense():
    rng = np.random.default_rng(1)
    assert compress_block(rng.standard_normal((16, 16)), 1e-6) is None


def test_zero_block_has_rank_zero():
    block = compress_block(np.zeros((5, 7), dtype=complex), 1e-4)
    assert block.rank == 0
    assert block.to_dense().shape == (5, 7)


@pytest.mark.parametrize("fmt", ['fp16', 'fp24', 'fp32'])
def test_storage_formats_round_within_their_unit_roundoff(fmt: str):
    rng = np.random.default_rng(2)
    values = rng.standard_normal((20, 3)) + 1j * rng.standard_normal((20, 3))
    decoded = _decode(_encode(values, fmt), fmt, np.complex128)
    scale = np.abs(values).max(axis=0)
    assert np.all(np.abs(decoded - values).max(axis=0)
                  <= 2.0 * UNIT_ROUNDOFF[fmt] * scale)


def test_choose_format_picks_the_cheapest_sufficient_format():
    assert choose_format(1.0, 1.0, 1e-3) == 'fp16'
    assert choose_format(1.0, 1.0, 1e-4) == 'fp24'
    assert choose_format(1.0, 1.0, 1e-6) == 'fp32'
    assert choose_format(1e-3, 1.0, 1e-6) == 'fp16'
    assert choose_format(1.0, 1.0, 1e-9, fallback='fp64') == 'fp64'


def test_mixed_precision_block():
    B = _decaying(30, 30)
    eps = 1e-6
    block = compress_block(B, eps)
    mixed = mp_partition(block.X, block.Y, eps, precision='double')
    assert mixed.rank == block.rank
    formats = [bucket.fmt for bucket in mixed.buckets]
    assert formats[0] in ('fp32', 'fp64')
    assert formats[-1] == 'fp16'
    assert mixed.nbytes < block.nbytes
    assert sum(mixed.bytes_per_format().values()) == mixed.nbytes
    error = np.linalg.norm(mixed.to_dense(np.complex128) - B)
    assert error <= 10.0 * eps * np.linalg.norm(B)


def test_empty_mixed_precision_block():
    mixed = mp_partition(np.zeros((4, 0)), np.zeros((6, 0)), 1e-4)
    assert mixed.rank == 0
    assert mixed.to_dense().shape == (4, 6)


if __name__ == "__main__":  # pragma: no cover
    pytest.main()
