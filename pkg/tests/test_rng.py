"""Reference vectors and stream semantics of the portable generator."""

import numpy as np
import pytest

from hyperwalk.rng import Rng, finalize, mix

# Published SplitMix64 reference outputs for seed 0.
REFERENCE_SEED0 = [
    0xE220A8397B1DCDAF,
    0x6E789E6AA1B965F4,
    0x06C45D188009454F,
    0xF88BB8A8724C81EC,
    0x1B39896A51A8749B,
]


def test_reference_sequence_seed0():
    rng = Rng(0)
    assert [rng.next_u64() for _ in range(5)] == REFERENCE_SEED0


def test_reference_sequence_is_frozen():
    """Any other seed produces a different stream (sanity on the freeze)."""
    rng = Rng(1)
    assert [rng.next_u64() for _ in range(5)] != REFERENCE_SEED0


def test_block_matches_scalar_stream():
    a = Rng(12345)
    b = Rng(12345)
    scalar = [a.next_u64() for _ in range(1000)]
    block = b.u64_block(1000)
    assert block.dtype == np.uint64
    assert scalar == block.tolist()
    # interleaved consumption stays aligned
    c = Rng(99)
    d = Rng(99)
    mixed = [c.next_u64() for _ in range(3)] + c.u64_block(7).tolist() + [c.next_u64()]
    assert mixed == d.u64_block(11).tolist()


def test_double_block_matches_scalar():
    a = Rng(7)
    b = Rng(7)
    scalar = [a.next_double() for _ in range(500)]
    block = b.double_block(500)
    assert scalar == block.tolist()
    assert all(0.0 <= x < 1.0 for x in scalar)


def test_randbelow_range_and_determinism():
    rng = Rng(42)
    values = [rng.randbelow(10) for _ in range(10000)]
    assert set(values) <= set(range(10))
    # all residues appear for a healthy generator
    assert set(values) == set(range(10))
    again = Rng(42)
    assert values == [again.randbelow(10) for _ in range(10000)]


def test_randbelow_rejects_nonpositive():
    with pytest.raises(ValueError):
        Rng(1).randbelow(0)


def test_mix_is_deterministic_and_spread():
    assert mix(123, 0) == mix(123, 0)
    children = {mix(123, k) for k in range(1000)}
    assert len(children) == 1000
    assert mix(123, 0) != mix(124, 0)
    with pytest.raises(ValueError):
        mix(1, -1)


def test_finalize_masks_to_64_bits():
    assert 0 <= finalize((1 << 70) + 12345) < (1 << 64)
