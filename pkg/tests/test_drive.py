import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rmdspin.drive import (
    DriveGenerator,
    DriveSpec,
    HamLabel,
    ResourceLimitError,
    build_blocks,
    labels_to_string,
    thue_morse_label,
    thue_morse_labels,
)

Z, X = HamLabel.Z, HamLabel.X


def test_block_examples():
    b0 = build_blocks(0)
    assert list(b0.plus_block) == [Z] and list(b0.minus_block) == [X]
    b1 = build_blocks(1)
    assert list(b1.plus_block) == [Z, X] and list(b1.minus_block) == [X, Z]
    b2 = build_blocks(2)
    assert list(b2.plus_block) == [Z, X, X, Z]
    assert list(b2.minus_block) == [X, Z, Z, X]


def test_block_order_limit():
    with pytest.raises(ResourceLimitError):
        build_blocks(31)
    with pytest.raises(ValueError):
        build_blocks(-1)


def _parity_oracle(k):
    parity = 0
    while k:
        parity ^= k & 1
        k >>= 1
    return parity


def test_thue_morse_examples():
    assert thue_morse_label(0) == Z
    assert labels_to_string(thue_morse_label(k) for k in range(8)) == "ZXXZXZZX"
    assert [_parity_oracle(k) for k in range(8)] == [0, 1, 1, 0, 1, 0, 0, 1]
    for m in range(40):
        assert thue_morse_label(2**m) == X


def test_thue_morse_vectorized_matches_scalar():
    start = 2**40 - 300
    got = thue_morse_labels(start, 600)
    assert list(got) == [_parity_oracle(k) for k in range(start, start + 600)]


@pytest.mark.parametrize("n", range(13))
def test_block_properties(n):
    b = build_blocks(n)
    assert b.length == 2**n
    np.testing.assert_array_equal(b.plus_block, thue_morse_labels(0, 2**n))
    np.testing.assert_array_equal(b.minus_block, 1 - b.plus_block)
    # exact integer multipole cancellation with s(Z)=+1, s(X)=-1
    sp = [1 - 2 * int(v) for v in b.plus_block]
    sm = [1 - 2 * int(v) for v in b.minus_block]
    for m in range(n):
        assert sum(k**m * (a - c) for k, (a, c) in enumerate(zip(sp, sm))) == 0


def test_floquet_and_dipolar_starts():
    gen = DriveGenerator.from_name("floquet")
    assert [gen.next_label() for _ in range(4)] == [Z, X, Z, X]
    for seed in range(20):
        pair = DriveGenerator.from_name("rmd1", seed).take(2)
        assert list(pair) in ([Z, X], [X, Z])


def test_rmd0_is_fair():
    labels = DriveGenerator.from_name("rmd0", 123).take(100_000)
    assert abs(labels.mean() - 0.5) < 0.01


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_streaming_windows_are_blocks(n):
    b = build_blocks(n)
    labels = DriveGenerator.from_name(f"rmd{n}", 7).take(2**n * 100).reshape(100, 2**n)
    kinds = set()
    for row in labels:
        if np.array_equal(row, b.plus_block):
            kinds.add("+")
        elif np.array_equal(row, b.minus_block):
            kinds.add("-")
        else:
            pytest.fail(f"window {row} is not a block")
    assert kinds == {"+", "-"}


@settings(max_examples=30, deadline=None)
@given(
    name=st.sampled_from(["rmd0", "rmd1", "rmd3", "thue-morse", "floquet"]),
    seed=st.integers(0, 1000),
    chunks=st.lists(st.integers(0, 3000), min_size=1, max_size=8),
)
def test_pull_pattern_independence(name, seed, chunks):
    total = sum(chunks)
    whole = DriveGenerator.from_name(name, seed).take(total)
    gen = DriveGenerator.from_name(name, seed)
    parts = [gen.take(c) for c in chunks]
    np.testing.assert_array_equal(np.concatenate(parts) if parts else np.zeros(0), whole)
    assert gen.cursor == total


def test_clone_branches_at_cursor():
    gen = DriveGenerator.from_name("rmd2", 5)
    gen.take(1001)
    twin = gen.clone()
    np.testing.assert_array_equal(gen.take(5000), twin.take(5000))


def test_spec_parsing():
    assert DriveSpec.parse("rmd4").order == 4
    assert DriveSpec.parse("TM").kind == "thue-morse"
    assert DriveSpec.parse("random").name == "rmd0"
    assert DriveSpec.parse("rmd2").block_length == 4
    with pytest.raises(ValueError):
        DriveSpec.parse("fibonacci")
