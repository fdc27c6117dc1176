"""Bit-mask linear algebra over F2."""

from __future__ import annotations

from hypothesis import given
from hypothesis import strategies as st

from uchain.gf2 import QuotientBasis, Span, kernel_combos, rank, solve

vectors = st.lists(st.integers(min_value=0, max_value=(1 << 10) - 1),
                   min_size=0, max_size=12)


def _combo(vecs: list[int], mask: int) -> int:
    acc = 0
    for i, v in enumerate(vecs):
        if mask >> i & 1:
            acc ^= v
    return acc


def test_rank_of_standard_basis():
    assert rank([0b001, 0b010, 0b100]) == 3


def test_rank_ignores_dependent_rows():
    assert rank([0b011, 0b101, 0b110]) == 2
    assert rank([0, 0]) == 0


def test_span_membership():
    span = Span()
    assert span.add(0b011)
    assert span.add(0b101)
    assert not span.add(0b110)  # the sum of the first two
    assert span.contains(0b110)
    assert not span.contains(0b001)
    assert span.dim == 2


def test_span_express_returns_a_witness_combination():
    span = Span()
    span.add(0b011)
    span.add(0b101)
    assert span.express(0b110) is not None
    assert span.express(0b001) is None


def test_solve_finds_a_preimage():
    vecs = [0b011, 0b110]
    mask = solve(vecs, 0b101)
    assert mask is not None
    assert _combo(vecs, mask) == 0b101


def test_solve_detects_unsolvable_targets():
    assert solve([0b011, 0b110], 0b001) is None
    assert solve([], 0b1) is None
    assert solve([], 0) == 0


def test_kernel_of_dependent_family():
    vecs = [0b011, 0b101, 0b110]
    combos = kernel_combos(vecs)
    assert len(combos) == 1
    assert _combo(vecs, combos[0]) == 0


@given(vecs=vectors, target_mask=st.integers(min_value=0, max_value=(1 << 12) - 1))
def test_solve_inverts_any_reachable_target(vecs: list[int], target_mask: int):
    target = _combo(vecs, target_mask)
    mask = solve(vecs, target)
    assert mask is not None
    assert _combo(vecs, mask) == target


@given(vecs=vectors)
def test_kernel_combos_all_vanish_and_count_the_nullity(vecs: list[int]):
    combos = kernel_combos(vecs)
    assert all(_combo(vecs, m) == 0 for m in combos)
    assert all(m for m in combos)
    assert len(combos) == len(vecs) - rank(vecs)
    assert rank(combos) == len(combos)


@given(vecs=vectors)
def test_rank_is_monotone_under_extension(vecs: list[int]):
    r = rank(vecs)
    assert 0 <= r <= len(vecs)
    assert rank(vecs + [0]) == r
    assert r <= rank(vecs + [1 << 11]) <= r + 1


def test_quotient_basis_dimensions():
    cycles = [0b001, 0b010, 0b100]
    boundaries = [0b110]
    q = QuotientBasis(cycles, boundaries)
    assert q.dim == 2
    assert q.coords(0b110) == 0  # a boundary is the zero class
    assert q.coords(0b1000) is None  # not a cycle at all


def test_quotient_coords_are_linear():
    q = QuotientBasis([0b011, 0b101, 0b110], [0b110])
    a, b = q.coords(0b011), q.coords(0b101)
    assert a is not None and b is not None
    assert q.coords(0b011 ^ 0b101) == a ^ b
