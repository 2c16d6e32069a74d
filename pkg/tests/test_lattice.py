import hypothesis.strategies as st
import numpy as np
import pytest
from hypothesis import given, settings

from lvlm import InputError, LatticeShape, SymbolLattice, neighbors, sweep_signatures, window_bounds

from oracles import naive_signatures


def test_neighbors_interior_2d():
    s = LatticeShape((10, 10))
    assert sorted(neighbors(s, (5, 5))) == [(4, 5), (5, 4), (5, 6), (6, 5)]


def test_neighbors_corner():
    s = LatticeShape((10, 10))
    assert sorted(neighbors(s, (0, 0))) == [(0, 1), (1, 0)]


def test_neighbors_1d():
    assert neighbors(LatticeShape((3,)), (1,)) == [(0,), (2,)]


def test_neighbors_out_of_range():
    with pytest.raises(InputError):
        neighbors(LatticeShape((3, 3)), (3, 0))


def test_window_bounds_interior():
    lo, hi, cells = window_bounds(LatticeShape((10, 10)), (5, 5), 1)
    assert (lo, hi, cells) == ((4, 4), (6, 6), 9)


def test_window_bounds_clamped_corner():
    lo, hi, cells = window_bounds(LatticeShape((10, 10)), (0, 0), 2)
    assert (lo, hi, cells) == ((0, 0), (2, 2), 9)


def test_window_bounds_zero_radius():
    lo, hi, cells = window_bounds(LatticeShape((7, 3)), (4, 1), 0)
    assert (lo, hi, cells) == ((4, 1), (4, 1), 1)


def test_sweep_discrete_1d_examples():
    lat = SymbolLattice.discrete(np.array([0, 0, 0, 1, 1, 1]), M=2)
    f = sweep_signatures(lat, 1)
    assert np.array_equal(f.signatures[1], [1.0, 0.0])
    assert np.allclose(f.signatures[3], [1 / 3, 2 / 3], atol=0, rtol=0)


def test_sweep_matches_naive_recount_2d():
    rng = np.random.default_rng(7)
    vals = rng.integers(0, 4, size=(16, 16))
    lat = SymbolLattice.discrete(vals, M=4)
    got = sweep_signatures(lat, 2).signatures
    want = naive_signatures(vals, 4, 2, "discrete")
    assert np.array_equal(got, want)


@pytest.mark.parametrize("lengths,w", [((5,), 0), ((5,), 2), ((4, 6), 1), ((3, 3, 3), 1), ((2, 5, 3), 3)])
def test_sweep_real_matches_naive(lengths, w):
    rng = np.random.default_rng(hash((lengths, w)) % 2**32)
    vals = rng.normal(size=lengths + (3,))
    got = sweep_signatures(SymbolLattice.real(vals), w).signatures
    want = naive_signatures(vals, 3, w, "real")
    assert np.abs(got - want).max() <= 1e-12


shapes = st.lists(st.integers(1, 9), min_size=1, max_size=3).map(tuple)


@given(lengths=shapes, w=st.integers(0, 3), m=st.integers(1, 5), seed=st.integers(0, 10**6))
@settings(max_examples=100, deadline=None)
def test_discrete_signatures_on_simplex(lengths, w, m, seed):
    rng = np.random.default_rng(seed)
    lat = SymbolLattice.discrete(rng.integers(0, m, size=lengths), M=m)
    sigs = sweep_signatures(lat, w).signatures
    assert sigs.min() >= 0
    assert np.abs(sigs.sum(axis=-1) - 1.0).max() <= 1e-9


@given(lengths=shapes, seed=st.integers(0, 10**6))
@settings(max_examples=100, deadline=None)
def test_neighbor_symmetry(lengths, seed):
    shape = LatticeShape(lengths)
    rng = np.random.default_rng(seed)
    t = tuple(int(rng.integers(0, n)) for n in lengths)
    for r in neighbors(shape, t):
        assert t in neighbors(shape, r)


@given(lengths=st.lists(st.integers(3, 9), min_size=1, max_size=3).map(tuple), w=st.integers(0, 2))
@settings(max_examples=100, deadline=None)
def test_interior_window_cell_count(lengths, w):
    shape = LatticeShape(lengths)
    t = tuple(n // 2 for n in lengths)
    if all(w <= t_i and t_i + w < n for t_i, n in zip(t, lengths)):
        _, _, cells = window_bounds(shape, t, w)
        assert cells == (2 * w + 1) ** shape.d


def test_symbol_lattice_rejects_bad_indices():
    with pytest.raises(InputError):
        SymbolLattice.discrete(np.array([0, 3]), M=2)
