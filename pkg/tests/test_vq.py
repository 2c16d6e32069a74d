import numpy as np
import pytest

from lvlm import Codebook, InputError, merge_cost, pnn_quantize

from oracles import greedy_pnn, total_distortion


def test_merge_cost_singletons():
    assert merge_cost(1, [0.0, 0.0], 1, [3.0, 4.0]) == pytest.approx(25.0 / 2)


def test_merge_cost_size_two():
    assert merge_cost(2, [0.0], 2, [1.0]) == pytest.approx(1.0)


def test_merge_cost_identical_centroids():
    assert merge_cost(5, [1.0, 2.0], 3, [1.0, 2.0]) == 0.0


def test_merge_cost_rejects_empty_cluster():
    with pytest.raises(InputError):
        merge_cost(0, [0.0], 1, [1.0])


def test_pnn_zero_cost_merge_first():
    cb, asg = pnn_quantize(np.array([[0.0, 0.0], [0.0, 0.0], [1.0, 1.0]]), 2)
    assert np.array_equal(cb.centroids, [[0.0, 0.0], [1.0, 1.0]])
    assert np.array_equal(cb.sizes, [2, 1])
    assert list(asg) == [0, 0, 1]


def test_pnn_tight_pairs():
    pts = np.array([[0.0, 0.0], [5.0, 5.0], [0.1, 0.0], [5.1, 5.0]])
    cb, asg = pnn_quantize(pts, 2)
    assert np.allclose(sorted(cb.centroids.tolist()), [[0.05, 0.0], [5.05, 5.0]])
    assert asg[0] == asg[2] and asg[1] == asg[3] and asg[0] != asg[1]


def test_pnn_rejects_too_few_points():
    with pytest.raises(InputError):
        pnn_quantize(np.zeros((2, 3)), 3)


def test_pnn_matches_exact_oracle_distortion():
    rng = np.random.default_rng(42)
    pts = rng.random((32, 2))
    _, asg = pnn_quantize(pts, 4)
    _, _, oracle_asg, _ = greedy_pnn(pts, 4)
    assert total_distortion(pts, asg) <= 1.000000001 * total_distortion(pts, oracle_asg)


@pytest.mark.parametrize("seed", range(8))
def test_pnn_merge_sequence_matches_oracle_small(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(4, 13))
    pts = rng.random((n, int(rng.integers(1, 4))))
    target = int(rng.integers(1, n))
    _, asg, history = pnn_quantize(pts, target, return_history=True)
    _, _, oracle_asg, oracle_hist = greedy_pnn(pts, target)
    assert [(a, b) for a, b, _ in history] == [(a, b) for a, b, _ in oracle_hist]
    assert np.array_equal(asg, oracle_asg)


def test_pnn_duplicate_points_match_oracle():
    pts = np.array([[0.0], [1.0], [0.0], [1.0], [0.5], [0.0]])
    _, asg, history = pnn_quantize(pts, 2, return_history=True)
    _, _, oracle_asg, oracle_hist = greedy_pnn(pts, 2)
    assert [(a, b) for a, b, _ in history] == [(a, b) for a, b, _ in oracle_hist]
    assert np.array_equal(asg, oracle_asg)


@pytest.mark.parametrize("seed", range(5))
def test_distortion_increases_by_selected_cost(seed):
    rng = np.random.default_rng(100 + seed)
    pts = rng.random((24, 3))
    cb, asg, history = pnn_quantize(pts, 3, return_history=True)
    # replay the merge tree: distortion after all merges equals the cost sum
    final = total_distortion(pts, asg)
    assert final == pytest.approx(sum(c for _, _, c in history), rel=1e-9)
    # stepwise: prefix sums are each reachable distortions of the partial merge
    parent = np.arange(len(pts))

    def find(i):
        while parent[i] != i:
            i = parent[i]
        return i

    running = 0.0
    for a, b, c in history:
        parent[find(b)] = find(a)
        running += c
        labels = np.array([find(i) for i in range(len(pts))])
        assert total_distortion(pts, labels) == pytest.approx(running, rel=1e-9, abs=1e-12)


def test_merged_centroid_is_weighted_member_mean():
    rng = np.random.default_rng(3)
    pts = rng.random((30, 2))
    cb, asg = pnn_quantize(pts, 5)
    for j in range(cb.N):
        members = pts[asg == j]
        assert len(members) == cb.sizes[j]
        assert np.allclose(cb.centroids[j], members.mean(axis=0), atol=1e-12)


def test_all_identical_points_split_arbitrarily():
    pts = np.zeros((6, 2))
    cb, asg = pnn_quantize(pts, 3)
    assert cb.N == 3
    assert np.array_equal(np.unique(asg), [0, 1, 2])
    assert np.allclose(cb.centroids, 0.0)


def test_fast_path_close_to_exact():
    # force the k-d tree path with a small exact_threshold
    rng = np.random.default_rng(11)
    pts = rng.random((400, 2))
    _, asg_fast = pnn_quantize(pts, 8, exact_threshold=16)
    _, asg_exact = pnn_quantize(pts, 8, exact_threshold=10**9)
    assert total_distortion(pts, asg_fast) <= 1.05 * total_distortion(pts, asg_exact)


def test_codebook_invariants():
    with pytest.raises(InputError):
        Codebook(np.zeros((2, 2)), np.array([1.0, 0.0]))
