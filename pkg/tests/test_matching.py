"""Blossom matching vs exhaustive enumeration on small graphs."""

import itertools

import numpy as np
import pytest

from patchsim.matching import max_weight_matching, min_weight_perfect_matching


def all_matchings(n, edges):
    """Yield every matching as a list of edge indices."""

    def rec(i, used):
        yield []
        for j in range(i, len(edges)):
            a, b, _ = edges[j]
            if a in used or b in used:
                continue
            for rest in rec(j + 1, used | {a, b}):
                yield [j] + rest

    seen = set()
    for m in rec(0, frozenset()):
        key = frozenset(m)
        if key not in seen:
            seen.add(key)
            yield m


def brute_best(n, edges, maxcardinality):
    best = None
    for m in all_matchings(n, edges):
        w = sum(edges[j][2] for j in m)
        key = (len(m), w) if maxcardinality else (w,)
        if best is None or key > best:
            best = key
    return best


def check_valid(n, edges, mate):
    pairs = set()
    for v, w in enumerate(mate):
        if w >= 0:
            assert mate[w] == v
            pairs.add(frozenset((v, w)))
    edge_set = {frozenset((a, b)) for a, b, _ in edges}
    assert pairs <= edge_set
    return pairs


def random_graph(rng, n_max=8, ints=True):
    n = int(rng.integers(2, n_max + 1))
    possible = list(itertools.combinations(range(n), 2))
    k = int(rng.integers(0, len(possible) + 1))
    idx = rng.choice(len(possible), size=k, replace=False)
    edges = []
    for i in idx:
        a, b = possible[i]
        w = (
            int(rng.integers(-5, 20))
            if ints
            else float(np.round(rng.uniform(-5, 20), 3))
        )
        edges.append((a, b, w))
    return n, edges


@pytest.mark.parametrize("ints,maxcard", [(True, False), (True, True),
                                          (False, False), (False, True)])
def test_matches_brute_force(ints, maxcard):
    rng = np.random.default_rng(100 + ints + 2 * maxcard)
    for _ in range(120):
        n, edges = random_graph(rng, ints=ints)
        mate = max_weight_matching(edges, maxcardinality=maxcard)
        mate = mate + [-1] * (n - len(mate))
        pairs = check_valid(n, edges, mate)
        wmap = {frozenset((a, b)): w for a, b, w in edges}
        got_w = sum(wmap[p] for p in pairs)
        want = brute_best(n, edges, maxcard)
        if want is None:
            assert not pairs
            continue
        if maxcard:
            assert (len(pairs), got_w) == pytest.approx(want)
        else:
            assert got_w == pytest.approx(want[0])


def test_rejects_bad_edges():
    with pytest.raises(ValueError):
        max_weight_matching([(0, 0, 1)])
    with pytest.raises(ValueError):
        max_weight_matching([(0, 1, 1), (1, 0, 2)])


def test_empty_graph():
    assert max_weight_matching([]) == []


def brute_min_perfect(n, edges):
    wmap = {frozenset((a, b)): w for a, b, w in edges}
    best = None
    nodes = list(range(n))

    def rec(free):
        if not free:
            return 0.0
        a = free[0]
        rest = free[1:]
        out = None
        for i, b in enumerate(rest):
            key = frozenset((a, b))
            if key not in wmap:
                continue
            sub = rec(rest[:i] + rest[i + 1 :])
            if sub is None:
                continue
            w = wmap[key] + sub
            if out is None or w < out:
                out = w
        return out

    return rec(nodes)


def test_min_weight_perfect_matches_brute_force():
    rng = np.random.default_rng(200)
    done = 0
    while done < 80:
        n = int(rng.integers(1, 5)) * 2
        edges = [
            (a, b, float(np.round(rng.uniform(0.1, 10), 3)))
            for a, b in itertools.combinations(range(n), 2)
            if rng.random() < 0.8
        ]
        want = brute_min_perfect(n, edges)
        if want is None:
            with pytest.raises(ValueError):
                min_weight_perfect_matching(n, edges)
            continue
        pairs, total = min_weight_perfect_matching(n, edges)
        assert len(pairs) == n // 2
        assert {v for p in pairs for v in p} == set(range(n))
        assert total == pytest.approx(want)
        done += 1


def test_min_weight_perfect_requires_even_cover():
    with pytest.raises(ValueError):
        min_weight_perfect_matching(2, [])
    with pytest.raises(ValueError):
        min_weight_perfect_matching(4, [(0, 1, 1.0)])


def test_min_weight_perfect_zero_nodes():
    pairs, total = min_weight_perfect_matching(0, [])
    assert pairs == [] and total == 0.0
