import itertools
import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from cantorhm.colorings import PairColoring, ars_coloring, c_max, c_min
from cantorhm.errors import ResourceError, UsageError
from cantorhm.homog import (
    BOTH, CoverCertificate, HomSet, check_homogeneous, dumps_certificate, find_cmin_embedding,
    hm_exact, hom_cover_lower_bound, maximal_cliques, maximal_hom_trees, min_set_cover,
    verify_cmin_embedding,
)
from cantorhm.seqspace import TruncatedSpace, enumerate_points, parity


def p(s):
    return tuple(int(ch) for ch in s)


def random_coloring(n, bits):
    pairs = list(itertools.combinations(range(n), 2))
    table = {pq: bits >> k & 1 for k, pq in enumerate(pairs)}
    return PairColoring.from_function(range(n), lambda x, y: table[(min(x, y), max(x, y))])


def brute_hm(c):
    """Smallest k such that some k homogeneous sets cover the carrier."""
    n = c.n
    homog = [m for m in range(1, 1 << n)
             if check_homogeneous(c, [c.carrier[i] for i in range(n) if m >> i & 1]) is not None]
    full = (1 << n) - 1
    for k in range(1, n + 1):
        for combo in itertools.combinations(homog, k):
            if _or(combo) == full:
                return k
    return 0


def _or(ms):
    out = 0
    for m in ms:
        out |= m
    return out


def test_check_homogeneous_examples():
    c = c_min(3)
    assert check_homogeneous(c, [p("000"), p("001")]) == 0
    assert check_homogeneous(c_min(2), [p("00"), p("01"), p("10")]) is None
    assert check_homogeneous(c, [p("101")]) == BOTH
    assert check_homogeneous(c, []) == BOTH
    with pytest.raises(UsageError):
        check_homogeneous(c, [p("000"), (0, 0, 2)])


def test_maximal_cliques_oracle():
    rng = random.Random(5)
    for _ in range(30):
        n = rng.randrange(1, 9)
        c = random_coloring(n, rng.getrandbits(n * (n - 1) // 2))
        got = sorted(maximal_cliques(c.rows))
        cliques = [m for m in range(1, 1 << n)
                   if all(c.rows[i] >> j & 1 for i in range(n) for j in range(n)
                          if i != j and m >> i & 1 and m >> j & 1)]
        maximal = sorted(m for m in cliques if not any(o != m and o & m == m for o in cliques))
        assert got == maximal


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 7), st.lists(st.integers(1, 127), min_size=1, max_size=9))
def test_min_set_cover_matches_brute_force(n, sets):
    universe = (1 << n) - 1
    sets = [s & universe for s in sets] + [1 << i for i in range(n)]
    sets = [s for s in sets if s]
    chosen = min_set_cover(universe, sets)
    assert _or(sets[j] for j in chosen) == universe
    best = next(k for k in range(1, len(sets) + 1)
                if any(_or(cb) == universe for cb in itertools.combinations(sets, k)))
    assert len(chosen) == best


def test_hm_examples():
    k, cert = hm_exact(c_min(2))
    assert k == 2 and cert.verified
    assert hm_exact(c_min(4))[0] == 4
    assert hm_exact(ars_coloring(3))[0] == 3
    assert hom_cover_lower_bound(c_min(4)) == 4
    assert hom_cover_lower_bound(ars_coloring(3)) == 3
    const = PairColoring.from_function(range(5), lambda x, y: 1)
    assert hom_cover_lower_bound(const) == 1 == hm_exact(const)[0]
    with pytest.raises(ResourceError):
        hm_exact(c_min(4), cap=10)


def test_hm_matches_brute_force_on_small_colorings():
    rng = random.Random(11)
    for _ in range(25):
        n = rng.randrange(1, 8)
        c = random_coloring(n, rng.getrandbits(n * (n - 1) // 2))
        k, cert = hm_exact(c)
        assert cert.verify()
        assert k == brute_hm(c)
        assert hom_cover_lower_bound(c) <= k


def test_hm_invariant_under_swap_and_relabeling():
    rng = random.Random(12)
    for c in (c_min(3), c_max(4), ars_coloring(3)):
        k = hm_exact(c)[0]
        perm = list(c.carrier)
        rng.shuffle(perm)
        relabeled = PairColoring.from_function(perm, lambda x, y: c.color(x, y))
        assert hm_exact(relabeled)[0] == k
        assert hm_exact(c.swapped())[0] == k


def test_certificate_json_roundtrip():
    c = c_max(4)
    k, cert = hm_exact(c)
    doc = json.loads(dumps_certificate(cert.to_json("cmax:4")))
    assert doc["kind"] == "hm" and doc["k"] == k
    again = CoverCertificate.from_json(doc, c)
    assert again.verify()
    doc["sets"][0]["color"] = 1 - doc["sets"][0]["color"]
    bad = CoverCertificate.from_json(doc, c)
    if len(doc["sets"][0]["points"]) > 1:
        assert not bad.verify()
    doc["sets"].pop()
    doc["k"] -= 1
    assert not CoverCertificate.from_json(doc, c).verify()


def test_homset_verify():
    c = c_min(2)
    assert HomSet((p("00"), p("01")), 1).verify(c)
    assert not HomSet((p("00"), p("01")), 0).verify(c)
    assert HomSet((p("11"),), 0).verify(c)


def test_maximal_hom_trees_examples():
    t0 = list(maximal_hom_trees(2, 0))
    assert sorted(sorted(t.branches()) for t in t0) == [
        [p("00"), p("10")], [p("00"), p("11")], [p("01"), p("10")], [p("01"), p("11")]]
    t1 = list(maximal_hom_trees(2, 1))
    assert sorted(sorted(t.branches()) for t in t1) == [[p("00"), p("01")], [p("10"), p("11")]]
    with pytest.raises(UsageError):
        list(maximal_hom_trees(3, 0))
    with pytest.raises(ResourceError):
        list(maximal_hom_trees(8, 0, cap=1000))


@pytest.mark.parametrize("depth", [2, 4, 6])
def test_maximal_hom_trees_structure(depth):
    c = c_min(depth)
    pts = set(enumerate_points(TruncatedSpace.binary(depth)))
    expected = {2: (4, 2), 4: (64, 8), 6: (16384, 128)}[depth]
    for color in (0, 1):
        trees = list(maximal_hom_trees(depth, color))
        assert len(trees) == expected[color]
        assert len(set(trees)) == len(trees)
        covered = set()
        for t in trees:
            br = t.branches()
            assert len(br) == 2 ** (depth // 2)
            covered.update(br)
            if depth <= 4:
                assert check_homogeneous(c, br) == color
                # maximal: no point can be added
                assert all(check_homogeneous(c, br + [x]) is None for x in pts - set(br))
        assert covered == pts


def test_find_cmin_embedding_examples():
    for k in range(1, 4):
        emb = find_cmin_embedding(c_min(k), k)
        assert emb is not None and verify_cmin_embedding(c_min(k), emb)
    const = PairColoring.from_function(enumerate_points(TruncatedSpace.binary(3)), lambda x, y: 0)
    assert find_cmin_embedding(const, 2) is None
    emb = find_cmin_embedding(c_max(4), 1)
    assert emb is not None and c_max(4).color(emb[(0,)], emb[(1,)]) == 0
    emb = find_cmin_embedding(c_max(5), 2)
    assert emb is not None and verify_cmin_embedding(c_max(5), emb)


def test_cmin_embedding_maps_homogeneous_sets_to_homogeneous_sets():
    c = c_max(5)
    emb = find_cmin_embedding(c, 2)
    src = c_min(2)
    for r in range(2, 5):
        for A in itertools.combinations(src.carrier, r):
            h = check_homogeneous(src, A)
            if h is not None:
                assert check_homogeneous(c, [emb[a] for a in A]) in (h, BOTH)
    for x, y in itertools.combinations(emb, 2):
        assert c.color(emb[x], emb[y]) == parity(x, y)
