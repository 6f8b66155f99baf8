import random

import pytest
from hypothesis import given, settings, strategies as st

from descentkit import codec
from descentkit.complexes import CHAIN, COCHAIN, homology_dims
from descentkit.generate import dualize, random_chain_of_spaces, random_simplicial
from descentkit.linalg import Mat
from descentkit.simplicial import (COSIMPLICIAL, SimplicialMap, Truncated, TruncationError, audit,
                                   boundary_simplex, circle, disjoint_points, disjoint_union,
                                   dold_kan, identity_smap, inverse_order, k_functor, linearize,
                                   point, standard_simplex, surjections)
from descentkit.simple import simple

import oracles

FIXTURES = {
    "circle": (circle(), [1, 1, 0]),
    "boundary_simplex_2": (boundary_simplex(2), [1, 1, 0]),
    "boundary_simplex_3": (boundary_simplex(3), [1, 0, 1]),
    "point": (point(), [1, 0, 0]),
    "interval": (standard_simplex(1), [1, 0, 0]),
    "two_points": (disjoint_points(2), [2, 0, 0]),
}


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_fixture_homology_matches_oracle(name):
    K, want = FIXTURES[name]
    # oracle computed from nondegenerate cells only, independently of linearize
    assert [oracles.sset_homology(K, 2)[q] for q in range(3)] == want
    X = linearize(K, 4)
    assert audit(X) == []
    assert [homology_dims(k_functor(X), [q])[q] for q in range(3)] == want
    assert [homology_dims(simple(X, 3), [q])[q] for q in range(3)] == want


def test_disjoint_union_adds_homology():
    K = disjoint_union(circle(), boundary_simplex(3))
    assert [oracles.sset_homology(K, 2)[q] for q in range(3)] == [2, 1, 1]
    assert [homology_dims(simple(linearize(K, 4), 3), [q])[q] for q in range(3)] == [2, 1, 1]


def test_surjection_counts():
    # surjections [n] ->> [k] correspond to choosing k of the n gaps
    assert len(surjections(3, 1)) == 3
    assert len(surjections(4, 2)) == 6
    assert surjections(2, 2) == [(0, 1, 2)]


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 4))
def test_dold_kan_identities_and_homology(seed, N):
    parts, bd, C = random_chain_of_spaces(random.Random(seed), N, 2)
    X = dold_kan(parts, bd, N)
    assert audit(X) == []
    got = homology_dims(k_functor(X), range(N))
    assert got == {q: oracles.complex_homology(C).get(q, 0) for q in range(N)}


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([CHAIN, COCHAIN]))
def test_generated_objects_satisfy_identities(seed, direction):
    X = random_simplicial(random.Random(seed), 3, direction)
    assert audit(X) == []
    assert audit(inverse_order(X)) == []
    assert identity_smap(X).is_natural()
    back = codec.decode(codec.encode(X))
    assert back.faces.keys() == X.faces.keys()
    assert all(back.faces[k].comps == X.faces[k].comps for k in X.faces)


def test_dualize_gives_cosimplicial():
    X = dualize(linearize(circle(), 3))
    assert X.kind == COSIMPLICIAL and audit(X) == []


def test_broken_identity_detected():
    X = linearize(circle(), 2)
    faces = dict(X.faces)
    f = faces[(2, 0)]
    faces[(2, 0)] = type(f)(f.source, f.target, {0: f.at(0).scale(2)})
    Y = Truncated(X.kind, X.N, X.objects, faces, X.degens)
    assert audit(Y) != []


def test_truncation_bounds():
    X = linearize(point(), 2)
    with pytest.raises(TruncationError):
        X.truncate(3)
    assert X.truncate(1).N == 1


def test_map_naturality_failure():
    X = linearize(standard_simplex(1), 2)
    comps = [c for c in identity_smap(X).comps]
    comps[1] = type(comps[1])(comps[1].source, comps[1].target,
                              {0: Mat.from_entries(3, 3, {(0, 0): 1})})
    assert not SimplicialMap(X, X, comps).is_natural()


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10**6))
def test_fibres(seed):
    from descentkit.simplicial import fibre, zero_object, zero_smap
    from descentkit.simple import cosimple
    Y = random_simplicial(random.Random(seed), 3, COCHAIN, hi=1)
    assert not any(homology_dims(cosimple(fibre(identity_smap(Y)), 3), range(3)).values())
    # the fibre of 0 -> Y is the loop object: cohomology of sY moved up by one
    F = fibre(zero_smap(zero_object(3, COSIMPLICIAL, COCHAIN), Y))
    assert audit(F) == []
    hF, hY = homology_dims(cosimple(F, 3), range(3)), homology_dims(cosimple(Y, 3), range(3))
    assert hF[0] == 0 and all(hF[q] == hY[q - 1] for q in (1, 2))
