import random

import pytest
from hypothesis import given, settings, strategies as st

from descentkit import codec
from descentkit.complexes import (CHAIN, COCHAIN, ChainMap, Complex, ComplexError, SchemaError,
                                  cone_contraction, direct_sum, disk, find_homotopy, homology_dims,
                                  identity_map, is_acyclic, is_quasi_iso, mapping_cone, sphere,
                                  tensor, tensor_maps, verify_homotopy, zero_map)
from descentkit.generate import acyclic_complex, random_complex, random_labeled_map
from descentkit.linalg import DimensionError, Mat

import oracles

seeds = st.integers(0, 10**6)
directions = st.sampled_from([CHAIN, COCHAIN])


@settings(max_examples=50, deadline=None)
@given(seeds, directions)
def test_homology_matches_oracle_and_label(seed, direction):
    C, h = random_complex(random.Random(seed), direction, 0, 3, 3)
    got = homology_dims(C, range(-1, 5))
    want = oracles.complex_homology(C)
    assert all(got[q] == want.get(q, 0) for q in range(-1, 5))
    assert all(got[q] == h.get(q, 0) for q in range(-1, 5))


@settings(max_examples=30, deadline=None)
@given(seeds, directions)
def test_kunneth_dimensions(seed, direction):
    rng = random.Random(seed)
    A, ha = random_complex(rng, direction, 0, 2, 2)
    B, hb = random_complex(rng, direction, 0, 2, 2)
    T = tensor(A, B)
    T.validate()
    for q in range(0, 5):
        want = sum(ha.get(i, 0) * hb.get(q - i, 0) for i in range(q + 1))
        assert homology_dims(T, [q])[q] == want


@settings(max_examples=40, deadline=None)
@given(seeds, directions, st.booleans())
def test_labeled_maps_and_cones(seed, direction, qis):
    f, label = random_labeled_map(random.Random(seed), direction, qis, 0, 3, 3)
    assert f.is_chain_map()
    assert is_quasi_iso(f) == label
    assert is_acyclic(mapping_cone(f), range(-1, 6)) == label


@settings(max_examples=30, deadline=None)
@given(seeds, directions)
def test_acyclic_contraction(seed, direction):
    C = acyclic_complex(random.Random(seed), direction, 0, 3)
    assert is_acyclic(C)
    h = cone_contraction(C)
    assert verify_homotopy(h)


@settings(max_examples=30, deadline=None)
@given(seeds, directions)
def test_tensor_of_maps_is_chain_map(seed, direction):
    rng = random.Random(seed)
    f, _ = random_labeled_map(rng, direction, True, 0, 2, 2)
    g, _ = random_labeled_map(rng, direction, True, 0, 1, 2)
    fg = tensor_maps(f, g)
    assert fg.is_chain_map() and is_quasi_iso(fg)


def test_find_homotopy():
    D = disk(1)
    assert find_homotopy(identity_map(D), zero_map(D, D)) is not None
    S = sphere(0)
    assert find_homotopy(identity_map(S), zero_map(S, S)) is None


def test_spheres_disks_and_sums():
    assert homology_dims(sphere(2, COCHAIN, 3), [2]) == {2: 3}
    assert is_acyclic(disk(0, COCHAIN))
    S = direct_sum(sphere(0), disk(2), sphere(1))
    assert homology_dims(S, range(4)) == {0: 1, 1: 1, 2: 0, 3: 0}


def test_json_round_trip():
    C, _ = random_complex(random.Random(3), COCHAIN, 0, 3, 3)
    back = codec.decode(codec.encode(C))
    assert back.dims == C.dims and back.diff == C.diff
    f, _ = random_labeled_map(random.Random(4), CHAIN, True)
    g = codec.decode(codec.encode(f))
    assert g.comps == f.comps


def test_errors():
    with pytest.raises(ComplexError):
        Complex("sideways", {0: 1})
    bad = Mat.from_rows([[1]])
    with pytest.raises(ComplexError):
        Complex(CHAIN, {0: 1, 1: 1, 2: 1}, {2: bad, 1: bad})
    with pytest.raises(DimensionError):
        ChainMap(sphere(0), sphere(0, n=2), {0: bad})
    with pytest.raises(ComplexError):
        ChainMap(sphere(0), sphere(0, COCHAIN))
    with pytest.raises(SchemaError):
        codec.decode({"dims": {}})
