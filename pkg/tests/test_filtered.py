import json
import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from descentkit import codec
from descentkit.complexes import COCHAIN, ChainMap, Complex, homology_dims, identity_map, zero_complex
from descentkit.filtered import (SDELTA, SS, BifilteredComplex, FilteredComplex, FilteredMap,
                                 FiltrationError, HodgeMap, MixedHodgeDatum, constant_filtered,
                                 constant_hodge, decalage, decalage_map, graded, hodge_simple,
                                 interchange_holds, is_e2_iso, is_filtered_qis, lambda_hodge_check,
                                 mhc_equivalence, page_consistency, random_cosimplicial_filtered,
                                 random_filtered, random_hodge_datum, random_labeled_filtered_map,
                                 simple_filtered, spectral_page)
from descentkit.generate import random_complex
from descentkit.linalg import Mat, same_span
from descentkit.simple import lambda_rho

import oracles

seeds = st.integers(0, 10**6)


def flag():
    A = Complex(COCHAIN, {0: 2})
    return FilteredComplex.from_levels(A, {0: [0, 1]})


def trivial(A):
    return FilteredComplex.from_levels(A, {n: [0] * d for n, d in A.dims.items()})


def bete(A):
    return FilteredComplex.from_levels(A, {n: [n] * d for n, d in A.dims.items()})


def total_gr(X, n):
    return sum(graded(X, k).dim(n) for k in X.levels())


def test_trivial_filtration_graded():
    A, _ = random_complex(random.Random(1), COCHAIN, 0, 3, 3)
    X = trivial(A)
    G = graded(X, 0)
    assert G.dims == A.dims
    assert homology_dims(G, range(4)) == homology_dims(A, range(4))
    assert all(graded(X, k).dims == {} for k in (-2, -1, 1, 2))


def test_two_step_flag_gives_two_lines():
    X = flag()
    assert graded(X, 0).dims == {0: 1} and graded(X, 1).dims == {0: 1}
    assert graded(X, 2).dims == {}


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_flag_conservation_and_audit(seed):
    X = random_filtered(random.Random(seed))
    assert X.audit() == []
    assert all(total_gr(X, n) == X.complex.dim(n) for n in X.complex.dims)
    D = decalage(X)
    assert D.audit() == []
    assert all(total_gr(D, n) == D.complex.dim(n) for n in D.complex.dims)


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_decalage_of_trivial_filtration(seed):
    A, _ = random_complex(random.Random(seed), COCHAIN, 0, 3, 3)
    D = decalage(trivial(A))
    for n, dim in A.dims.items():
        ker = sympy.Matrix(oracles.to_sympy(A.d(n))).nullspace() if A.d(n).rows else \
            [sympy.eye(dim)[:, i] for i in range(dim)]
        for p in range(-n - 2, -n + 2):
            got = D.F(p, n)
            if p < -n:
                assert got.cols == dim
            elif p == -n:
                assert got.cols == len(ker)
                assert (A.d(n) @ got).is_zero()
            else:
                assert got.cols == 0


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_decalage_with_zero_differential(seed):
    X = random_filtered(random.Random(seed))
    Z = FilteredComplex(Complex(COCHAIN, X.complex.dims), X.steps)
    D = decalage(Z)
    for n in Z.complex.dims:
        for p in range(-6, 6):
            assert same_span(D.F(p, n), Z.F(p + n, n))


def test_bete_filtration_pages():
    A, h = random_complex(random.Random(4), COCHAIN, 0, 3, 3)
    X = bete(A)
    E1 = spectral_page(X, 1)
    assert E1.dims() == {(p, 0): d for p, d in sorted(A.dims.items())}
    E2 = spectral_page(X, 2)
    assert E2.dims() == {(p, 0): d for p, d in sorted(h.items()) if d}


def test_trivial_filtration_e1_is_homology():
    A, h = random_complex(random.Random(5), COCHAIN, 0, 3, 3)
    E1 = spectral_page(trivial(A), 1)
    assert E1.dims() == {(0, q): d for q, d in sorted(h.items()) if d}


@settings(max_examples=15, deadline=None)
@given(seeds)
def test_zero_differential_pages_are_graded(seed):
    X = random_filtered(random.Random(seed))
    Z = FilteredComplex(Complex(COCHAIN, X.complex.dims), X.steps)
    want = {(p, n - p): graded(Z, p).dim(n) for n in Z.complex.dims for p in Z.levels()
            if graded(Z, p).dim(n)}
    for r in range(4):
        assert spectral_page(Z, r).dims() == dict(sorted(want.items()))


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_page_consistency(seed):
    assert page_consistency(random_filtered(random.Random(seed)), 3) == []


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_dec_e2_biconditional_against_labels(seed):
    f, label = random_labeled_filtered_map(random.Random(seed))
    assert f.is_filtered()
    assert is_filtered_qis(f) == label["filtered_qis"]
    assert is_e2_iso(f) == label["e2_iso"]
    assert is_e2_iso(f) == is_filtered_qis(decalage_map(f))


def test_identity_is_both():
    X = random_filtered(random.Random(8))
    f = FilteredMap(X, X, identity_map(X.complex))
    assert is_filtered_qis(f) and is_e2_iso(f)


def test_constant_ss_reproduces_filtration_through_lambda():
    X = random_filtered(random.Random(9), 3, 2)
    N, Q = 3, 3
    S = simple_filtered(constant_filtered(X, N), SS, Q)
    lam = lambda_rho(X.complex, N, Q)[0]
    src = FilteredComplex(X.complex.truncate(0, Q), {n: v for n, v in X.steps.items() if n <= Q})
    f = FilteredMap(src, S, ChainMap(src.complex, S.complex, lam.comps))
    assert f.is_filtered() and is_filtered_qis(f, range(Q))


def test_constant_sdelta_shifts_by_cosimplicial_degree():
    X = flag()
    S = simple_filtered(constant_filtered(X, 2), SDELTA, 2)
    # degree 1 of the cosimple is the block (1, 0): X^0 placed in cosimplicial degree 1
    for k in range(-1, 4):
        assert S.F(k, 1).cols == X.F(k - 1, 0).cols


@settings(max_examples=10, deadline=None)
@given(seeds)
def test_interchange(seed):
    assert interchange_holds(random_cosimplicial_filtered(random.Random(seed), 3, 1), 3)


def _zero_datum():
    Z = FilteredComplex(zero_complex(COCHAIN), {}, increasing=True)
    f = FilteredMap(Z, Z, identity_map(Z.complex))
    return MixedHodgeDatum(Z, BifilteredComplex(Z, Z), f, f)


def test_zero_datum_goes_to_zero():
    S = hodge_simple(constant_hodge(_zero_datum(), 3), 3)
    assert S.KQ.complex.dims == {} and S.audit() == []


@settings(max_examples=10, deadline=None)
@given(seeds)
def test_random_hodge_data(seed):
    D = random_hodge_datum(random.Random(seed))
    assert D.audit() == []
    assert lambda_hodge_check(D, 3, 3) == (True, "ok")


def test_mhc_equivalence_decided_on_rational_part():
    D = random_hodge_datum(random.Random(2))
    idq = FilteredMap(D.KQ, D.KQ, identity_map(D.KQ.complex))
    assert mhc_equivalence(HodgeMap(idq))
    C = D.KQ.complex
    if any(homology_dims(C, C.degrees()).values()):
        zero = FilteredMap(D.KQ, D.KQ, ChainMap(C, C, {}))
        assert not mhc_equivalence(HodgeMap(zero))


def test_json_round_trip_including_increasing():
    X = random_filtered(random.Random(3))
    Y = codec.decode(json.loads(json.dumps(codec.encode(X))))
    assert Y.same_filtration(X)
    D = random_hodge_datum(random.Random(3))
    W = D.KQ
    assert W.increasing
    obj = W.to_json()
    back = FilteredComplex.from_json(obj)
    assert back.increasing and back.same_filtration(W)
    # user-facing keys are the increasing indices W_k = F^(-k)
    lo, hi = min(int(k) for k in obj["filtration"]), max(int(k) for k in obj["filtration"])
    assert sorted(-int(k) for k in obj["filtration"]) == list(range(-hi, -lo + 1))


def test_invalid_filtrations_rejected():
    A = Complex(COCHAIN, {0: 1, 1: 1}, {0: Mat.identity(1)})
    with pytest.raises(FiltrationError):
        # F^1 contains the degree-0 vector but not its image
        FilteredComplex.from_levels(A, {0: [1], 1: [0]})
    with pytest.raises(FiltrationError):
        FilteredComplex(Complex("chain", {0: 1}), {})
    with pytest.raises(FiltrationError):
        BifilteredComplex(flag(), trivial(Complex(COCHAIN, {0: 3})))
