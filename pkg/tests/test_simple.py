import random

from hypothesis import given, settings, strategies as st

from descentkit.complexes import CHAIN, COCHAIN, agree_on_homology, homology_dims, is_quasi_iso
from descentkit.generate import random_bisimplicial, random_complex, random_simplicial
from descentkit.linalg import Mat
from descentkit.monads import MONOIDS
from descentkit.simple import (aw_map, aw_shuffle_normalized_identity, conormal_retraction,
                               constant_dga, cosimple, dga_simple_aw, iterated_simple_total,
                               kunneth, lambda_mu_composites, lambda_rho, moore_section,
                               normalized_simple, shuffle_map, shuffles, simple, simple_total,
                               trusted_degrees)
from descentkit.simplicial import COSIMPLICIAL, SIMPLICIAL, constant, diagonal, linearize, circle

seeds = st.integers(0, 10**6)


@settings(max_examples=15, deadline=None)
@given(seeds)
def test_eilenberg_zilber(seed):
    Z = random_bisimplicial(random.Random(seed), 3, 1, 2)
    Q = 2
    diag = simple_total(diagonal(Z), Q)
    it = iterated_simple_total(Z, Q)
    aw, nab = aw_map(Z, Q, diag, it), shuffle_map(Z, Q, diag, it)
    assert aw.is_chain_map() and nab.is_chain_map()
    assert is_quasi_iso(aw, range(Q + 1)) and is_quasi_iso(nab, range(Q + 1))
    assert aw_shuffle_normalized_identity(Z, Q)


def test_shuffle_count_and_signs():
    # (i+j choose i) shuffles; the sign of the identity-like shuffle is +1
    assert len(shuffles(2, 1)) == 3
    assert len(shuffles(2, 2)) == 6
    assert sorted(s for _, _, s in shuffles(1, 1)) == [-1, 1]


@settings(max_examples=15, deadline=None)
@given(seeds, st.sampled_from([CHAIN, COCHAIN]))
def test_lambda_rho_split(seed, direction):
    A, h = random_complex(random.Random(seed), direction, 0, 2, 2)
    lam, rho, tot = lambda_rho(A, 3, 2)
    degs = range(2)
    if direction == CHAIN:
        assert (lam @ rho).comps == {q: Mat.identity(A.dim(q)) for q in A.dims if A.dim(q)}
        assert is_quasi_iso(lam, range(3))
    else:
        assert all((rho @ lam).at(q) == Mat.identity(A.dim(q)) for q in degs)
        assert is_quasi_iso(lam, degs)


@settings(max_examples=15, deadline=None)
@given(seeds)
def test_simplicial_normalization(seed):
    X = random_simplicial(random.Random(seed), 3, CHAIN)
    Q = 2
    qn = normalized_simple(X, Q)
    assert qn.proj.is_chain_map() and is_quasi_iso(qn.proj, range(Q + 1))
    sec = moore_section(X, Q, qn)
    assert sec.is_chain_map()
    assert all((qn.proj @ sec).at(q) == Mat.identity(qn.complex.dim(q)) for q in range(Q + 1))


@settings(max_examples=15, deadline=None)
@given(seeds)
def test_cosimplicial_normalization(seed):
    X = random_simplicial(random.Random(seed), 3, COCHAIN)
    Q = 3
    sub = normalized_simple(X, Q)
    degs = trusted_degrees(X, Q)
    assert is_quasi_iso(sub.incl, degs)
    r = conormal_retraction(X, Q, sub)
    assert all((r @ sub.incl).at(q) == Mat.identity(sub.complex.dim(q)) for q in degs)


@settings(max_examples=15, deadline=None)
@given(seeds, st.sampled_from([CHAIN, COCHAIN]))
def test_constant_object_has_homology_of_value(seed, direction):
    A, h = random_complex(random.Random(seed), direction, 0, 2, 2)
    kind = SIMPLICIAL if direction == CHAIN else COSIMPLICIAL
    X = constant(A, 3, kind)
    Q = 2 if direction == CHAIN else 3
    S = simple(X, Q) if direction == CHAIN else cosimple(X, Q)
    degs = trusted_degrees(X, Q)
    assert homology_dims(S, degs) == {q: h.get(q, 0) for q in degs}


def test_trusted_windows():
    X = linearize(circle(), 3)
    assert list(trusted_degrees(X, 2)) == [0, 1, 2]
    Y = constant(random_complex(random.Random(0), COCHAIN, 0, 1, 1)[0], 3, COSIMPLICIAL)
    assert list(trusted_degrees(Y, 3)) == [0, 1, 2]


@settings(max_examples=15, deadline=None)
@given(seeds)
def test_lambda_mu_compatibility(seed):
    X = random_simplicial(random.Random(seed), 3, CHAIN)
    a, b, tot = lambda_mu_composites(X, 2)
    assert a.is_chain_map() and b.is_chain_map()
    assert agree_on_homology(a, b, range(3))


@settings(max_examples=10, deadline=None)
@given(seeds)
def test_kunneth_with_internal_degrees(seed):
    rng = random.Random(seed)
    X = random_simplicial(rng, 3, COCHAIN, hi=1)
    Y = random_simplicial(rng, 3, COCHAIN, hi=1)
    k, SX, SY, SXY = kunneth(X, Y, 3)
    assert k.is_chain_map()
    assert is_quasi_iso(k, range(3))


def test_normalized_algebra_of_constant_monoids():
    for name, make in MONOIDS.items():
        A = make()
        assert A.audit() == []
        D, sub = dga_simple_aw(constant_dga(A, 3), 2)
        assert D.audit(top=2) == [], name
        assert homology_dims(D.complex, range(2)) == homology_dims(A.complex, range(2))
