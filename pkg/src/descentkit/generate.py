"""Seeded generators of valid instances with ground truth known by construction.

Complexes are sums of spheres and disks written in a canonical basis and then
conjugated by random unimodular changes of basis.  Maps between them are
labeled quasi-isomorphisms (or not) from the block that hits the spheres.
Simplicial objects are degreewise tensors V ⊗ A of a simplicial vector space V
(a linearized simplicial set or a Dold–Kan object) with a complex A.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .complexes import (CHAIN, COCHAIN, ChainMap, Complex, identity_map, sum_inclusions,
                        direct_sum, tensor, tensor_maps, zero_map)
from .linalg import Mat, inverse
from .simplicial import (COSIMPLICIAL, SIMPLICIAL, SimplicialMap, Truncated, circle,
                         disjoint_points, dold_kan, external_tensor, external_tensor_map, linearize,
                         point, standard_simplex, sum_objects)

MAX_TRUNCATION = 5
MAX_DIM = 4
MAX_DEGREE = 6


class ProfileError(ValueError):
    pass


def check_profile(N: int | None = None, dim: int | None = None, hi: int | None = None) -> None:
    if N is not None and not 0 <= N <= MAX_TRUNCATION:
        raise ProfileError(f"truncation {N} outside 0..{MAX_TRUNCATION}")
    if dim is not None and not 0 <= dim <= MAX_DIM:
        raise ProfileError(f"slot dimension {dim} outside 0..{MAX_DIM}")
    if hi is not None and not 0 <= hi <= MAX_DEGREE:
        raise ProfileError(f"degree {hi} outside 0..{MAX_DEGREE}")


def unimodular(rng: random.Random, n: int) -> Mat:
    """Product of random unitriangular matrices with small integer entries."""
    lo = {(i, j): rng.randint(-2, 2) for i in range(n) for j in range(i)}
    up = {(i, j): rng.randint(-2, 2) for i in range(n) for j in range(i + 1, n)}
    for i in range(n):
        lo[(i, i)] = 1
        up[(i, i)] = 1
    perm = list(range(n))
    rng.shuffle(perm)
    P = Mat.from_entries(n, n, {(i, perm[i]): 1 for i in range(n)})
    return P @ Mat.from_entries(n, n, lo) @ Mat.from_entries(n, n, up)


def random_matrix(rng: random.Random, r: int, c: int, lo: int = -2, hi: int = 2) -> Mat:
    return Mat.from_entries(r, c, {(i, j): rng.randint(lo, hi) for i in range(r) for j in range(c)})


def random_invertible(rng: random.Random, n: int) -> Mat:
    return unimodular(rng, n)


def random_of_rank(rng: random.Random, r: int, c: int, k: int) -> Mat:
    if k == 0:
        return Mat(r, c)
    return unimodular(rng, r) @ Mat.from_entries(r, c, {(i, i): 1 for i in range(k)}) @ unimodular(rng, c)


@dataclass
class Canon:
    """Sum of spheres S^q (counts per degree) and disks (source degree -> count)."""
    direction: str
    spheres: dict = field(default_factory=dict)
    disks: dict = field(default_factory=dict)

    @property
    def step(self) -> int:
        return -1 if self.direction == CHAIN else 1

    def degrees(self) -> set:
        out = {q for q, k in self.spheres.items() if k}
        for q, k in self.disks.items():
            if k:
                out |= {q, q + self.step}
        return out

    def parts(self, q: int) -> tuple[int, int, int]:
        """(spheres, disk sources, disk targets) in degree q."""
        return (self.spheres.get(q, 0), self.disks.get(q, 0), self.disks.get(q - self.step, 0))

    def dim(self, q: int) -> int:
        return sum(self.parts(q))

    def complex(self) -> Complex:
        dims = {q: self.dim(q) for q in self.degrees()}
        diff = {}
        for q in dims:
            s, a, _ = self.parts(q)
            t = q + self.step
            if a:
                s2, a2, _ = self.parts(t)
                diff[q] = Mat.from_entries(self.dim(t), dims[q],
                                           {(s2 + a2 + k, s + k): 1 for k in range(a)})
        return Complex(self.direction, dims, diff, check=False)

    def homology(self) -> dict:
        return {q: self.spheres.get(q, 0) for q in self.degrees()}


def random_canon(rng: random.Random, direction: str, lo: int = 0, hi: int = 3,
                 maxdim: int = 3) -> Canon:
    check_profile(dim=maxdim, hi=hi)
    c = Canon(direction)
    step = -1 if direction == CHAIN else 1
    for q in range(lo, hi + 1):
        budget = maxdim - c.dim(q)
        if budget <= 0:
            continue
        s = rng.randint(0, min(2, budget))
        c.spheres[q] = s
        t = q + step
        if lo <= t <= hi and budget - s > 0 and c.dim(t) < maxdim:
            c.disks[q] = rng.randint(0, min(1, budget - s, maxdim - c.dim(t)))
    return c


def conjugate(C: Complex, L: dict) -> Complex:
    step = C.step
    diff = {}
    for q in C.dims:
        if q + step in C.dims:
            diff[q] = L[q + step] @ C.d(q) @ inverse(L[q])
    return Complex(C.direction, C.dims, diff, check=True)


def conjugators(rng: random.Random, C: Complex) -> dict:
    return {q: unimodular(rng, n) for q, n in C.dims.items()}


def conjugate_map(f: ChainMap, src: Complex, tgt: Complex, La: dict, Lb: dict) -> ChainMap:
    comps = {}
    for q in set(src.dims) | set(tgt.dims):
        if src.dim(q) and tgt.dim(q):
            comps[q] = Lb[q] @ f.at(q) @ inverse(La[q])
    return ChainMap(src, tgt, comps, check=True)


def random_complex(rng: random.Random, direction: str = CHAIN, lo: int = 0, hi: int = 3,
                   maxdim: int = 3) -> tuple[Complex, dict]:
    """A conjugated sphere/disk sum and its homology dimensions."""
    c = random_canon(rng, direction, lo, hi, maxdim)
    C = c.complex()
    return conjugate(C, conjugators(rng, C)), c.homology()


def _canon_map(rng: random.Random, a: Canon, b: Canon, sphere_block: dict) -> ChainMap:
    A, B = a.complex(), b.complex()
    step = a.step
    comps: dict = {}
    cols: dict = {}
    for q in sorted(a.degrees()):
        s, d_src, _ = a.parts(q)
        bs, bsrc, btgt = b.parts(q)
        ent = {}
        # spheres: M on the sphere block plus random boundaries of B
        M = sphere_block.get(q, Mat(bs, s))
        for r, c, v in M.entries():
            ent[(r, c)] = v
        for k in range(s):
            for t in range(btgt):
                if rng.random() < 0.5:
                    ent[(bs + bsrc + t, k)] = rng.randint(-1, 1)
        # disk sources: arbitrary image v; the matching targets get d_B v
        for k in range(d_src):
            v = {r: rng.randint(-1, 1) for r in range(b.dim(q))}
            for r, x in v.items():
                if x:
                    ent[(r, s + k)] = x
            cols[(q, k)] = v
        comps[q] = ent
    for (q, k), v in cols.items():
        t = q + step
        vec = Mat.from_entries(B.dim(q), 1, {(r, 0): x for r, x in v.items()})
        img = B.d(q) @ vec
        s_t, a_t, _ = a.parts(t)
        col = s_t + a_t + k
        ent = comps.setdefault(t, {})
        for r, _, x in img.entries():
            ent[(r, col)] = x
    out = {q: Mat.from_entries(B.dim(q), A.dim(q), e) for q, e in comps.items()
           if q in A.dims and q in B.dims}
    return ChainMap(A, B, out, check=True)


def random_labeled_map(rng: random.Random, direction: str = CHAIN, qis: bool = True,
                       lo: int = 0, hi: int = 3, maxdim: int = 3) -> tuple[ChainMap, bool]:
    """A chain map whose quasi-isomorphism status is fixed by construction."""
    a = random_canon(rng, direction, lo, hi, maxdim)
    if not qis and not any(a.spheres.values()):
        q = rng.randint(lo, hi)
        a.spheres[q] = 1
    b = Canon(direction, dict(a.spheres), {})
    step = a.step
    for q in range(lo, hi + 1):
        t = q + step
        if lo <= t <= hi and b.dim(q) < maxdim + 1 and b.dim(t) < maxdim + 1 and rng.random() < 0.5:
            b.disks[q] = 1
    block = {}
    for q, s in a.spheres.items():
        if s:
            block[q] = random_invertible(rng, s)
    if not qis:
        q = rng.choice(sorted(q for q, s in a.spheres.items() if s))
        mode = rng.choice(["singular", "extra", "missing"])
        s = a.spheres[q]
        if mode == "singular":
            block[q] = random_of_rank(rng, s, s, s - 1)
        elif mode == "extra":
            b.spheres[q] = s + 1
            block[q] = Mat.from_entries(s + 1, s, {(r, c): v for r, c, v in block[q].entries()})
        else:
            b.spheres[q] = s - 1
            block[q] = Mat.from_entries(s - 1, s, {(r, c): v for r, c, v in
                                                   random_of_rank(rng, s, s, s).entries() if r < s - 1})
    f = _canon_map(rng, a, b, block)
    A, B = f.source, f.target
    La, Lb = conjugators(rng, A), conjugators(rng, B)
    A2, B2 = conjugate(A, La), conjugate(B, Lb)
    return conjugate_map(f, A2, B2, La, Lb), qis


def random_map(rng: random.Random, direction: str = CHAIN, lo: int = 0, hi: int = 3,
               maxdim: int = 3) -> tuple[ChainMap, bool]:
    return random_labeled_map(rng, direction, rng.random() < 0.5, lo, hi, maxdim)


def acyclic_complex(rng: random.Random, direction: str = CHAIN, lo: int = 0, hi: int = 3) -> Complex:
    c = Canon(direction)
    step = c.step
    for q in range(lo, hi + 1):
        if lo <= q + step <= hi and rng.random() < 0.6:
            c.disks[q] = 1
    C = c.complex()
    return conjugate(C, conjugators(rng, C))


# simplicial vector spaces and V ⊗ A objects


def random_chain_of_spaces(rng: random.Random, N: int, maxdim: int = 2):
    """A chain complex of vector spaces E_0..E_N (as Dold–Kan input)."""
    c = random_canon(rng, CHAIN, 0, N, maxdim)
    C = conjugate(c.complex(), conjugators(rng, c.complex()))
    parts = [Complex(CHAIN, {0: C.dim(k)}, {}, check=False) for k in range(N + 1)]
    bd = {k: ChainMap(parts[k], parts[k - 1], {0: C.d(k)}) for k in range(1, N + 1)}
    return parts, bd, C


def random_space_object(rng: random.Random, N: int, maxdim: int = 2, top: int = 2) -> Truncated:
    """A simplicial vector space: Dold–Kan of a random chain complex, or a linearized fixture.

    Homology of K of the result lives in degrees <= top.
    """
    choice = rng.choice(["dk", "dk", "set"])
    if choice == "dk":
        parts, bd, _ = random_chain_of_spaces(rng, min(N, top), maxdim)
        return dold_kan(parts, bd, N)
    fixtures = [point(), standard_simplex(1), disjoint_points(2)]
    if top >= 1:
        fixtures.append(circle())
    K = rng.choice(fixtures)
    return linearize(K, N)


def vtensor(V: Truncated, A: Complex) -> Truncated:
    """Degreewise V_n ⊗ A for V valued in vector spaces (degree 0)."""
    idA = identity_map(A)
    objs = [tensor(V.objects[n], A) for n in range(V.N + 1)]

    def fix(f, key, is_face):
        n = key[0]
        if V.kind == SIMPLICIAL:
            s, t = (n, n - 1) if is_face else (n, n + 1)
        else:
            s, t = (n - 1, n) if is_face else (n + 1, n)
        return ChainMap(objs[s], objs[t], tensor_maps(f, idA).comps)
    return Truncated(V.kind, V.N, objs, {k: fix(f, k, True) for k, f in V.faces.items()},
                     {k: fix(f, k, False) for k, f in V.degens.items()})


def vtensor_map(V: Truncated, f: ChainMap) -> SimplicialMap:
    S, T = vtensor(V, f.source), vtensor(V, f.target)
    comps = [ChainMap(S.objects[n], T.objects[n],
                      tensor_maps(identity_map(V.objects[n]), f).comps) for n in range(V.N + 1)]
    return SimplicialMap(S, T, comps)


def dualize(V: Truncated) -> Truncated:
    """Transpose a simplicial vector space into a cosimplicial one (and back)."""
    kind = COSIMPLICIAL if V.kind == SIMPLICIAL else SIMPLICIAL
    direction = COCHAIN if V.direction == CHAIN else CHAIN
    objs = [Complex(direction, c.dims, {}, check=False) for c in V.objects]

    def tr(f, key, is_face):
        n = key[0]
        if kind == COSIMPLICIAL:
            s, t = (n - 1, n) if is_face else (n + 1, n)
        else:
            s, t = (n, n - 1) if is_face else (n, n + 1)
        return ChainMap(objs[s], objs[t], {q: m.T for q, m in f.comps.items()})
    return Truncated(kind, V.N, objs, {k: tr(f, k, True) for k, f in V.faces.items()},
                     {k: tr(f, k, False) for k, f in V.degens.items()})


def random_simplicial(rng: random.Random, N: int, direction: str = CHAIN, hi: int = 2,
                      maxdim: int = 2, summands: int | None = None, top: int = 2) -> Truncated:
    """A direct sum of V ⊗ A pieces (degreewise valid by construction)."""
    check_profile(N=N, dim=maxdim, hi=hi)
    k = summands if summands is not None else rng.randint(1, 2)
    pieces = []
    for _ in range(k):
        V = random_space_object(rng, N, 2, top)
        A, _ = random_complex(rng, CHAIN, 0, hi, maxdim)
        if direction == COCHAIN:
            A, _ = random_complex(rng, COCHAIN, 0, hi, maxdim)
            V = dualize(V)
        pieces.append(vtensor(V, A))
    return pieces[0] if len(pieces) == 1 else sum_objects(*pieces)


def random_simplicial_map(rng: random.Random, N: int, direction: str = CHAIN, hi: int = 2,
                          maxdim: int = 2, qis: bool | None = None,
                          top: int = 2) -> tuple[SimplicialMap, bool | None]:
    """V ⊗ f for a labeled chain map f; the label is the degreewise status."""
    V = random_space_object(rng, N, 2, top)
    if direction == COCHAIN:
        V = dualize(V)
    label = rng.random() < 0.5 if qis is None else qis
    f, lab = random_labeled_map(rng, direction, label, 0, hi, maxdim)
    return vtensor_map(V, f), lab


def random_degreewise_qis(rng: random.Random, N: int, direction: str = CHAIN, hi: int = 2,
                          maxdim: int = 2, top: int = 2) -> SimplicialMap:
    """Either V ⊗ (labeled qis) or the inclusion X -> X ⊕ (degreewise acyclic)."""
    if rng.random() < 0.5:
        return random_simplicial_map(rng, N, direction, hi, maxdim, qis=True, top=top)[0]
    X = random_simplicial(rng, N, direction, hi, maxdim, summands=1, top=top)
    V = random_space_object(rng, N, 2, top)
    if direction == COCHAIN:
        V = dualize(V)
    W = vtensor(V, acyclic_complex(rng, direction, 0, hi))
    total = sum_objects(X, W)
    from .simplicial import sum_injections
    return sum_injections([X, W], total)[0]


# bisimplicial instances


def random_bisimplicial(rng: random.Random, N: int = 3, hi: int = 1, maxdim: int = 2):
    X = random_simplicial(rng, N, CHAIN, hi, maxdim, summands=1)
    Y = random_simplicial(rng, N, CHAIN, hi, maxdim, summands=1)
    return external_tensor(X, Y)


def random_bisimplicial_map(rng: random.Random, N: int = 3, hi: int = 1, maxdim: int = 2):
    f, _ = random_simplicial_map(rng, N, CHAIN, hi, maxdim)
    g, _ = random_simplicial_map(rng, N, CHAIN, hi, maxdim)
    return external_tensor_map(f, g)


# commuting 3x3 grids


@dataclass
class Grid:
    """Rows top ('), middle, bottom ('') of spans Z <- X -> Y with vertical maps
    alpha: Z -> Z', alpha2: Z -> Z'', beta, beta2 on X, gamma, gamma2 on Y."""
    top: tuple
    mid: tuple
    bot: tuple
    alpha: SimplicialMap
    alpha2: SimplicialMap
    beta: SimplicialMap
    beta2: SimplicialMap
    gamma: SimplicialMap
    gamma2: SimplicialMap

    def commutes(self) -> bool:
        (g1, f1), (g, f), (g2, f2) = self.top, self.mid, self.bot
        return all(a.comps == b.comps or all(x == y for x, y in zip(a.comps, b.comps)) for a, b in (
            (self.alpha @ g, g1 @ self.beta), (self.gamma @ f, f1 @ self.beta),
            (self.alpha2 @ g, g2 @ self.beta2), (self.gamma2 @ f, f2 @ self.beta2)))


def _extend(rng, V, Xc, Yc, Zc, f, g, direction, hi, maxdim):
    """A commuting row X' -> Y', X' -> Z' receiving (β, γ, α) from X -> Y, X -> Z."""
    U = random_complex(rng, direction, 0, hi, 2)[0]
    Yp = random_complex(rng, direction, 0, hi, maxdim)[0]
    Zp = random_complex(rng, direction, 0, hi, maxdim)[0]
    gam = _random_chain_map(rng, Yc, Yp)
    alp = _random_chain_map(rng, Zc, Zp)
    u = _random_chain_map(rng, U, Yp)
    v = _random_chain_map(rng, U, Zp)
    Xp = direct_sum(Xc, U)
    inc = sum_inclusions([Xc, U], Xp)
    fp = _hcat(Xp, Yp, [gam @ f, u])
    gp = _hcat(Xp, Zp, [alp @ g, v])
    return (Xp, Yp, Zp, fp, gp, inc[0], gam, alp)


def _hcat(src: Complex, tgt: Complex, maps: list[ChainMap]) -> ChainMap:
    from .linalg import hstack
    comps = {}
    for q in set(src.dims) | set(tgt.dims):
        comps[q] = hstack([m.at(q) for m in maps], rows=tgt.dim(q))
    return ChainMap(src, tgt, comps, check=True)


def _random_chain_map(rng: random.Random, A: Complex, B: Complex) -> ChainMap:
    """A chain map A -> B: a random map through cycles and boundaries, found by solving."""
    from .linalg import kernel_basis
    # solve for all families (f_q) with d f = f d: linear system on the entries
    degs = sorted(set(A.dims) | set(B.dims))
    var = {}
    n = 0
    for q in degs:
        for r in range(B.dim(q)):
            for c in range(A.dim(q)):
                var[(q, r, c)] = n
                n += 1
    if n == 0:
        return zero_map(A, B)
    rows = []
    step = A.step
    for q in degs:
        t = q + step
        # (d_B f_q - f_t d_A)[r, c] = 0 for r in B_t, c in A_q
        dB, dA = B.d(q), A.d(q)
        for r in range(B.dim(t)):
            for c in range(A.dim(q)):
                row = {}
                for k in range(B.dim(q)):
                    x = dB.get(r, k)
                    if x:
                        row[var[(q, k, c)]] = row.get(var[(q, k, c)], 0) + x
                for k in range(A.dim(t)):
                    x = dA.get(k, c)
                    if x:
                        row[var[(t, r, k)]] = row.get(var[(t, r, k)], 0) - x
                rows.append(row)
    system = Mat(len(rows), n, [{j: v for j, v in r.items() if v} for r in rows])
    K = kernel_basis(system)
    coeff = [rng.randint(-1, 1) for _ in range(K.cols)]
    vec = [sum(K.get(i, j) * coeff[j] for j in range(K.cols)) for i in range(n)]
    comps = {}
    for q in degs:
        comps[q] = Mat.from_entries(B.dim(q), A.dim(q),
                                    {(r, c): vec[var[(q, r, c)]] for r in range(B.dim(q))
                                     for c in range(A.dim(q))})
    return ChainMap(A, B, comps, check=True)


def random_grid(rng: random.Random, N: int = 3, direction: str = CHAIN, hi: int = 1,
                maxdim: int = 2) -> Grid:
    """A commuting 3x3 grid of simplicial objects, V ⊗ (commuting grid of complexes)."""
    V = random_space_object(rng, N, 1)
    X = random_complex(rng, direction, 0, hi, maxdim)[0]
    Y = random_complex(rng, direction, 0, hi, maxdim)[0]
    Z = random_complex(rng, direction, 0, hi, maxdim)[0]
    f = _random_chain_map(rng, X, Y)
    g = _random_chain_map(rng, X, Z)
    t = _extend(rng, V, X, Y, Z, f, g, direction, hi, maxdim)
    b = _extend(rng, V, X, Y, Z, f, g, direction, hi, maxdim)
    L = lambda m: vtensor_map(V, m)
    return Grid(top=(L(t[4]), L(t[3])), mid=(L(g), L(f)), bot=(L(b[4]), L(b[3])),
                alpha=L(t[7]), alpha2=L(b[7]), beta=L(t[5]), beta2=L(b[5]),
                gamma=L(t[6]), gamma2=L(b[6]))
