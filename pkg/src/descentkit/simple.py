"""Simple functors (total complexes) of (co)simplicial complexes and their structure maps.

Conventions: for a simplicial complex X the simple has (sX)_q = ⊕_{n+p=q} X_{n,p}
with d = d_{X_n} + (-1)^p ∂, ∂ = Σ (-1)^i d_i.  Blocks inside a total degree
are ordered by simplicial degree.  The cochain version mirrors this.
"""
from __future__ import annotations

import itertools
from typing import Callable, Iterable

from .complexes import (CHAIN, COCHAIN, ChainMap, Complex, ComplexError, identity_map,
                        tensor, tensor_layout)
from .linalg import Mat, block_diag, coordinates, hstack, inverse, kernel_basis, quotient_pair, \
    span_sum
from .simplicial import (COSIMPLICIAL, SIMPLICIAL, Bisimplicial, BisimplicialMap, SimplicialMap,
                         Truncated, TruncationError, constant, diagonal)

EXACT = "bit-exact"
HOMOLOGY = "homology-level"


class Layout:
    """Ordered blocks of a graded object: degree -> [(key, size)]."""

    def __init__(self, blocks: dict):
        self.blocks = {q: [(k, s) for k, s in lst if s] for q, lst in blocks.items()}
        self.offset = {}
        self.size = {}
        self.degree_of = {}
        for q, lst in self.blocks.items():
            off = 0
            for k, s in lst:
                self.offset[k] = off
                self.degree_of[k] = q
                off += s
            self.size[q] = off

    def keys(self, q: int) -> list:
        return [k for k, _ in self.blocks.get(q, [])]

    def block_size(self, key) -> int:
        q = self.degree_of.get(key)
        if q is None:
            return 0
        return dict(self.blocks[q])[key]

    def __contains__(self, key) -> bool:
        return key in self.offset


def _assemble(src: Layout, tgt: Layout, q_src: int, q_tgt: int, arrows: Callable) -> Mat:
    ent: dict = {}
    for key in src.keys(q_src):
        so = src.offset[key]
        for tkey, m in arrows(key):
            if tkey not in tgt or tgt.degree_of[tkey] != q_tgt:
                continue
            to = tgt.offset[tkey]
            for r, c, v in m.entries():
                k = (to + r, so + c)
                ent[k] = ent.get(k, 0) + v
    return Mat.from_entries(tgt.size.get(q_tgt, 0), src.size.get(q_src, 0), ent)


def totalize(direction: str, lay: Layout, arrows: Callable) -> Complex:
    step = -1 if direction == CHAIN else 1
    diff = {q: _assemble(lay, lay, q, q + step, arrows) for q in lay.size}
    return Complex(direction, lay.size, diff, check=False)


def layout_map(src_c: Complex, src: Layout, tgt_c: Complex, tgt: Layout, arrows: Callable) -> ChainMap:
    comps = {q: _assemble(src, tgt, q, q, arrows) for q in set(src.size) | set(tgt.size)}
    return ChainMap(src_c, tgt_c, comps)


class Total:
    """A totalized complex together with its block layout."""

    def __init__(self, complex_: Complex, layout: Layout, top: int):
        self.complex = complex_
        self.layout = layout
        self.top = top  # homology trusted in degrees <= top

    def block(self, key, vec_or_mat: Mat) -> Mat:
        """Rows of a column-matrix in the total degree that belong to block key."""
        off = self.layout.offset[key]
        return vec_or_mat.submatrix(range(off, off + self.layout.block_size(key)),
                                    range(vec_or_mat.cols))


def _check_positive(X: Truncated) -> None:
    for c in X.objects:
        if c.dims and min(c.dims) < 0:
            raise ComplexError("simple expects internal degrees >= 0")


def boundary(X: Truncated, n: int) -> ChainMap:
    """Alternating sum of faces leaving simplicial degree n (into n+1 for cosimplicial)."""
    if X.kind == SIMPLICIAL:
        fs = [X.faces[(n, i)] for i in range(n + 1)]
    else:
        fs = [X.faces[(n + 1, i)] for i in range(n + 2)]
    acc = fs[0]
    for i, f in enumerate(fs[1:], start=1):
        acc = acc - f if i % 2 else acc + f
    return acc


# simple of simplicial complexes


def simple_layout(X: Truncated, qmax: int) -> Layout:
    blocks = {}
    for q in range(qmax + 2):
        blocks[q] = [((n, q - n), X.objects[n].dim(q - n)) for n in range(min(q, X.N) + 1)]
    return Layout(blocks)


def simple_total(X: Truncated, qmax: int) -> Total:
    if X.kind != SIMPLICIAL:
        raise ValueError("simple expects a simplicial object; use cosimple")
    if qmax > X.N - 1:
        raise TruncationError(f"qmax={qmax} needs truncation >= {qmax + 1}, got {X.N}")
    _check_positive(X)
    lay = simple_layout(X, qmax)
    bd = {n: boundary(X, n) for n in range(1, X.N + 1)}

    def arrows(key):
        n, p = key
        out = [((n, p - 1), X.objects[n].d(p))]
        if n >= 1:
            m = bd[n].at(p)
            out.append(((n - 1, p), -m if p % 2 else m))
        return out
    return Total(totalize(CHAIN, lay, arrows), lay, qmax)


def simple(X: Truncated, qmax: int) -> Complex:
    """Total complex of X in degrees 0..qmax+1; homology is exact in degrees <= qmax."""
    return simple_total(X, qmax).complex


def simple_map(f: SimplicialMap, qmax: int, src: Total | None = None,
               tgt: Total | None = None) -> ChainMap:
    src = src or simple_total(f.source, qmax)
    tgt = tgt or simple_total(f.target, qmax)
    return layout_map(src.complex, src.layout, tgt.complex, tgt.layout,
                      lambda key: [(key, f.comps[key[0]].at(key[1]))])


# cosimple of cosimplicial cochain complexes


def cosimple_layout(X: Truncated, qmax: int) -> Layout:
    blocks = {}
    for q in range(qmax + 1):
        blocks[q] = [((n, q - n), X.objects[n].dim(q - n)) for n in range(min(q, X.N) + 1)]
    return Layout(blocks)


def cosimple_total(X: Truncated, qmax: int) -> Total:
    if X.kind != COSIMPLICIAL:
        raise ValueError("cosimple expects a cosimplicial object")
    if qmax > X.N:
        raise TruncationError(f"qmax={qmax} exceeds truncation {X.N}")
    _check_positive(X)
    lay = cosimple_layout(X, qmax)
    bd = {n: boundary(X, n) for n in range(X.N)}

    def arrows(key):
        n, p = key
        out = [((n, p + 1), X.objects[n].d(p))]
        if n < X.N:
            m = bd[n].at(p)
            out.append(((n + 1, p), -m if p % 2 else m))
        return out
    return Total(totalize(COCHAIN, lay, arrows), lay, qmax - 1)


def cosimple(X: Truncated, qmax: int) -> Complex:
    """Cochain simple in degrees 0..qmax; cohomology is exact in degrees < qmax."""
    return cosimple_total(X, qmax).complex


def cosimple_map(f: SimplicialMap, qmax: int, src: Total | None = None,
                 tgt: Total | None = None) -> ChainMap:
    src = src or cosimple_total(f.source, qmax)
    tgt = tgt or cosimple_total(f.target, qmax)
    return layout_map(src.complex, src.layout, tgt.complex, tgt.layout,
                      lambda key: [(key, f.comps[key[0]].at(key[1]))])


def total_of(X: Truncated, qmax: int) -> Total:
    return simple_total(X, qmax) if X.kind == SIMPLICIAL else cosimple_total(X, qmax)


def total_map(f: SimplicialMap, qmax: int, src: Total | None = None,
              tgt: Total | None = None) -> ChainMap:
    if f.source.kind == SIMPLICIAL:
        return simple_map(f, qmax, src, tgt)
    return cosimple_map(f, qmax, src, tgt)


def trusted_degrees(X: Truncated, qmax: int) -> range:
    return range(0, qmax + 1) if X.kind == SIMPLICIAL else range(0, qmax)


# normalization


class Quotient:
    """Quotient of a complex by a graded subcomplex, with projection and lift."""

    def __init__(self, total: Total, sub: Callable):
        c, lay = total.complex, total.layout
        P, C = {}, {}
        dims = {}
        for q in lay.size:
            ps, cs = [], []
            for key, size in lay.blocks[q]:
                p, s = quotient_pair(size, sub(key))
                ps.append(p)
                cs.append(s)
            P[q] = block_diag(ps)
            C[q] = block_diag(cs)
            dims[q] = P[q].rows
        step = c.step
        diff = {q: P.get(q + step, Mat(0, c.dim(q + step))) @ c.d(q) @ C[q] for q in lay.size}
        self.complex = Complex(c.direction, dims, diff, check=False)
        self.proj = ChainMap(c, self.complex, P)
        self.lift = C  # degreewise section of the projection (not a chain map in general)
        self.total = total


class Sub:
    """Graded subcomplex spanned blockwise, with inclusion."""

    def __init__(self, total: Total, basis: Callable):
        c, lay = total.complex, total.layout
        B = {}
        dims = {}
        for q in lay.size:
            B[q] = block_diag([basis(key) if size else Mat(0, 0) for key, size in lay.blocks[q]])
            dims[q] = B[q].cols
        step = c.step
        diff = {}
        for q in lay.size:
            if (q + step) not in B:
                continue
            img = c.d(q) @ B[q]
            diff[q] = coordinates(B[q + step], img)
        self.complex = Complex(c.direction, dims, diff, check=False)
        self.incl = ChainMap(self.complex, c, {q: B[q] for q in B})
        self.total = total


def degenerate_subspace(X: Truncated, key) -> Mat:
    n, p = key
    dim = X.objects[n].dim(p)
    if X.kind == SIMPLICIAL:
        if n == 0:
            return Mat(dim, 0)
        return span_sum([X.degens[(n - 1, j)].at(p) for j in range(n)], dim)
    raise ValueError("degenerate subspace is defined for simplicial objects")


def normalized_simple(X: Truncated, qmax: int):
    """Simplicial: quotient sX/DX (returns Quotient).  Cosimplicial: ∩ ker s^j (returns Sub)."""
    tot = total_of(X, qmax)
    if X.kind == SIMPLICIAL:
        return Quotient(tot, lambda key: degenerate_subspace(X, key))
    return Sub(tot, lambda key: conormal_basis(X, key))


def conormal_basis(X: Truncated, key) -> Mat:
    n, p = key
    dim = X.objects[n].dim(p)
    if n == 0:
        return Mat.identity(dim)
    stacked = [X.degens[(n - 1, j)].at(p) for j in range(n)]
    from .linalg import vstack
    return kernel_basis(vstack(stacked, cols=dim))


def moore_section(X: Truncated, qmax: int, q: Quotient | None = None) -> ChainMap:
    """Chain section sN X -> sX through the Moore complex ∩_{i>=1} ker d_i."""
    from .linalg import vstack
    q = q or normalized_simple(X, qmax)
    tot = q.total
    lay = tot.layout
    comps = {}
    for deg in lay.size:
        ms = []
        for (n, p), size in lay.blocks[deg]:
            if n == 0:
                ms.append(Mat.identity(size))
            else:
                ms.append(kernel_basis(vstack([X.faces[(n, i)].at(p) for i in range(1, n + 1)],
                                              cols=size)))
        M = block_diag(ms)
        PM = q.proj.at(deg) @ M
        comps[deg] = M @ inverse(PM)
    return ChainMap(q.complex, tot.complex, comps)


def conormal_retraction(X: Truncated, qmax: int, sub: Sub | None = None) -> ChainMap:
    """Retraction sX -> s_N X, projecting along Σ_{i>=1} im d^i."""
    sub = sub or normalized_simple(X, qmax)
    tot = sub.total
    comps = {}
    for deg in tot.layout.size:
        rs = []
        for (n, p), size in tot.layout.blocks[deg]:
            B = conormal_basis(X, (n, p))
            if n == 0:
                rs.append(Mat.identity(size))
                continue
            D = span_sum([X.faces[(n, i)].at(p) for i in range(1, n + 1)], size)
            full = hstack([B, D], rows=size)
            rs.append(inverse(full).submatrix(range(B.cols), range(size)))
        comps[deg] = block_diag(rs)
    return ChainMap(tot.complex, sub.complex, comps)


# λ and ρ


def lambda_rho(A: Complex, N: int, qmax: int):
    """(λ_A, ρ_A, total) for the constant object A×Δ.

    Chain: λ projects s(A×Δ) onto its n = 0 block, ρ includes it, λ∘ρ = id.
    Cochain: λ includes A as the n = 0 block, ρ projects, ρ∘λ = id.
    """
    kind = SIMPLICIAL if A.direction == CHAIN else COSIMPLICIAL
    X = constant(A, N, kind)
    tot = total_of(X, qmax)
    lay = tot.layout
    inc = {}
    for q in lay.size:
        if (0, q) in lay:
            off = lay.offset[(0, q)]
            inc[q] = Mat.from_entries(lay.size[q], A.dim(q), {(off + k, k): 1 for k in range(A.dim(q))})
        else:
            inc[q] = Mat(lay.size[q], A.dim(q))
    Ar = A.truncate(0, max(lay.size))
    into = ChainMap(Ar, tot.complex, inc)
    out = ChainMap(tot.complex, Ar, {q: m.T for q, m in inc.items()})
    if A.direction == CHAIN:
        return out, into, tot
    return into, out, tot


# bisimplicial: iterated and diagonal simples, AW and shuffle maps


def iterated_layout(Z: Bisimplicial, qmax: int) -> Layout:
    blocks = {}
    for t in range(qmax + 2):
        lst = []
        for i in range(min(t, Z.N) + 1):
            for j in range(min(t - i, Z.N) + 1):
                q = t - i - j
                lst.append(((i, j, q), Z.objects[(i, j)].dim(q)))
        blocks[t] = lst
    return Layout(blocks)


def iterated_simple_total(Z: Bisimplicial, qmax: int) -> Total:
    """s(n ↦ s(m ↦ Z_{n,m})): on Z_{i,j,q}, d = d_Z + (-1)^q ∂_col + (-1)^{j+q} ∂_row."""
    if qmax > Z.N - 1:
        raise TruncationError(f"qmax={qmax} needs truncation >= {qmax + 1}")
    lay = iterated_layout(Z, qmax)
    rb = {}
    cb = {}
    for n in range(Z.N + 1):
        for m in range(Z.N + 1):
            if n >= 1:
                acc = None
                for i in range(n + 1):
                    f = Z.hfaces[(n, m, i)]
                    acc = f if acc is None else (acc - f if i % 2 else acc + f)
                rb[(n, m)] = acc
            if m >= 1:
                acc = None
                for i in range(m + 1):
                    f = Z.vfaces[(n, m, i)]
                    acc = f if acc is None else (acc - f if i % 2 else acc + f)
                cb[(n, m)] = acc

    def arrows(key):
        i, j, q = key
        out = [((i, j, q - 1), Z.objects[(i, j)].d(q))]
        if j >= 1:
            m = cb[(i, j)].at(q)
            out.append(((i, j - 1, q), -m if q % 2 else m))
        if i >= 1:
            m = rb[(i, j)].at(q)
            out.append(((i - 1, j, q), -m if (j + q) % 2 else m))
        return out
    return Total(totalize(CHAIN, lay, arrows), lay, qmax)


def iterated_degenerate(Z: Bisimplicial, key) -> Mat:
    i, j, q = key
    dim = Z.objects[(i, j)].dim(q)
    ms = [Z.hdegens[(i - 1, j, k)].at(q) for k in range(i)]
    ms += [Z.vdegens[(i, j - 1, k)].at(q) for k in range(j)]
    return span_sum(ms, dim)


def iterated_normalized(Z: Bisimplicial, qmax: int, tot: Total | None = None) -> Quotient:
    tot = tot or iterated_simple_total(Z, qmax)
    return Quotient(tot, lambda key: iterated_degenerate(Z, key))


def _compose(maps: list[ChainMap], start: Complex) -> ChainMap:
    acc = identity_map(start)
    for m in maps:
        acc = m @ acc
    return acc


def aw_component(Z: Bisimplicial, p: int, j: int) -> ChainMap:
    """Z_{p,p} -> Z_{i,j}, i = p-j: back face (d_0 j times) on the first index,
    front face (d_p, ..., d_{j+1}) on the second."""
    maps = [Z.vfaces[(p, m, m)] for m in range(p, j, -1)]
    maps += [Z.hfaces[(n, j, 0)] for n in range(p, p - j, -1)]
    return _compose(maps, Z.objects[(p, p)])


def aw_map(Z: Bisimplicial, qmax: int, diag: Total | None = None,
           it: Total | None = None) -> ChainMap:
    """Alexander–Whitney map s(DZ) -> ssZ."""
    diag = diag or simple_total(diagonal(Z), qmax)
    it = it or iterated_simple_total(Z, qmax)
    comps = {p: {j: aw_component(Z, p, j) for j in range(p + 1)} for p in range(Z.N + 1)}

    def arrows(key):
        p, q = key
        return [((p - j, j, q), comps[p][j].at(q)) for j in range(p + 1)]
    return layout_map(diag.complex, diag.layout, it.complex, it.layout, arrows)


def shuffles(i: int, j: int) -> list[tuple[tuple[int, ...], tuple[int, ...], int]]:
    """(α, β, sign): α of size j and β of size i partition {0..i+j-1}; lexicographic in α.

    The sign is the parity of the permutation listing α then β.
    """
    p = i + j
    out = []
    for alpha in itertools.combinations(range(p), j):
        aset = set(alpha)
        beta = tuple(x for x in range(p) if x not in aset)
        perm = alpha + beta
        inv = sum(1 for a in range(p) for b in range(a + 1, p) if perm[a] > perm[b])
        out.append((alpha, beta, -1 if inv % 2 else 1))
    return out


def shuffle_component(Z: Bisimplicial, i: int, j: int) -> ChainMap:
    """Z_{i,j} -> Z_{p,p}, p = i+j: Σ ε(α,β) (s_{α_j}..s_{α_1}, s_{β_i}..s_{β_1})."""
    acc = None
    for alpha, beta, sign in shuffles(i, j):
        maps = []
        n = i
        for a in alpha:
            maps.append(Z.hdegens[(n, j, a)])
            n += 1
        m = j
        for b in beta:
            maps.append(Z.vdegens[(n, m, b)])
            m += 1
        f = _compose(maps, Z.objects[(i, j)])
        if sign < 0:
            f = -f
        acc = f if acc is None else acc + f
    return acc


def shuffle_map(Z: Bisimplicial, qmax: int, diag: Total | None = None,
                it: Total | None = None) -> ChainMap:
    """Eilenberg–Zilber shuffle map ssZ -> s(DZ)."""
    diag = diag or simple_total(diagonal(Z), qmax)
    it = it or iterated_simple_total(Z, qmax)
    comps = {}
    for i in range(Z.N + 1):
        for j in range(Z.N + 1 - i):
            comps[(i, j)] = shuffle_component(Z, i, j)

    def arrows(key):
        i, j, q = key
        if (i, j) not in comps:
            return []
        return [((i + j, q), comps[(i, j)].at(q))]
    return layout_map(it.complex, it.layout, diag.complex, diag.layout, arrows)


def iterated_simple_map(f: BisimplicialMap, qmax: int, src: Total | None = None,
                        tgt: Total | None = None) -> ChainMap:
    src = src or iterated_simple_total(f.source, qmax)
    tgt = tgt or iterated_simple_total(f.target, qmax)
    return layout_map(src.complex, src.layout, tgt.complex, tgt.layout,
                      lambda key: [(key, f.comps[key[:2]].at(key[2]))])


def diagonal_map(f: BisimplicialMap) -> SimplicialMap:
    D1, D2 = diagonal(f.source), diagonal(f.target)
    return SimplicialMap(D1, D2, [f.comps[(n, n)] for n in range(f.source.N + 1)])


def aw_shuffle_normalized_identity(Z: Bisimplicial, qmax: int) -> bool:
    """P ∘ AW ∘ ∇ ∘ C = I on the iterated normalized simple (degrees <= qmax)."""
    diag = simple_total(diagonal(Z), qmax)
    it = iterated_simple_total(Z, qmax)
    aw = aw_map(Z, qmax, diag, it)
    nab = shuffle_map(Z, qmax, diag, it)
    qn = iterated_normalized(Z, qmax, it)
    for q in range(qmax + 1):
        comp = qn.proj.at(q) @ aw.at(q) @ nab.at(q) @ qn.lift[q]
        if comp != Mat.identity(comp.rows):
            return False
    return True


# λ/μ compatibility


def lambda_mu_composites(X: Truncated, qmax: int) -> tuple[ChainMap, ChainMap, Total]:
    """The two composites sX -> sX built from λ and μ = AW.

    First: λ_{sX} ∘ μ_{Δ×X}; second: s(λ_X) ∘ μ_{X×Δ}.  Both are read off the
    n = 0 (resp. m = 0) blocks of the iterated simple.
    """
    from .simplicial import constant_columns, constant_rows
    tot = simple_total(X, qmax)
    out = []
    for Z, keep in ((constant_columns(X), lambda key: key[0] == 0),
                    (constant_rows(X), lambda key: key[1] == 0)):
        diag = simple_total(diagonal(Z), qmax)
        it = iterated_simple_total(Z, qmax)
        mu = aw_map(Z, qmax, diag, it)
        # projection of the iterated simple onto the surviving blocks, relabelled as sX blocks
        def arrows(key, keep=keep):
            if not keep(key):
                return []
            i, j, q = key
            n = j if key[0] == 0 else i
            return [((n, q), Mat.identity(Z.objects[(i, j)].dim(q)))]
        lam = layout_map(it.complex, it.layout, tot.complex, tot.layout, arrows)
        # s(DZ) = sX on the nose since D(Δ×X) = D(X×Δ) = X
        comp = lam @ mu
        out.append(ChainMap(tot.complex, tot.complex, comp.comps))
    return out[0], out[1], tot


# Künneth morphism for cosimplicial cochain complexes


def tensor_cosimplicial(X: Truncated, Y: Truncated) -> Truncated:
    from .complexes import tensor_maps
    N = X.N
    objs = [tensor(X.objects[n], Y.objects[n]) for n in range(N + 1)]
    faces = {k: ChainMap(objs[k[0] - 1], objs[k[0]], tensor_maps(X.faces[k], Y.faces[k]).comps)
             for k in X.faces}
    degens = {k: ChainMap(objs[k[0] + 1], objs[k[0]], tensor_maps(X.degens[k], Y.degens[k]).comps)
              for k in X.degens}
    return Truncated(COSIMPLICIAL, N, objs, faces, degens)


def _coface_word(X: Truncated, start: int, indices: Iterable[int]) -> ChainMap:
    """Apply cofaces d^{i_1}, then d^{i_2}, ... starting in degree start."""
    acc = identity_map(X.objects[start])
    n = start
    for i in indices:
        acc = X.faces[(n + 1, i)] @ acc
        n += 1
    return acc


def kunneth(X: Truncated, Y: Truncated, qmax: int):
    """k: sX ⊗ sY -> s(X⊗Y) (degrees <= qmax) with the sign (-1)^{i(t+s)}.

    On X^{i,j} ⊗ Y^{s,t}: X(d^0 applied s times) ⊗ Y(d^{s+1}, ..., d^{i+s}).
    Returns (k, source, sX total, sY total, s(X⊗Y) total).
    """
    SX, SY = cosimple_total(X, qmax), cosimple_total(Y, qmax)
    XY = tensor_cosimplicial(X, Y)
    SXY = cosimple_total(XY, qmax)
    src = tensor(SX.complex, SY.complex).truncate(0, qmax)
    slay = tensor_layout(SX.complex, SY.complex)
    ent: dict = {q: {} for q in range(qmax + 1)}
    for (a, b), toff in slay.items():
        if a + b > qmax:
            continue
        db = SX.complex.dim(a), SY.complex.dim(b)
        for (i, j), _ in SX.layout.blocks.get(a, []):
            xo = SX.layout.offset[(i, j)]
            for (s, t), _ in SY.layout.blocks.get(b, []):
                yo = SY.layout.offset[(s, t)]
                n = i + s
                xop = _coface_word(X, i, [0] * s).at(j)
                yop = _coface_word(Y, s, range(s + 1, i + s + 1)).at(t)
                sign = -1 if (i * (t + s)) % 2 else 1
                inner = tensor_layout(X.objects[n], Y.objects[n])[(j, t)]
                tgt_off = SXY.layout.offset[(n, j + t)] + inner
                ydim_n = Y.objects[n].dim(t)
                for xr, xc, xv in xop.entries():
                    for yr, yc, yv in yop.entries():
                        col = toff + (xo + xc) * db[1] + (yo + yc)
                        row = tgt_off + xr * ydim_n + yr
                        ent[a + b][(row, col)] = ent[a + b].get((row, col), 0) + sign * xv * yv
    comps = {q: Mat.from_entries(SXY.complex.dim(q), src.dim(q), e) for q, e in ent.items()}
    return ChainMap(src, SXY.complex, comps), SX, SY, SXY


# differential graded algebras


class DgaError(ValueError):
    pass


class Dga:
    """Positive cochain complex with unit and multiplication tables.

    ``mult[(a, b)]`` has shape (dim_{a+b}, dim_a * dim_b); basis x⊗y sits at x*dim_b + y.
    """

    def __init__(self, complex_: Complex, unit: list, mult: dict, name: str = ""):
        if complex_.direction != COCHAIN:
            raise DgaError("dgas are cochain complexes")
        self.complex = complex_
        self.unit = Mat.from_columns(complex_.dim(0), [list(unit)]) if complex_.dim(0) else Mat(0, 1)
        self.mult = {}
        for (a, b), m in mult.items():
            if m.shape != (complex_.dim(a + b), complex_.dim(a) * complex_.dim(b)):
                raise DgaError(f"multiplication table {(a, b)} has wrong shape")
            self.mult[(a, b)] = m
        self.name = name

    def m(self, a: int, b: int) -> Mat:
        c = self.complex
        return self.mult.get((a, b), Mat(c.dim(a + b), c.dim(a) * c.dim(b)))

    def degrees(self) -> list[int]:
        return self.complex.degrees()

    def product(self, a: int, x: Mat, b: int, y: Mat) -> Mat:
        from .linalg import kron
        return self.m(a, b) @ kron(x, y)

    def mult_map(self, top: int | None = None) -> ChainMap:
        """μ: A⊗A -> A as a ChainMap (truncated to degrees <= top)."""
        A = self.complex
        top = 2 * max(A.degrees(), default=0) if top is None else top
        src = tensor(A, A).truncate(0, top)
        lay = tensor_layout(A, A)
        ent: dict = {}
        for (a, b), off in lay.items():
            if a + b > top:
                continue
            for r, c, v in self.m(a, b).entries():
                ent.setdefault(a + b, {})[(r, off + c)] = v
        comps = {q: Mat.from_entries(A.dim(q), src.dim(q), ent.get(q, {})) for q in src.dims}
        return ChainMap(src, A.truncate(0, top), comps)

    def audit(self, top: int | None = None) -> list[str]:
        bad = []
        A = self.complex
        degs = [q for q in A.degrees() if top is None or q <= top]
        for a in degs:
            I = Mat.identity(A.dim(a))
            if self.product(0, self.unit, a, I) != I or self.product(a, I, 0, self.unit) != I:
                bad.append(f"unit law fails in degree {a}")
        for a in degs:
            for b in degs:
                for c in degs:
                    if top is not None and a + b + c > top:
                        continue
                    for x in range(A.dim(a)):
                        for y in range(A.dim(b)):
                            ex = Mat.from_entries(A.dim(a), 1, {(x, 0): 1})
                            ey = Mat.from_entries(A.dim(b), 1, {(y, 0): 1})
                            xy = self.product(a, ex, b, ey)
                            for z in range(A.dim(c)):
                                ez = Mat.from_entries(A.dim(c), 1, {(z, 0): 1})
                                if (self.product(a + b, xy, c, ez)
                                        != self.product(a, ex, b + c, self.product(b, ey, c, ez))):
                                    bad.append(f"associativity fails at {(a, b, c)}")
                                    break
        if not self.mult_map(top if top is not None else None).is_chain_map():
            bad.append("Leibniz rule fails")
        return bad


class CosimplicialDga:
    def __init__(self, obj: Truncated, algebras: list[Dga]):
        if obj.kind != COSIMPLICIAL:
            raise DgaError("expected a cosimplicial object")
        self.obj = obj
        self.algebras = algebras

    def audit(self) -> list[str]:
        """Structure maps must be algebra maps."""
        bad = []
        X = self.obj
        for key, f in list(X.faces.items()) + list(X.degens.items()):
            s_alg = self.algebras[_cos_src(key, key in X.faces)]
            t_alg = self.algebras[_cos_tgt(key, key in X.faces)]
            if f.at(0) @ s_alg.unit != t_alg.unit:
                bad.append(f"map {key} does not preserve units")
            from .complexes import tensor_maps
            lhs = f @ s_alg.mult_map()
            rhs = t_alg.mult_map() @ tensor_maps(f, f)
            if lhs != ChainMap(lhs.source, lhs.target, rhs.comps):
                bad.append(f"map {key} is not multiplicative")
        return bad


def _cos_src(key, is_face):
    n = key[0]
    return n - 1 if is_face else n + 1


def _cos_tgt(key, is_face):
    return key[0]


def constant_dga(A: Dga, N: int) -> CosimplicialDga:
    return CosimplicialDga(constant(A.complex, N, COSIMPLICIAL), [A] * (N + 1))


def dga_simple_aw(A: CosimplicialDga, qmax: int) -> tuple[Dga, Sub]:
    """Normalized cosimple of UA with product s_N(τ) ∘ k, in degrees <= qmax."""
    X = A.obj
    sub = normalized_simple(X, qmax)
    k, SX, _, SXY = kunneth(X, X, qmax)
    # s(τ): s(X⊗X) -> sX degreewise multiplication
    taus = [alg.mult_map() for alg in A.algebras]
    tau = layout_map(SXY.complex, SXY.layout, SX.complex, SX.layout,
                     lambda key: [(key, _restrict_mult(taus[key[0]], key[1]))])
    prod = tau @ k
    lay = tensor_layout(SX.complex, SX.complex)
    Nc = sub.complex
    mult = {}
    from .linalg import kron
    for a in Nc.dims:
        for b in Nc.dims:
            if a + b > qmax:
                continue
            Ba, Bb = sub.incl.at(a), sub.incl.at(b)
            off = lay[(a, b)]
            block = prod.at(a + b).submatrix(range(SX.complex.dim(a + b)),
                                             range(off, off + Ba.rows * Bb.rows))
            img = block @ kron(Ba, Bb)
            try:
                coords = coordinates(sub.incl.at(a + b), img)
            except ValueError as exc:
                raise DgaError("product leaves the normalized subcomplex") from exc
            mult[(a, b)] = coords
    base = A.algebras[0]
    unit_full = Mat.from_entries(SX.complex.dim(0), 1,
                                 {(SX.layout.offset[(0, 0)] + r, 0): v for r, _, v in base.unit.entries()}) \
        if SX.complex.dim(0) else Mat(0, 1)
    u = coordinates(sub.incl.at(0), unit_full) if Nc.dim(0) else Mat(0, 1)
    unit = [u.get(r, 0) for r in range(u.rows)]
    return Dga(Nc, unit, mult, name=f"s_AW({base.name})"), sub


def _restrict_mult(mm: ChainMap, q: int) -> Mat:
    return mm.at(q)
