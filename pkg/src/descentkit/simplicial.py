"""Truncated simplicial, cosimplicial and bisimplicial objects.

Objects are Complexes (a vector space is a complex concentrated in degree 0).
Structure maps are ChainMaps.  Keys are chosen so that both variances share
one convention: ``faces[(n, i)]`` joins degrees n and n-1, ``degens[(n, j)]``
joins degrees n and n+1.  For a simplicial object the arrows go
X_n -> X_{n-1} and X_n -> X_{n+1}; for a cosimplicial one they are the
coface X^{n-1} -> X^n and the codegeneracy X^{n+1} -> X^n.
"""
from __future__ import annotations

import itertools
from typing import Callable, Sequence

from .complexes import (CHAIN, ChainMap, Complex, direct_sum, identity_map, map_sum,
                        sum_inclusions, zero_complex, zero_map)
from .linalg import Mat, blocks

SIMPLICIAL = "simplicial"
COSIMPLICIAL = "cosimplicial"


class TruncationError(ValueError):
    pass


class SimplicialIdentityError(ValueError):
    pass


class Truncated:
    """An N-truncated (co)simplicial object in complexes."""

    def __init__(self, kind: str, N: int, objects: Sequence[Complex], faces: dict,
                 degens: dict, check: bool = False):
        if kind not in (SIMPLICIAL, COSIMPLICIAL):
            raise ValueError(kind)
        if len(objects) != N + 1:
            raise TruncationError("need objects in degrees 0..N")
        self.kind = kind
        self.N = N
        self.objects = list(objects)
        self.faces = dict(faces)
        self.degens = dict(degens)
        if check:
            bad = audit(self)
            if bad:
                raise SimplicialIdentityError(bad[0])

    @property
    def direction(self) -> str:
        return self.objects[0].direction

    def __getitem__(self, n: int) -> Complex:
        return self.objects[n]

    def face(self, n: int, i: int) -> ChainMap:
        return self.faces[(n, i)]

    def degen(self, n: int, j: int) -> ChainMap:
        return self.degens[(n, j)]

    def comp(self, a: ChainMap, b: ChainMap) -> ChainMap:
        # composite "a after b" in the simplicial reading
        return a @ b if self.kind == SIMPLICIAL else b @ a

    def truncate(self, N: int) -> "Truncated":
        if N > self.N:
            raise TruncationError("cannot raise truncation")
        return Truncated(self.kind, N, self.objects[:N + 1],
                         {k: v for k, v in self.faces.items() if k[0] <= N},
                         {k: v for k, v in self.degens.items() if k[0] < N})

    def face_maps_to_json(self):
        from .linalg import mat_to_json
        return {f"{n},{i}": {str(q): mat_to_json(m) for q, m in sorted(f.comps.items())}
                for (n, i), f in sorted(self.faces.items())}

    def to_json(self) -> dict:
        from .linalg import mat_to_json

        def enc(d):
            return {f"{n},{i}": {str(q): mat_to_json(m) for q, m in sorted(f.comps.items())}
                    for (n, i), f in sorted(d.items())}
        return {"kind": self.kind, "N": self.N,
                "objects": [c.to_json() for c in self.objects],
                "faces": enc(self.faces), "degeneracies": enc(self.degens)}

    @classmethod
    def from_json(cls, obj: dict, check: bool = True) -> "Truncated":
        from .complexes import SchemaError
        from .linalg import mat_from_json
        try:
            kind = obj.get("kind", SIMPLICIAL)
            N = int(obj["N"])
            objs = [Complex.from_json(c) for c in obj["objects"]]
            if len(objs) != N + 1:
                raise SchemaError("object count does not match N")

            def dec(d, is_face):
                out = {}
                for key, comps in d.items():
                    n, i = (int(x) for x in key.split(","))
                    if kind == SIMPLICIAL:
                        src, tgt = (n, n - 1) if is_face else (n, n + 1)
                    else:
                        src, tgt = (n - 1, n) if is_face else (n + 1, n)
                    s, t = objs[src], objs[tgt]
                    out[(n, i)] = ChainMap(s, t, {int(q): mat_from_json(r, t.dim(int(q)), s.dim(int(q)))
                                                  for q, r in comps.items()})
                return out
            faces = dec(obj["faces"], True)
            degens = dec(obj["degeneracies"], False)
        except (KeyError, ValueError, TypeError, IndexError) as exc:
            if isinstance(exc, SchemaError):
                raise
            raise SchemaError(f"malformed truncated object: {exc}") from exc
        return cls(kind, N, objs, faces, degens, check=check)


def TruncSimplicial(N, objects, faces, degens, check=False) -> Truncated:
    return Truncated(SIMPLICIAL, N, objects, faces, degens, check)


def TruncCosimplicial(N, objects, faces, degens, check=False) -> Truncated:
    return Truncated(COSIMPLICIAL, N, objects, faces, degens, check)


def _src_tgt(kind: str, n: int, is_face: bool) -> tuple[int, int]:
    if kind == SIMPLICIAL:
        return (n, n - 1) if is_face else (n, n + 1)
    return (n - 1, n) if is_face else (n + 1, n)


def face_keys(N: int):
    for n in range(1, N + 1):
        for i in range(n + 1):
            yield (n, i)


def degen_keys(N: int):
    for n in range(N):
        for j in range(n + 1):
            yield (n, j)


def audit(X: Truncated) -> list[str]:
    """Simplicial identities that fail (empty list when all hold bit-exactly)."""
    bad = []
    F, D, c = X.faces, X.degens, X.comp
    N = X.N
    for key in face_keys(N):
        if key not in F:
            bad.append(f"missing face {key}")
    for key in degen_keys(N):
        if key not in D:
            bad.append(f"missing degeneracy {key}")
    if bad:
        return bad
    for n in range(2, N + 1):
        for j in range(n + 1):
            for i in range(j):
                if c(F[(n - 1, i)], F[(n, j)]) != c(F[(n - 1, j - 1)], F[(n, i)]):
                    bad.append(f"d{i} d{j} = d{j - 1} d{i} in degree {n}")
    for n in range(N):
        for j in range(n + 1):
            for i in range(n + 2):
                lhs = c(F[(n + 1, i)], D[(n, j)])
                if i in (j, j + 1):
                    ok = lhs == identity_map(X.objects[n])
                elif i < j:
                    ok = lhs == c(D[(n - 1, j - 1)], F[(n, i)])
                else:
                    ok = lhs == c(D[(n - 1, j)], F[(n, i - 1)])
                if not ok:
                    bad.append(f"d{i} s{j} relation in degree {n}")
    for n in range(N - 1):
        for j in range(n + 1):
            for i in range(j + 1):
                if c(D[(n + 1, i)], D[(n, j)]) != c(D[(n + 1, j + 1)], D[(n, i)]):
                    bad.append(f"s{i} s{j} = s{j + 1} s{i} in degree {n}")
    return bad


class SimplicialMap:
    """Degreewise chain maps commuting with the structure maps."""

    def __init__(self, source: Truncated, target: Truncated, comps: Sequence[ChainMap]):
        if source.N != target.N or source.kind != target.kind:
            raise TruncationError("source/target truncation or variance mismatch")
        self.source = source
        self.target = target
        self.comps = list(comps)

    def __getitem__(self, n: int) -> ChainMap:
        return self.comps[n]

    def is_natural(self) -> bool:
        X, Y = self.source, self.target
        for key in face_keys(X.N):
            s, t = _src_tgt(X.kind, key[0], True)
            if Y.faces[key] @ self.comps[s] != self.comps[t] @ X.faces[key]:
                return False
        for key in degen_keys(X.N):
            s, t = _src_tgt(X.kind, key[0], False)
            if Y.degens[key] @ self.comps[s] != self.comps[t] @ X.degens[key]:
                return False
        return all(f.is_chain_map() for f in self.comps)

    def __matmul__(self, other: "SimplicialMap") -> "SimplicialMap":
        return SimplicialMap(other.source, self.target,
                             [a @ b for a, b in zip(self.comps, other.comps)])

    def __add__(self, other: "SimplicialMap") -> "SimplicialMap":
        return SimplicialMap(self.source, self.target,
                             [a + b for a, b in zip(self.comps, other.comps)])


def identity_smap(X: Truncated) -> SimplicialMap:
    return SimplicialMap(X, X, [identity_map(c) for c in X.objects])


def zero_smap(X: Truncated, Y: Truncated) -> SimplicialMap:
    return SimplicialMap(X, Y, [zero_map(a, b) for a, b in zip(X.objects, Y.objects)])


def is_degreewise(f: SimplicialMap, pred: Callable[[ChainMap], bool]) -> bool:
    return all(pred(c) for c in f.comps)


# basic constructions


def constant(A: Complex, N: int, kind: str = SIMPLICIAL) -> Truncated:
    """A×Δ: A in every degree, all structure maps identities."""
    idm = identity_map(A)
    return Truncated(kind, N, [A] * (N + 1),
                     {k: idm for k in face_keys(N)}, {k: idm for k in degen_keys(N)})


def constant_map(f: ChainMap, N: int, kind: str = SIMPLICIAL) -> SimplicialMap:
    return SimplicialMap(constant(f.source, N, kind), constant(f.target, N, kind),
                         [f] * (N + 1))


def zero_object(N: int, kind: str = SIMPLICIAL, direction: str = CHAIN) -> Truncated:
    return constant(zero_complex(direction), N, kind)


def sum_objects(*Xs: Truncated) -> Truncated:
    X0 = Xs[0]
    objs = [direct_sum(*[X.objects[n] for X in Xs]) for n in range(X0.N + 1)]
    faces = {}
    degens = {}
    for key in face_keys(X0.N):
        faces[key] = map_sum([X.faces[key] for X in Xs])
        s, t = _src_tgt(X0.kind, key[0], True)
        faces[key] = ChainMap(objs[s], objs[t], faces[key].comps)
    for key in degen_keys(X0.N):
        s, t = _src_tgt(X0.kind, key[0], False)
        degens[key] = ChainMap(objs[s], objs[t], map_sum([X.degens[key] for X in Xs]).comps)
    return Truncated(X0.kind, X0.N, objs, faces, degens)


def sum_smaps(*fs: SimplicialMap) -> SimplicialMap:
    S = sum_objects(*[f.source for f in fs])
    T = sum_objects(*[f.target for f in fs])
    comps = []
    for n in range(S.N + 1):
        m = map_sum([f.comps[n] for f in fs])
        comps.append(ChainMap(S.objects[n], T.objects[n], m.comps))
    return SimplicialMap(S, T, comps)


def sum_injections(Xs: Sequence[Truncated], total: Truncated) -> list[SimplicialMap]:
    per_degree = [sum_inclusions([X.objects[n] for X in Xs], total.objects[n])
                  for n in range(total.N + 1)]
    return [SimplicialMap(X, total, [per_degree[n][k] for n in range(total.N + 1)])
            for k, X in enumerate(Xs)]


def inverse_order(X: Truncated) -> Truncated:
    """Reverse the order of vertices: d_i ↦ d_{n-i}, s_j ↦ s_{n-j}."""
    faces = {}
    degens = {}
    for (n, i) in face_keys(X.N):
        faces[(n, i)] = X.faces[(n, n - i)]
    for (n, j) in degen_keys(X.N):
        degens[(n, j)] = X.degens[(n, n - j)]
    return Truncated(X.kind, X.N, X.objects, faces, degens)


def inverse_order_map(f: SimplicialMap) -> SimplicialMap:
    return SimplicialMap(inverse_order(f.source), inverse_order(f.target), f.comps)


# finite simplicial sets


def surjections(n: int, k: int) -> list[tuple[int, ...]]:
    """Monotone surjections [n] -> [k] as value tuples, in lexicographic order."""
    out = []
    for jumps in itertools.combinations(range(1, n + 1), k):
        seq = []
        v = 0
        js = set(jumps)
        for t in range(n + 1):
            if t in js:
                v += 1
            seq.append(v)
        out.append(tuple(seq))
    return sorted(out)


def monotone_maps(n: int, k: int) -> list[tuple[int, ...]]:
    """All monotone maps [n] -> [k], lexicographic."""
    return sorted(tuple(t) for t in itertools.combinations_with_replacement(range(k + 1), n + 1))


def degeneracy_word(eta: Sequence[int]) -> list[int]:
    """Indices j (descending) with eta = s_{j_1} ... s_{j_m} applied to the cell."""
    return sorted((j for j in range(len(eta) - 1) if eta[j] == eta[j + 1]), reverse=True)


def _factor(seq: Sequence[int], k: int):
    """Epi-mono factorization of a monotone map [m] -> [k] given by values."""
    image = sorted(set(seq))
    relabel = {v: t for t, v in enumerate(image)}
    epi = tuple(relabel[v] for v in seq)
    return epi, tuple(image)


class FiniteSimplicialSet:
    """Simplicial set given by nondegenerate cells and their faces.

    A simplex is a pair (cell, eta) with eta a monotone surjection [n] ->> [dim cell]
    written as its value tuple; this is the canonical degeneracy normal form.
    """

    def __init__(self, cells: dict, faces: dict, name: str = ""):
        # cells: {dim: [names]}, faces: {name: [simplex d_0, ..., d_k]}
        self.name = name
        self.cells = {int(k): list(v) for k, v in cells.items()}
        self.dim_of = {c: k for k, cs in self.cells.items() for c in cs}
        self.order = {}
        for k in sorted(self.cells):
            for c in self.cells[k]:
                self.order[c] = len(self.order)
        self.cell_faces = {c: [(f[0], tuple(f[1])) for f in fs] for c, fs in faces.items()}
        self._cache: dict = {}
        self.validate()

    @property
    def dim(self) -> int:
        return max(self.cells) if self.cells else -1

    def validate(self) -> None:
        for c, k in self.dim_of.items():
            fs = self.cell_faces.get(c, [])
            if k == 0:
                if fs:
                    raise SimplicialIdentityError(f"vertex {c} has faces")
                continue
            if len(fs) != k + 1:
                raise SimplicialIdentityError(f"cell {c} needs {k + 1} faces")
            for f in fs:
                if f[0] not in self.dim_of or len(f[1]) != k or max(f[1]) != self.dim_of[f[0]]:
                    raise SimplicialIdentityError(f"bad face {f} of {c}")
        for c, k in self.dim_of.items():
            if k < 2:
                continue
            s = (c, tuple(range(k + 1)))
            for j in range(k + 1):
                for i in range(j):
                    if self.face(self.face(s, j), i) != self.face(self.face(s, i), j - 1):
                        raise SimplicialIdentityError(f"face identity fails on {c}")

    def simplices(self, n: int) -> list:
        if n in self._cache:
            return self._cache[n]
        out = []
        for k in sorted(self.cells):
            if k > n:
                continue
            sj = surjections(n, k)
            for c in self.cells[k]:
                for eta in sj:
                    out.append((c, eta))
        out.sort(key=lambda s: (self.order[s[0]], s[1]))
        self._cache[n] = out
        return out

    def index(self, n: int) -> dict:
        key = ("idx", n)
        if key not in self._cache:
            self._cache[key] = {s: t for t, s in enumerate(self.simplices(n))}
        return self._cache[key]

    def face(self, simplex, i: int):
        c, eta = simplex
        k = self.dim_of[c]
        seq = eta[:i] + eta[i + 1:]
        epi, image = _factor(seq, k)
        if len(image) == k + 1:
            return (c, epi)
        missing = next(v for v in range(k + 1) if v not in image)
        c2, eta2 = self.cell_faces[c][missing]
        return (c2, tuple(eta2[t] for t in epi))

    def degen(self, simplex, j: int):
        c, eta = simplex
        return (c, eta[:j + 1] + eta[j:])

    def is_degenerate(self, simplex) -> bool:
        return len(simplex[1]) != self.dim_of[simplex[0]] + 1

    def to_json(self) -> dict:
        return {"name": self.name,
                "cells": {str(k): v for k, v in sorted(self.cells.items())},
                "faces": {c: [[f[0], list(f[1])] for f in fs]
                          for c, fs in sorted(self.cell_faces.items())}}

    @classmethod
    def from_json(cls, obj: dict) -> "FiniteSimplicialSet":
        from .complexes import SchemaError
        try:
            cells = {int(k): list(v) for k, v in obj["cells"].items()}
            faces = {c: [(f[0], tuple(f[1])) for f in fs] for c, fs in obj.get("faces", {}).items()}
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"malformed simplicial set: {exc}") from exc
        return cls(cells, faces, obj.get("name", ""))


class SSetMap:
    """Map of finite simplicial sets given on nondegenerate cells."""

    def __init__(self, source: FiniteSimplicialSet, target: FiniteSimplicialSet, images: dict):
        self.source = source
        self.target = target
        self.images = {c: (s[0], tuple(s[1])) for c, s in images.items()}

    def __call__(self, simplex):
        c, eta = simplex
        c2, eta2 = self.images[c]
        return (c2, tuple(eta2[t] for t in eta))

    def is_simplicial(self) -> bool:
        for c, k in self.source.dim_of.items():
            s = (c, tuple(range(k + 1)))
            img = self(s)
            if len(img[1]) != k + 1:
                return False
            for i in range(k + 1 if k else 0):
                if self(self.source.face(s, i)) != self.target.face(img, i):
                    return False
        return True


def standard_simplex(k: int) -> FiniteSimplicialSet:
    cells: dict = {}
    faces = {}
    name = lambda sub: "".join(str(v) for v in sub)
    for m in range(k + 1):
        for sub in itertools.combinations(range(k + 1), m + 1):
            cells.setdefault(m, []).append(name(sub))
            if m:
                faces[name(sub)] = [(name(sub[:i] + sub[i + 1:]), tuple(range(m)))
                                    for i in range(m + 1)]
    return FiniteSimplicialSet(cells, faces, f"Delta[{k}]")


def boundary_simplex(k: int) -> FiniteSimplicialSet:
    full = standard_simplex(k)
    cells = {m: v for m, v in full.cells.items() if m < k}
    faces = {c: f for c, f in full.cell_faces.items() if full.dim_of[c] < k}
    return FiniteSimplicialSet(cells, faces, f"boundary Delta[{k}]")


def circle() -> FiniteSimplicialSet:
    return FiniteSimplicialSet({0: ["v"], 1: ["e"]}, {"e": [("v", (0,)), ("v", (0,))]}, "S1")


def point() -> FiniteSimplicialSet:
    return FiniteSimplicialSet({0: ["*"]}, {}, "point")


def disjoint_points(m: int) -> FiniteSimplicialSet:
    return FiniteSimplicialSet({0: [f"p{t}" for t in range(m)]}, {}, f"{m} points")


def disjoint_union(K: FiniteSimplicialSet, L: FiniteSimplicialSet) -> FiniteSimplicialSet:
    """K ⊔ L with cells renamed to 'a:'/'b:' prefixes."""
    cells: dict = {}
    faces = {}
    for pre, S in (("a:", K), ("b:", L)):
        for k, cs in sorted(S.cells.items()):
            cells.setdefault(k, []).extend(pre + c for c in cs)
        for c, fs in S.cell_faces.items():
            faces[pre + c] = [(pre + f[0], f[1]) for f in fs]
    return FiniteSimplicialSet(cells, faces, f"{K.name} + {L.name}")


def collapse_map(source: FiniteSimplicialSet, target: FiniteSimplicialSet,
                 images: dict) -> SSetMap:
    return SSetMap(source, target, images)


def linearize(K: FiniteSimplicialSet, N: int) -> Truncated:
    """Free vector spaces on the simplices of K (the functor L)."""
    objs = [Complex(CHAIN, {0: len(K.simplices(n))}, {}, check=False) for n in range(N + 1)]
    faces = {}
    degens = {}
    for (n, i) in face_keys(N):
        idx = K.index(n - 1)
        ent = {(idx[K.face(s, i)], t): 1 for t, s in enumerate(K.simplices(n))}
        faces[(n, i)] = ChainMap(objs[n], objs[n - 1],
                                 {0: Mat.from_entries(objs[n - 1].dim(0), objs[n].dim(0), ent)})
    for (n, j) in degen_keys(N):
        idx = K.index(n + 1)
        ent = {(idx[K.degen(s, j)], t): 1 for t, s in enumerate(K.simplices(n))}
        degens[(n, j)] = ChainMap(objs[n], objs[n + 1],
                                  {0: Mat.from_entries(objs[n + 1].dim(0), objs[n].dim(0), ent)})
    return Truncated(SIMPLICIAL, N, objs, faces, degens)


def linearize_map(f: SSetMap, N: int) -> SimplicialMap:
    X, Y = linearize(f.source, N), linearize(f.target, N)
    comps = []
    for n in range(N + 1):
        idx = f.target.index(n)
        ent = {(idx[f(s)], t): 1 for t, s in enumerate(f.source.simplices(n))}
        comps.append(ChainMap(X.objects[n], Y.objects[n],
                              {0: Mat.from_entries(Y.objects[n].dim(0), X.objects[n].dim(0), ent)}))
    return SimplicialMap(X, Y, comps)


def k_functor(X: Truncated) -> Complex:
    """Chain complex X_0 <- X_1 <- ... <- X_N with boundary Σ (-1)^i d_i.

    X must take values in vector spaces (complexes concentrated in degree 0).
    """
    if X.kind != SIMPLICIAL:
        raise ValueError("K applies to simplicial objects")
    for c in X.objects:
        if any(q != 0 for q in c.dims):
            raise ValueError("K expects objects concentrated in degree 0")
    dims = {n: X.objects[n].dim(0) for n in range(X.N + 1)}
    diff = {}
    for n in range(1, X.N + 1):
        acc = Mat(dims[n - 1], dims[n])
        for i in range(n + 1):
            m = X.faces[(n, i)].at(0)
            acc = acc + (m if i % 2 == 0 else -m)
        diff[n] = acc
    return Complex(CHAIN, dims, diff, check=False)


def boxtimes(K: FiniteSimplicialSet, X: Truncated) -> Truncated:
    """K⊠X: copies of X_n indexed by the n-simplices of K."""
    if X.kind != SIMPLICIAL:
        raise ValueError("⊠ acts on simplicial objects")
    N = X.N
    objs = [direct_sum(*([X.objects[n]] * len(K.simplices(n)))) if K.simplices(n)
            else zero_complex(X.direction) for n in range(N + 1)]

    def routed(n_src, n_tgt, simplex_map, xmap):
        src_s = K.simplices(n_src)
        idx = K.index(n_tgt)
        A, B = X.objects[n_src], X.objects[n_tgt]
        comps = {}
        for q in set(A.dims) | set(B.dims):
            parts = {}
            for t, s in enumerate(src_s):
                parts[(idx[simplex_map(s)], t)] = xmap.at(q)
            comps[q] = blocks([B.dim(q)] * len(idx), [A.dim(q)] * len(src_s), parts)
        return ChainMap(objs[n_src], objs[n_tgt], comps)

    faces = {(n, i): routed(n, n - 1, lambda s, i=i: K.face(s, i), X.faces[(n, i)])
             for (n, i) in face_keys(N)}
    degens = {(n, j): routed(n, n + 1, lambda s, j=j: K.degen(s, j), X.degens[(n, j)])
              for (n, j) in degen_keys(N)}
    return Truncated(SIMPLICIAL, N, objs, faces, degens)


# cylinders and cones


def interval_simplices(n: int) -> list[tuple[int, ...]]:
    """Monotone maps [n] -> [1] in lexicographic order (n+2 of them)."""
    return monotone_maps(n, 1)


def cylinder_labels(n: int) -> list:
    """Block labels of Cyl(f,g)_n: 'Y', the non-constant simplices of Δ[1]_n, 'Z'."""
    mid = [s for s in interval_simplices(n) if len(set(s)) == 2]
    return ["Y"] + mid + ["Z"]


def _cyl_label(s: tuple) -> object:
    if all(v == 1 for v in s):
        return "Y"
    if all(v == 0 for v in s):
        return "Z"
    return s


class Cylinder:
    """Double mapping cylinder Cyl(f, g) of f: X -> Y and g: X -> Z.

    The constant simplex at vertex 1 (image of d^0) is glued to Y along f, the
    one at vertex 0 (image of d^1) to Z along g.
    """

    def __init__(self, f: SimplicialMap, g: SimplicialMap):
        if f.source is not g.source and not _same_object(f.source, g.source):
            raise ValueError("cylinder needs maps with a common source")
        X, Y, Z = f.source, f.target, g.target
        if X.kind != SIMPLICIAL:
            raise ValueError("cylinders are built on simplicial objects")
        self.f, self.g = f, g
        self.X, self.Y, self.Z = X, Y, Z
        N = X.N
        self.N = N
        self.labels = [cylinder_labels(n) for n in range(N + 1)]
        objs = []
        for n in range(N + 1):
            parts = [self.part(n, lab) for lab in self.labels[n]]
            objs.append(direct_sum(*parts))
        self.objects = objs
        faces = {}
        for (n, i) in face_keys(N):
            faces[(n, i)] = self._structure(n, n - 1, True, i)
        degens = {}
        for (n, j) in degen_keys(N):
            degens[(n, j)] = self._structure(n, n + 1, False, j)
        self.obj = Truncated(SIMPLICIAL, N, objs, faces, degens)
        self.I_Y = self._inclusion(Y, "Y")
        self.J_Z = self._inclusion(Z, "Z")

    def part(self, n: int, label) -> Complex:
        if label == "Y":
            return self.Y.objects[n]
        if label == "Z":
            return self.Z.objects[n]
        return self.X.objects[n]

    def _structure(self, n: int, m: int, is_face: bool, idx: int) -> ChainMap:
        src_l, tgt_l = self.labels[n], self.labels[m]
        tpos = {lab: t for t, lab in enumerate(tgt_l)}
        src, tgt = self.objects[n], self.objects[m]
        pick = (lambda T: T.faces[(n, idx)]) if is_face else (lambda T: T.degens[(n, idx)])
        comps = {}
        for q in set(src.dims) | set(tgt.dims):
            parts = {}
            for s_pos, lab in enumerate(src_l):
                if lab == "Y":
                    parts[(tpos["Y"], s_pos)] = pick(self.Y).at(q)
                elif lab == "Z":
                    parts[(tpos["Z"], s_pos)] = pick(self.Z).at(q)
                else:
                    new = lab[:idx] + lab[idx + 1:] if is_face else lab[:idx + 1] + lab[idx:]
                    nl = _cyl_label(new)
                    xm = pick(self.X)
                    if nl == "Y":
                        mp = (self.f.comps[m] @ xm).at(q)
                    elif nl == "Z":
                        mp = (self.g.comps[m] @ xm).at(q)
                    else:
                        mp = xm.at(q)
                    parts[(tpos[nl], s_pos)] = mp
            comps[q] = blocks([self.part(m, lab).dim(q) for lab in tgt_l],
                              [self.part(n, lab).dim(q) for lab in src_l], parts)
        return ChainMap(src, tgt, comps)

    def _inclusion(self, W: Truncated, label: str) -> SimplicialMap:
        comps = []
        for n in range(self.N + 1):
            labs = self.labels[n]
            pos = labs.index(label)
            comps.append(_block_inclusion(W.objects[n], self.objects[n],
                                          [self.part(n, lab) for lab in labs], pos))
        return SimplicialMap(W, self.obj, comps)

    def block_offsets(self, n: int, q: int) -> dict:
        off = 0
        out = {}
        for lab in self.labels[n]:
            out[lab] = off
            off += self.part(n, lab).dim(q)
        return out


def _same_object(A: Truncated, B: Truncated) -> bool:
    return A.N == B.N and all(a == b for a, b in zip(A.objects, B.objects))


def _block_inclusion(W: Complex, total: Complex, parts: list[Complex], pos: int) -> ChainMap:
    comps = {}
    for q, n in W.dims.items():
        off = sum(p.dim(q) for p in parts[:pos])
        comps[q] = Mat.from_entries(total.dim(q), n, {(off + k, k): 1 for k in range(n)})
    return ChainMap(W, total, comps)


def cylinder(f: SimplicialMap, g: SimplicialMap) -> tuple[Truncated, SimplicialMap, SimplicialMap]:
    c = Cylinder(f, g)
    return c.obj, c.I_Y, c.J_Z


def cylinder_map(c1: Cylinder, c2: Cylinder, alpha: SimplicialMap, beta: SimplicialMap,
                 gamma: SimplicialMap) -> SimplicialMap:
    """Map Cyl(f,g) -> Cyl(f',g') induced by X->X' (alpha), Y->Y' (beta), Z->Z' (gamma)."""
    comps = []
    for n in range(c1.N + 1):
        labs = c1.labels[n]
        src, tgt = c1.objects[n], c2.objects[n]
        cm = {}
        for q in set(src.dims) | set(tgt.dims):
            parts = {}
            for t, lab in enumerate(labs):
                m = beta if lab == "Y" else gamma if lab == "Z" else alpha
                parts[(t, t)] = m.comps[n].at(q)
            cm[q] = blocks([c2.part(n, lab).dim(q) for lab in labs],
                           [c1.part(n, lab).dim(q) for lab in labs], parts)
        comps.append(ChainMap(src, tgt, cm))
    return SimplicialMap(c1.obj, c2.obj, comps)


def terminal_map(X: Truncated) -> SimplicialMap:
    Z = zero_object(X.N, X.kind, X.direction)
    return zero_smap(X, Z)


def cone(f: SimplicialMap) -> Truncated:
    """C(f) = Cyl(f, X -> 0)."""
    return Cylinder(f, terminal_map(f.source)).obj


def cone_cylinder(f: SimplicialMap) -> Cylinder:
    return Cylinder(f, terminal_map(f.source))


# path objects and fibres (cosimplicial)


def path_object(X: Truncated) -> tuple[Truncated, SimplicialMap, SimplicialMap]:
    """X^{Δ[1]} with the evaluations d^0 (vertex 1) and d^1 (vertex 0)."""
    if X.kind != COSIMPLICIAL:
        raise ValueError("path objects are built on cosimplicial objects")
    N = X.N
    sims = [interval_simplices(n) for n in range(N + 1)]
    objs = [direct_sum(*([X.objects[n]] * len(sims[n]))) for n in range(N + 1)]

    def structure(n_src, n_tgt, is_face, idx):
        # component at target simplex sigma reads source simplex d_idx sigma / s_idx sigma
        A, B = X.objects[n_src], X.objects[n_tgt]
        spos = {s: t for t, s in enumerate(sims[n_src])}
        xm = X.faces[(n_tgt, idx)] if is_face else X.degens[(n_tgt, idx)]
        comps = {}
        for q in set(A.dims) | set(B.dims):
            parts = {}
            for t, sigma in enumerate(sims[n_tgt]):
                if is_face:
                    read = sigma[:idx] + sigma[idx + 1:]
                else:
                    read = sigma[:idx + 1] + sigma[idx:]
                parts[(t, spos[read])] = xm.at(q)
            comps[q] = blocks([B.dim(q)] * len(sims[n_tgt]), [A.dim(q)] * len(sims[n_src]), parts)
        return ChainMap(objs[n_src], objs[n_tgt], comps)

    faces = {(n, i): structure(n - 1, n, True, i) for (n, i) in face_keys(N)}
    degens = {(n, j): structure(n + 1, n, False, j) for (n, j) in degen_keys(N)}
    P = Truncated(COSIMPLICIAL, N, objs, faces, degens)

    def evaluation(vertex):
        comps = []
        for n in range(N + 1):
            pos = sims[n].index(tuple([vertex] * (n + 1)))
            A = X.objects[n]
            cm = {}
            for q, d in A.dims.items():
                cm[q] = Mat.from_entries(d, objs[n].dim(q), {(k, pos * d + k): 1 for k in range(d)})
            comps.append(ChainMap(objs[n], A, cm))
        return SimplicialMap(P, X, comps)

    return P, evaluation(1), evaluation(0)


def fibre(f: SimplicialMap) -> Truncated:
    """Pullback of (ev_1, ev_0): Y^{Δ[1]} -> Y×Y along (f, 0): X -> Y×Y.

    Degree n is X^n ⊕ (Y^n)^{n}: a point x together with the values of a path
    on the non-constant simplices; the ends are forced to f(x) and 0.
    """
    X, Y = f.source, f.target
    if X.kind != COSIMPLICIAL:
        raise ValueError("fibres are built on cosimplicial objects")
    N = X.N
    sims = [interval_simplices(n) for n in range(N + 1)]
    labels = [["X"] + [s for s in sims[n] if len(set(s)) == 2] for n in range(N + 1)]
    objs = [direct_sum(*([X.objects[n]] + [Y.objects[n]] * (len(labels[n]) - 1)))
            for n in range(N + 1)]

    def structure(n_src, n_tgt, is_face, idx):
        A = objs[n_src]
        B = objs[n_tgt]
        spos = {lab: t for t, lab in enumerate(labels[n_src])}
        xm = X.faces[(n_tgt, idx)] if is_face else X.degens[(n_tgt, idx)]
        ym = Y.faces[(n_tgt, idx)] if is_face else Y.degens[(n_tgt, idx)]
        comps = {}
        for q in set(A.dims) | set(B.dims):
            parts: dict = {}

            def put(key, m):
                parts[key] = parts[key] + m if key in parts else m
            put((0, 0), xm.at(q))
            for t, sigma in enumerate(labels[n_tgt][1:], start=1):
                read = sigma[:idx] + sigma[idx + 1:] if is_face else sigma[:idx + 1] + sigma[idx:]
                if all(v == 1 for v in read):
                    put((t, 0), (ym @ f.comps[n_src]).at(q))
                elif all(v == 0 for v in read):
                    continue
                else:
                    put((t, spos[read]), ym.at(q))
            rs = [X.objects[n_tgt].dim(q)] + [Y.objects[n_tgt].dim(q)] * (len(labels[n_tgt]) - 1)
            cs = [X.objects[n_src].dim(q)] + [Y.objects[n_src].dim(q)] * (len(labels[n_src]) - 1)
            comps[q] = blocks(rs, cs, parts)
        return ChainMap(A, B, comps)

    faces = {(n, i): structure(n - 1, n, True, i) for (n, i) in face_keys(N)}
    degens = {(n, j): structure(n + 1, n, False, j) for (n, j) in degen_keys(N)}
    return Truncated(COSIMPLICIAL, N, objs, faces, degens)


# bisimplicial objects


class Bisimplicial:
    """N-truncated bisimplicial object Z_{n,m} in complexes.

    ``hfaces[(n, m, i)]``: Z_{n,m} -> Z_{n-1,m}; ``vfaces[(n, m, i)]``: Z_{n,m} -> Z_{n,m-1};
    degeneracies likewise toward n+1 / m+1.
    """

    def __init__(self, N: int, objects: dict, hfaces: dict, vfaces: dict,
                 hdegens: dict, vdegens: dict):
        self.N = N
        self.objects = objects
        self.hfaces, self.vfaces = hfaces, vfaces
        self.hdegens, self.vdegens = hdegens, vdegens

    def __getitem__(self, key) -> Complex:
        return self.objects[key]

    @property
    def direction(self) -> str:
        return self.objects[(0, 0)].direction

    def row(self, m: int) -> Truncated:
        """n ↦ Z_{n,m} (first index varies)."""
        N = self.N
        return Truncated(SIMPLICIAL, N, [self.objects[(n, m)] for n in range(N + 1)],
                         {(n, i): self.hfaces[(n, m, i)] for (n, i) in face_keys(N)},
                         {(n, j): self.hdegens[(n, m, j)] for (n, j) in degen_keys(N)})

    def column(self, n: int) -> Truncated:
        """m ↦ Z_{n,m} (second index varies)."""
        N = self.N
        return Truncated(SIMPLICIAL, N, [self.objects[(n, m)] for m in range(N + 1)],
                         {(m, i): self.vfaces[(n, m, i)] for (m, i) in face_keys(N)},
                         {(m, j): self.vdegens[(n, m, j)] for (m, j) in degen_keys(N)})

    def audit(self) -> list[str]:
        bad = []
        for m in range(self.N + 1):
            bad += [f"row {m}: {b}" for b in audit(self.row(m))]
        for n in range(self.N + 1):
            bad += [f"column {n}: {b}" for b in audit(self.column(n))]
        N = self.N
        # horizontal and vertical structure maps commute
        hmaps = [((n, m), (n - 1, m), self.hfaces[(n, m, i)], ("f", i))
                 for n in range(1, N + 1) for m in range(N + 1) for i in range(n + 1)]
        hmaps += [((n, m), (n + 1, m), self.hdegens[(n, m, j)], ("s", j))
                  for n in range(N) for m in range(N + 1) for j in range(n + 1)]
        for (n, m), (n2, _), h, (kind, i) in hmaps:
            for v_kind, vm_range in (("f", range(1, N + 1)), ("s", range(N))):
                if m not in vm_range:
                    continue
                for j in range(m + 1):
                    if v_kind == "f":
                        v1 = self.vfaces[(n, m, j)]
                        v2 = self.vfaces[(n2, m, j)]
                        h2 = self.hfaces[(n, m - 1, i)] if kind == "f" else self.hdegens[(n, m - 1, i)]
                    else:
                        v1 = self.vdegens[(n, m, j)]
                        v2 = self.vdegens[(n2, m, j)]
                        h2 = self.hfaces[(n, m + 1, i)] if kind == "f" else self.hdegens[(n, m + 1, i)]
                    if v2 @ h != h2 @ v1:
                        bad.append(f"row/column maps do not commute at {(n, m)}")
        return bad


def diagonal(Z: Bisimplicial) -> Truncated:
    """D(Z)_n = Z_{n,n}; face i = row d_i ∘ column d_i."""
    N = Z.N
    faces = {(n, i): Z.hfaces[(n, n - 1, i)] @ Z.vfaces[(n, n, i)] for (n, i) in face_keys(N)}
    degens = {(n, j): Z.hdegens[(n, n + 1, j)] @ Z.vdegens[(n, n, j)] for (n, j) in degen_keys(N)}
    return Truncated(SIMPLICIAL, N, [Z.objects[(n, n)] for n in range(N + 1)], faces, degens)


def constant_rows(X: Truncated) -> Bisimplicial:
    """X×Δ: Z_{n,m} = X_n, constant in m."""
    N = X.N
    objs = {(n, m): X.objects[n] for n in range(N + 1) for m in range(N + 1)}
    hf = {(n, m, i): X.faces[(n, i)] for (n, i) in face_keys(N) for m in range(N + 1)}
    hd = {(n, m, j): X.degens[(n, j)] for (n, j) in degen_keys(N) for m in range(N + 1)}
    vf = {(n, m, i): identity_map(X.objects[n]) for (m, i) in face_keys(N) for n in range(N + 1)}
    vd = {(n, m, j): identity_map(X.objects[n]) for (m, j) in degen_keys(N) for n in range(N + 1)}
    return Bisimplicial(N, objs, hf, vf, hd, vd)


def constant_columns(X: Truncated) -> Bisimplicial:
    """Δ×X: Z_{n,m} = X_m, constant in n."""
    return transpose(constant_rows(X))


def transpose(Z: Bisimplicial) -> Bisimplicial:
    objs = {(m, n): c for (n, m), c in Z.objects.items()}
    return Bisimplicial(Z.N, objs,
                        {(m, n, i): f for (n, m, i), f in Z.vfaces.items()},
                        {(m, n, i): f for (n, m, i), f in Z.hfaces.items()},
                        {(m, n, j): f for (n, m, j), f in Z.vdegens.items()},
                        {(m, n, j): f for (n, m, j), f in Z.hdegens.items()})


def external_tensor(X: Truncated, Y: Truncated) -> Bisimplicial:
    """Z_{n,m} = X_n ⊗ Y_m with the Koszul differential."""
    from .complexes import tensor, tensor_maps
    N = X.N
    objs = {(n, m): tensor(X.objects[n], Y.objects[m]) for n in range(N + 1) for m in range(N + 1)}
    idY = [identity_map(c) for c in Y.objects]
    idX = [identity_map(c) for c in X.objects]

    def fix(f, s, t):
        return ChainMap(objs[s], objs[t], f.comps)
    hf = {(n, m, i): fix(tensor_maps(X.faces[(n, i)], idY[m]), (n, m), (n - 1, m))
          for (n, i) in face_keys(N) for m in range(N + 1)}
    hd = {(n, m, j): fix(tensor_maps(X.degens[(n, j)], idY[m]), (n, m), (n + 1, m))
          for (n, j) in degen_keys(N) for m in range(N + 1)}
    vf = {(n, m, i): fix(tensor_maps(idX[n], Y.faces[(m, i)]), (n, m), (n, m - 1))
          for (m, i) in face_keys(N) for n in range(N + 1)}
    vd = {(n, m, j): fix(tensor_maps(idX[n], Y.degens[(m, j)]), (n, m), (n, m + 1))
          for (m, j) in degen_keys(N) for n in range(N + 1)}
    return Bisimplicial(N, objs, hf, vf, hd, vd)


def sum_bisimplicial(*Zs: Bisimplicial) -> Bisimplicial:
    Z0 = Zs[0]
    objs = {k: direct_sum(*[Z.objects[k] for Z in Zs]) for k in Z0.objects}

    def summ(attr, shift):
        out = {}
        for key in getattr(Z0, attr):
            n, m, _ = key
            s = (n, m)
            t = (n + shift[0], m + shift[1])
            out[key] = ChainMap(objs[s], objs[t], map_sum([getattr(Z, attr)[key] for Z in Zs]).comps)
        return out
    return Bisimplicial(Z0.N, objs, summ("hfaces", (-1, 0)), summ("vfaces", (0, -1)),
                        summ("hdegens", (1, 0)), summ("vdegens", (0, 1)))


class BisimplicialMap:
    def __init__(self, source: Bisimplicial, target: Bisimplicial, comps: dict):
        self.source, self.target, self.comps = source, target, comps

    def is_natural(self) -> bool:
        for attr, sh in (("hfaces", (-1, 0)), ("vfaces", (0, -1)), ("hdegens", (1, 0)),
                         ("vdegens", (0, 1))):
            for key, fs in getattr(self.source, attr).items():
                n, m, _ = key
                ft = getattr(self.target, attr)[key]
                if ft @ self.comps[(n, m)] != self.comps[(n + sh[0], m + sh[1])] @ fs:
                    return False
        return True


def external_tensor_map(f: SimplicialMap, g: SimplicialMap) -> BisimplicialMap:
    from .complexes import tensor_maps
    S = external_tensor(f.source, g.source)
    T = external_tensor(f.target, g.target)
    comps = {(n, m): ChainMap(S.objects[(n, m)], T.objects[(n, m)],
                              tensor_maps(f.comps[n], g.comps[m]).comps)
             for (n, m) in S.objects}
    return BisimplicialMap(S, T, comps)


# Dold–Kan


def coface_values(n: int, i: int) -> tuple[int, ...]:
    """δ^i: [n-1] -> [n] skipping i, as values."""
    return tuple(t if t < i else t + 1 for t in range(n))


def codegeneracy_values(n: int, j: int) -> tuple[int, ...]:
    """σ^j: [n+1] -> [n] hitting j twice, as values."""
    return tuple(t if t <= j else t - 1 for t in range(n + 2))


class DoldKan:
    """Γ(C)_n = ⊕_{η: [n] ->> [k]} C_k for a chain complex of complexes C.

    ``parts[k]`` is C_k (a Complex) and ``bd[k]`` the chain map C_k -> C_{k-1}.
    A summand indexed by η is sent along θ by factoring ηθ = δε: identity onto
    ε when δ = id, ∂ onto ε when δ = δ^0, zero otherwise.
    """

    def __init__(self, parts: Sequence[Complex], bd: dict, N: int):
        self.parts = list(parts) + [zero_complex(parts[0].direction)] * max(0, N + 1 - len(parts))
        self.bd = bd
        self.N = N
        self.index = []
        for n in range(N + 1):
            self.index.append([(k, eta) for k in range(n + 1) for eta in surjections(n, k)])
        objs = [direct_sum(*[self.parts[k] for k, _ in self.index[n]]) for n in range(N + 1)]
        faces = {(n, i): self._op(n, n - 1, coface_values(n, i)) for (n, i) in face_keys(N)}
        degens = {(n, j): self._op(n, n + 1, codegeneracy_values(n, j)) for (n, j) in degen_keys(N)}
        for key, f in faces.items():
            faces[key] = ChainMap(objs[key[0]], objs[key[0] - 1], f)
        for key, f in degens.items():
            degens[key] = ChainMap(objs[key[0]], objs[key[0] + 1], f)
        self.obj = Truncated(SIMPLICIAL, N, objs, faces, degens)

    def _op(self, n: int, m: int, theta: tuple) -> dict:
        src, tgt = self.index[n], self.index[m]
        tpos = {lab: t for t, lab in enumerate(tgt)}
        degs = set()
        for c in self.parts:
            degs |= set(c.dims)
        comps = {}
        for q in degs:
            parts = {}
            for s, (k, eta) in enumerate(src):
                comp = tuple(eta[t] for t in theta)
                eps, image = _factor(comp, k)
                k2 = len(image) - 1
                if k2 == k:
                    parts[(tpos[(k, eps)], s)] = Mat.identity(self.parts[k].dim(q))
                elif k2 == k - 1 and image == tuple(range(1, k + 1)):
                    if k in self.bd:
                        parts[(tpos[(k2, eps)], s)] = self.bd[k].at(q)
            comps[q] = blocks([self.parts[k].dim(q) for k, _ in tgt],
                              [self.parts[k].dim(q) for k, _ in src], parts)
        return comps


def dold_kan(parts: Sequence[Complex], bd: dict, N: int) -> Truncated:
    return DoldKan(parts, bd, N).obj
