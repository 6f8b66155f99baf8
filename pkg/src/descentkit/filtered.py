"""Filtered cochain complexes: graded pieces, décalage, spectral pages, diagonal filtrations."""
from __future__ import annotations

import random
from dataclasses import dataclass

from .complexes import COCHAIN, ChainMap, Complex, SchemaError, is_quasi_iso
from .linalg import (Mat, block_diag, coordinates, hstack, image_basis, is_invertible, kernel_basis,
                     kron, mat_from_json, mat_to_json, quotient_map, quotient_pair, rank,
                     same_span, span_sum)
from .simple import cosimple_map, cosimple_total
from .simplicial import COSIMPLICIAL, SimplicialMap, Truncated, _src_tgt


class FiltrationError(ValueError):
    pass


def _full(n: int) -> Mat:
    return Mat.identity(n)


class FilteredComplex:
    """A positive cochain complex with a decreasing biregular filtration.

    ``steps[n] = (lo, [F^lo, F^(lo+1), ..., F^hi])`` with F^lo = A^n; F^k = A^n below lo
    and 0 above hi.  ``increasing`` only records how the filtration is presented
    to users (W_k = F^(-k)).
    """

    def __init__(self, complex_: Complex, steps: dict, increasing: bool = False,
                 check: bool = True):
        if complex_.direction != COCHAIN:
            raise FiltrationError("filtered complexes are cochain complexes")
        self.complex = complex_
        self.steps = {}
        for n, dim in complex_.dims.items():
            lo, mats = steps.get(n, (0, []))
            mats = [image_basis(m) for m in mats]
            if not mats or mats[0].cols != dim:
                mats = [_full(dim)] + mats
                lo -= 1
            while len(mats) > 1 and mats[1].cols == dim:
                mats = mats[1:]
                lo += 1
            while mats and mats[-1].cols == 0:
                mats = mats[:-1]
            self.steps[n] = (lo, mats)
        self.increasing = increasing
        if check:
            bad = self.audit()
            if bad:
                raise FiltrationError(bad[0])

    @classmethod
    def from_levels(cls, complex_: Complex, levels: dict, increasing: bool = False):
        """Per basis vector levels: F^k = span{e_i : level_i >= k}."""
        steps = {}
        for n, dim in complex_.dims.items():
            lv = levels.get(n, [0] * dim)
            if not lv:
                continue
            lo, hi = min(lv), max(lv)
            mats = []
            for k in range(lo, hi + 1):
                cols = [i for i in range(dim) if lv[i] >= k]
                mats.append(Mat.from_entries(dim, len(cols), {(i, t): 1 for t, i in enumerate(cols)}))
            steps[n] = (lo, mats)
        return cls(complex_, steps, increasing)

    @property
    def A(self) -> Complex:
        return self.complex

    def F(self, k: int, n: int) -> Mat:
        dim = self.complex.dim(n)
        if n not in self.steps:
            return Mat(dim, 0)
        lo, mats = self.steps[n]
        if k <= lo:
            return _full(dim)
        if k - lo >= len(mats):
            return Mat(dim, 0)
        return mats[k - lo]

    def range(self, n: int) -> tuple[int, int]:
        """Levels where F^k A^n can change: F^k = A^n for k <= lo, 0 for k > hi."""
        if n not in self.steps:
            return (0, -1)
        lo, mats = self.steps[n]
        return lo, lo + len(mats) - 1

    def levels(self) -> range:
        los = [self.range(n)[0] for n in self.complex.dims]
        his = [self.range(n)[1] for n in self.complex.dims]
        if not los:
            return range(0)
        return range(min(los), max(his) + 2)

    def audit(self) -> list[str]:
        bad = []
        A = self.complex
        for n in A.dims:
            for k in self.levels():
                if rank(hstack([self.F(k, n), self.F(k + 1, n)])) != self.F(k, n).cols:
                    bad.append(f"F^{k + 1} not inside F^{k} in degree {n}")
                img = A.d(n) @ self.F(k, n)
                if img.cols and not _inside(img, self.F(k, n + 1)):
                    bad.append(f"d does not preserve F^{k} in degree {n}")
        return bad

    def same_filtration(self, other: "FilteredComplex", degrees=None) -> bool:
        degs = self.complex.dims if degrees is None else degrees
        ks = set(self.levels()) | set(other.levels())
        return all(same_span(self.F(k, n), other.F(k, n)) for n in degs for k in ks)

    def to_json(self) -> dict:
        filt: dict = {}
        for n in sorted(self.steps):
            lo, mats = self.steps[n]
            for t, m in enumerate(mats):
                k = lo + t
                key = -k if self.increasing else k
                filt.setdefault(str(key), {})[str(n)] = mat_to_json(m.T)
        return {"complex": self.complex.to_json(), "increasing": self.increasing,
                "filtration": filt}

    @classmethod
    def from_json(cls, obj: dict) -> "FilteredComplex":
        try:
            C = Complex.from_json(obj["complex"])
            inc = bool(obj.get("increasing", False))
            per: dict = {}
            for key, byn in obj["filtration"].items():
                k = -int(key) if inc else int(key)
                for n, rows in byn.items():
                    n = int(n)
                    m = mat_from_json(rows, len(rows), C.dim(n)).T if rows else Mat(C.dim(n), 0)
                    per.setdefault(n, {})[k] = m
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"malformed filtered complex: {exc}") from exc
        steps = {}
        for n, byk in per.items():
            lo, hi = min(byk), max(byk)
            mats = []
            for k in range(lo, hi + 1):
                # unlisted levels take the next listed one above
                k2 = min(j for j in byk if j >= k)
                mats.append(byk[k2])
            steps[n] = (lo, mats)
        return cls(C, steps, inc)


def _inside(vecs: Mat, basis: Mat) -> bool:
    if not vecs.cols or vecs.is_zero():
        return True
    if not basis.cols:
        return False
    return rank(hstack([basis, vecs])) == rank(basis)


@dataclass
class FilteredMap:
    source: FilteredComplex
    target: FilteredComplex
    map: ChainMap

    def is_filtered(self) -> bool:
        s = self.source
        for n in s.complex.dims:
            for k in set(s.levels()) | set(self.target.levels()):
                if not _inside(self.map.at(n) @ s.F(k, n), self.target.F(k, n)):
                    return False
        return self.map.is_chain_map()

    def to_json(self) -> dict:
        return {"source": self.source.to_json(), "target": self.target.to_json(),
                "comps": {str(q): mat_to_json(m) for q, m in sorted(self.map.comps.items())}}

    @classmethod
    def from_json(cls, obj: dict) -> "FilteredMap":
        s = FilteredComplex.from_json(obj["source"])
        t = FilteredComplex.from_json(obj["target"])
        comps = {int(q): mat_from_json(r, t.complex.dim(int(q)), s.complex.dim(int(q)))
                 for q, r in obj["comps"].items()}
        return cls(s, t, ChainMap(s.complex, t.complex, comps))


# graded pieces


def _quotient(big: Mat, small: Mat):
    """(P, S) for span(big)/span(small) in coordinates of big's columns."""
    c = coordinates(big, small) if small.cols else Mat(big.cols, 0)
    return quotient_pair(big.cols, c)


def graded(X: FilteredComplex, k: int) -> Complex:
    return _graded_data(X, k)[0]


def _graded_data(X: FilteredComplex, k: int):
    A = X.complex
    data = {}
    for n in A.dims:
        B = X.F(k, n)
        P, S = _quotient(B, X.F(k + 1, n))
        data[n] = (B, P, S)
    dims = {n: data[n][1].rows for n in data}
    diff = {}
    for n in data:
        if n + 1 not in data:
            continue
        B, P, S = data[n]
        B2, P2, _ = data[n + 1]
        img = A.d(n) @ B @ S
        diff[n] = P2 @ coordinates(B2, img) if img.cols and B2.cols else Mat(dims[n + 1], dims[n])
    return Complex(COCHAIN, dims, diff, check=False), data


def graded_map(f: FilteredMap, k: int) -> ChainMap:
    Gs, ds = _graded_data(f.source, k)
    Gt, dt = _graded_data(f.target, k)
    comps = {}
    for n in Gs.dims:
        B, _, S = ds[n]
        if n not in dt:
            continue
        B2, P2, _ = dt[n]
        img = f.map.at(n) @ B @ S
        comps[n] = P2 @ coordinates(B2, img) if img.cols and B2.cols else Mat(Gt.dim(n), Gs.dim(n))
    return ChainMap(Gs, Gt, comps)


def is_filtered_qis(f: FilteredMap, degrees=None) -> bool:
    ks = set(f.source.levels()) | set(f.target.levels())
    return all(is_quasi_iso(graded_map(f, k), degrees) for k in ks)


# décalage


def decalage(X: FilteredComplex) -> FilteredComplex:
    """Dec(F)^p A^n = {x in F^(p+n) A^n : dx in F^(p+n+1) A^(n+1)}."""
    A = X.complex
    steps = {}
    for n, dim in A.dims.items():
        lo, hi = X.range(n)
        lo2, hi2 = X.range(n + 1) if n + 1 in A.dims else (lo, hi)
        plo = min(lo, lo2 - 1) - n
        phi = hi - n + 1
        mats = [_dec_level(X, p, n) for p in range(plo, phi + 1)]
        steps[n] = (plo, mats)
    return FilteredComplex(A, steps, X.increasing)


def _dec_level(X: FilteredComplex, p: int, n: int) -> Mat:
    A = X.complex
    B = X.F(p + n, n)
    if not B.cols:
        return B
    if A.dim(n + 1) == 0:
        return B
    Q = quotient_map(A.dim(n + 1), X.F(p + n + 1, n + 1))
    return image_basis(B @ kernel_basis(Q @ A.d(n) @ B))


def decalage_map(f: FilteredMap) -> FilteredMap:
    return FilteredMap(decalage(f.source), decalage(f.target), f.map)


# spectral pages


def _Z(X: FilteredComplex, r: int, p: int, n: int) -> Mat:
    """Z_r^p in degree n: F^p A^n ∩ d^-1(F^(p+r) A^(n+1))."""
    A = X.complex
    B = X.F(p, n)
    if not B.cols or A.dim(n + 1) == 0:
        return B
    Q = quotient_map(A.dim(n + 1), X.F(p + r, n + 1))
    return image_basis(B @ kernel_basis(Q @ A.d(n) @ B))


class SpectralPage:
    """E_r^{p,q} = Z_r^{p,q} / (Z_{r-1}^{p+1,q-1} + d Z_{r-1}^{p-r+1,q+r-2})."""

    def __init__(self, X: FilteredComplex, r: int):
        if r < 0:
            raise ValueError("pages start at r = 0")
        self.X, self.r = X, r
        A = X.complex
        self.parts = {}
        for n in A.dims:
            lo, hi = X.range(n)
            for p in range(lo, hi + 1):
                Z = _Z(X, r, p, n)
                D = [_Z(X, r - 1, p + 1, n)]
                if n - 1 in A.dims:
                    D.append(A.d(n - 1) @ _Z(X, r - 1, p - r + 1, n - 1))
                Dm = span_sum(D, A.dim(n))
                P, S = _quotient(Z, Dm) if Z.cols else (Mat(0, 0), Mat(0, 0))
                if P.rows:
                    self.parts[(p, n - p)] = (Z, P, S)
        self.d = {}
        for (p, q), (Z, P, S) in self.parts.items():
            tgt = (p + r, q - r + 1)
            if tgt not in self.parts:
                continue
            Z2, P2, _ = self.parts[tgt]
            img = A.d(p + q) @ Z @ S
            self.d[(p, q)] = P2 @ coordinates(Z2, img)

    def dim(self, p: int, q: int) -> int:
        part = self.parts.get((p, q))
        return part[1].rows if part else 0

    def dims(self) -> dict:
        return {k: v[1].rows for k, v in sorted(self.parts.items())}

    def differential(self, p: int, q: int) -> Mat:
        r = self.r
        m = self.d.get((p, q))
        return m if m is not None else Mat(self.dim(p + r, q - r + 1), self.dim(p, q))

    def classes(self, p: int, q: int, vecs: Mat) -> Mat:
        """Classes in E_r^{p,q} of vectors lying in Z_r^{p,q}."""
        Z, P, _ = self.parts[(p, q)]
        return P @ coordinates(Z, vecs)

    def reps(self, p: int, q: int) -> Mat:
        Z, _, S = self.parts[(p, q)]
        return Z @ S

    def homology_dims(self) -> dict:
        """dim H(E_r, d_r) at every (p, q)."""
        r = self.r
        out = {}
        keys = set(self.parts) | {(p + r, q - r + 1) for (p, q) in self.parts}
        for (p, q) in keys:
            k = self.dim(p, q) - rank(self.differential(p, q))
            k -= rank(self.differential(p - r, q + r - 1))
            if k:
                out[(p, q)] = k
        return dict(sorted(out.items()))

    def d_squared_zero(self) -> bool:
        r = self.r
        for (p, q) in self.parts:
            a = self.differential(p, q)
            b = self.differential(p + r, q - r + 1)
            if a.cols and b.rows and not (b @ a).is_zero():
                return False
        return True

    def to_json(self) -> dict:
        return {"r": self.r,
                "dims": {f"{p},{q}": n for (p, q), n in self.dims().items()},
                "differentials": {f"{p},{q}": mat_to_json(m) for (p, q), m in sorted(self.d.items())}}


def spectral_page(X: FilteredComplex, r: int) -> SpectralPage:
    return SpectralPage(X, r)


def page_consistency(X: FilteredComplex, rmax: int = 3) -> list[str]:
    """E_(r+1) = H(E_r, d_r) dimensionwise and d_r^2 = 0 for r <= rmax."""
    bad = []
    pages = [SpectralPage(X, r) for r in range(rmax + 2)]
    for r in range(rmax + 1):
        if not pages[r].d_squared_zero():
            bad.append(f"d_{r}^2 != 0")
        if pages[r].homology_dims() != pages[r + 1].dims():
            bad.append(f"E_{r + 1} differs from H(E_{r})")
    return bad


def page_map(f: FilteredMap, r: int) -> dict:
    Es, Et = SpectralPage(f.source, r), SpectralPage(f.target, r)
    out = {}
    for key in set(Es.parts) | set(Et.parts):
        p, q = key
        if key not in Es.parts:
            out[key] = Mat(Et.dim(p, q), 0)
            continue
        img = f.map.at(p + q) @ Es.reps(p, q)
        if key not in Et.parts:
            out[key] = Mat(0, img.cols)
            continue
        out[key] = Et.classes(p, q, img)
    return out


def is_page_iso(f: FilteredMap, r: int) -> bool:
    for m in page_map(f, r).values():
        if m.rows != m.cols or (m.rows and not is_invertible(m)):
            return False
    return True


def is_e2_iso(f: FilteredMap) -> bool:
    return is_page_iso(f, 2)


# cosimplicial filtered complexes and the two filtrations on the simple


class CosimplicialFiltered:
    """A cosimplicial cochain complex with a filtration on each X^n preserved by the structure maps."""

    def __init__(self, X: Truncated, filts: list, check: bool = True):
        if X.kind != COSIMPLICIAL:
            raise FiltrationError("expected a cosimplicial object")
        self.X = X
        self.filts = list(filts)
        if check:
            bad = self.audit()
            if bad:
                raise FiltrationError(bad[0])

    def audit(self) -> list[str]:
        bad = []
        for n, F in enumerate(self.filts):
            if F.complex != self.X.objects[n]:
                bad.append(f"filtration in degree {n} sits on a different complex")
        for d, arrows in ((True, self.X.faces), (False, self.X.degens)):
            for key, m in arrows.items():
                s, t = _src_tgt(COSIMPLICIAL, key[0], d)
                if not FilteredMap(self.filts[s], self.filts[t], m).is_filtered():
                    bad.append(f"structure map {key} is not filtered")
        return bad

    def to_json(self) -> dict:
        return {"object": self.X.to_json(), "filtrations": [F.to_json() for F in self.filts]}

    @classmethod
    def from_json(cls, obj: dict) -> "CosimplicialFiltered":
        return cls(Truncated.from_json(obj["object"]),
                   [FilteredComplex.from_json(f) for f in obj["filtrations"]])


def decalage_cosimplicial(C: CosimplicialFiltered) -> CosimplicialFiltered:
    return CosimplicialFiltered(C.X, [decalage(F) for F in C.filts], check=False)


SS, SDELTA = "ss", "sdelta"


def simple_filtered(C: CosimplicialFiltered, mode: str, qmax: int) -> FilteredComplex:
    """(sF)^k = ⊕ F^k A^{n,p}  or  (δF)^k = ⊕ F^(k-n) A^{n,p} on the cosimple."""
    if mode not in (SS, SDELTA):
        raise ValueError(f"unknown mode {mode}")
    tot = cosimple_total(C.X, qmax)
    lay = tot.layout
    steps = {}
    for m in lay.size:
        blocks = lay.blocks[m]
        shift = lambda n: n if mode == SDELTA else 0
        los, his = [], []
        for (n, p), _ in blocks:
            lo, hi = C.filts[n].range(p)
            los.append(lo + shift(n))
            his.append(hi + shift(n))
        if not los:
            continue
        lo, hi = min(los), max(his)
        mats = []
        for k in range(lo, hi + 2):
            mats.append(block_diag([C.filts[n].F(k - shift(n), p) for (n, p), _ in blocks]))
        steps[m] = (lo, mats)
    return FilteredComplex(tot.complex, steps, C.filts[0].increasing if C.filts else False)


def simple_filtered_map(f: SimplicialMap, src: CosimplicialFiltered, tgt: CosimplicialFiltered,
                        mode: str, qmax: int) -> FilteredMap:
    return FilteredMap(simple_filtered(src, mode, qmax), simple_filtered(tgt, mode, qmax),
                       cosimple_map(f, qmax))


def interchange_holds(C: CosimplicialFiltered, qmax: int) -> bool:
    """(s,s)(Dec X) = Dec((s,δ) X) as filtrations, in the degrees where the cosimple is exact."""
    a = simple_filtered(decalage_cosimplicial(C), SS, qmax)
    b = decalage(simple_filtered(C, SDELTA, qmax))
    return a.same_filtration(b, degrees=range(qmax))


# bifiltered complexes and mixed-Hodge-shaped data


class BifilteredComplex:
    def __init__(self, W: FilteredComplex, F: FilteredComplex):
        if W.complex != F.complex:
            raise FiltrationError("W and F must filter the same complex")
        self.W, self.F = W, F
        self.complex = W.complex

    def to_json(self) -> dict:
        return {"W": self.W.to_json(), "F": self.F.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> "BifilteredComplex":
        return cls(FilteredComplex.from_json(obj["W"]), FilteredComplex.from_json(obj["F"]))


class MixedHodgeDatum:
    """((K_Q, W), (K_C, W, F), α0: K_Q -> K~ <- K_C: α1), all over Q; W stored decreasing."""

    def __init__(self, KQ: FilteredComplex, KC: BifilteredComplex, alpha0: FilteredMap,
                 alpha1: FilteredMap, check: bool = True, degrees=None):
        self.KQ, self.KC, self.alpha0, self.alpha1 = KQ, KC, alpha0, alpha1
        self.degrees = degrees
        if check:
            bad = self.audit()
            if bad:
                raise FiltrationError(bad[0])

    def audit(self) -> list[str]:
        bad = []
        if self.alpha0.source.complex != self.KQ.complex:
            bad.append("α0 does not start at K_Q")
        if self.alpha1.source.complex != self.KC.complex:
            bad.append("α1 does not start at K_C")
        if self.alpha0.target.complex != self.alpha1.target.complex:
            bad.append("α0 and α1 have different targets")
        for name, a in (("α0", self.alpha0), ("α1", self.alpha1)):
            if not a.is_filtered():
                bad.append(f"{name} is not filtered")
            elif not is_filtered_qis(a, self.degrees):
                bad.append(f"{name} is not a filtered quasi-isomorphism")
        return bad

    def to_json(self) -> dict:
        return {"KQ": self.KQ.to_json(), "KC": self.KC.to_json(),
                "alpha0": self.alpha0.to_json(), "alpha1": self.alpha1.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> "MixedHodgeDatum":
        return cls(FilteredComplex.from_json(obj["KQ"]), BifilteredComplex.from_json(obj["KC"]),
                   FilteredMap.from_json(obj["alpha0"]), FilteredMap.from_json(obj["alpha1"]))


@dataclass
class CosimplicialHodge:
    """Degreewise mixed-Hodge-shaped data with cosimplicial structure maps on every piece."""
    KQ: CosimplicialFiltered
    KCW: CosimplicialFiltered
    KCF: CosimplicialFiltered
    tilde: CosimplicialFiltered
    alpha0: SimplicialMap
    alpha1: SimplicialMap


def hodge_simple(K: CosimplicialHodge, qmax: int) -> MixedHodgeDatum:
    """((sK_Q, δW), (sK_C, δW, sF), sα)."""
    if K.KCW.X.objects != K.KCF.X.objects:
        raise FiltrationError("W and F live on different cosimplicial objects")
    shapes = ((K.alpha0.source, K.KQ.X), (K.alpha0.target, K.tilde.X),
              (K.alpha1.source, K.KCW.X), (K.alpha1.target, K.tilde.X))
    if any(a.objects != b.objects for a, b in shapes):
        raise FiltrationError("comparison zig-zag does not match the complexes")
    KQ = simple_filtered(K.KQ, SDELTA, qmax)
    W = simple_filtered(K.KCW, SDELTA, qmax)
    F = simple_filtered(K.KCF, SS, qmax)
    Kt = simple_filtered(K.tilde, SDELTA, qmax)
    a0 = FilteredMap(KQ, Kt, cosimple_map(K.alpha0, qmax))
    a1 = FilteredMap(W, Kt, cosimple_map(K.alpha1, qmax))
    return MixedHodgeDatum(KQ, BifilteredComplex(W, F), a0, a1, check=False, degrees=range(qmax))


@dataclass
class HodgeMap:
    rational: FilteredMap
    complex_part: FilteredMap | None = None
    tilde: FilteredMap | None = None


def mhc_equivalence(f: HodgeMap, degrees=None) -> bool:
    """Equivalences of mixed-Hodge-shaped data are decided on the rational complex alone."""
    return is_quasi_iso(f.rational.map, degrees)


# generators: filtered spheres and disks, moved by random changes of basis


@dataclass
class Piece:
    kind: str  # "sphere" or "disk"
    degree: int
    level: int
    level2: int | None = None  # disk: level of the degree+1 vector, >= level


def _canon(pieces: list[Piece]):
    dims: dict = {}
    lv: dict = {}
    where = []
    for pc in pieces:
        n = pc.degree
        i = dims.get(n, 0)
        dims[n] = i + 1
        lv.setdefault(n, []).append(pc.level)
        if pc.kind == "disk":
            j = dims.get(n + 1, 0)
            dims[n + 1] = j + 1
            lv.setdefault(n + 1, []).append(pc.level2)
            where.append(((n, i), (n + 1, j)))
        else:
            where.append(((n, i),))
    diff = {}
    for w in where:
        if len(w) == 2:
            (n, i), (_, j) = w
            diff.setdefault(n, {})[(j, i)] = 1
    dmats = {n: Mat.from_entries(dims.get(n + 1, 0), dims[n], e) for n, e in diff.items()}
    return Complex(COCHAIN, dims, dmats), lv, where


def canonical_filtered(pieces: list[Piece]) -> FilteredComplex:
    C, lv, _ = _canon(pieces)
    return FilteredComplex.from_levels(C, lv)


def transport(X: FilteredComplex, H: dict) -> FilteredComplex:
    """Image of X under the degreewise isomorphisms H."""
    A = X.complex
    from .linalg import inverse
    diff = {n: H[n + 1] @ A.d(n) @ inverse(H[n]) for n in A.diff if n + 1 in H}
    B = Complex(COCHAIN, A.dims, diff)
    steps = {n: (lo, [H[n] @ m for m in mats]) for n, (lo, mats) in X.steps.items()}
    return FilteredComplex(B, steps, X.increasing)


def transport_map(f: ChainMap, Hs: dict, Ht: dict, src: FilteredComplex,
                  tgt: FilteredComplex) -> FilteredMap:
    from .linalg import inverse
    comps = {n: Ht[n] @ f.at(n) @ inverse(Hs[n]) for n in src.complex.dims if n in Ht}
    return FilteredMap(src, tgt, ChainMap(src.complex, tgt.complex, comps))


def _random_basis_change(rng: random.Random, C: Complex) -> dict:
    from .generate import unimodular
    return {n: unimodular(rng, d) for n, d in C.dims.items()}


def random_pieces(rng: random.Random, count: int, hi: int = 2, levels=(-1, 2), reach: int = 2):
    out = []
    for _ in range(count):
        n = rng.randint(0, hi)
        k = rng.randint(*levels)
        if n < hi and rng.random() < 0.5:
            out.append(Piece("disk", n, k, k + rng.randint(0, reach)))
        else:
            out.append(Piece("sphere", n, k))
    return out


def random_filtered(rng: random.Random, count: int | None = None, hi: int = 2) -> FilteredComplex:
    pcs = random_pieces(rng, count if count is not None else rng.randint(1, 4), hi)
    X = canonical_filtered(pcs)
    return transport(X, _random_basis_change(rng, X.complex))


def _inclusion_of(pieces_a: list[Piece], pieces_b: list[Piece], sel: list[int | None]) -> ChainMap:
    """Map sending the basis of piece i of a to the basis of piece sel[i] of b (None: zero)."""
    Ca, _, wa = _canon(pieces_a)
    Cb, _, wb = _canon(pieces_b)
    ent: dict = {}
    for i, j in enumerate(sel):
        if j is None:
            continue
        for (n, a), (_, b) in zip(wa[i], wb[j]):
            ent.setdefault(n, {})[(b, a)] = 1
    comps = {n: Mat.from_entries(Cb.dim(n), Ca.dim(n), e) for n, e in ent.items()}
    return ChainMap(Ca, Cb, comps, check=True)


def random_labeled_filtered_map(rng: random.Random, hi: int = 2):
    """A filtered map with its filtered-qis and E2-iso status known by construction."""
    base = random_pieces(rng, rng.randint(0, 3), hi)
    mode = rng.choice(["identity", "add-disk", "drop-disk", "drop-sphere", "shift-sphere"])
    fq = e2 = True
    if mode == "identity":
        src, tgt = base, base
        sel = list(range(len(base)))
    elif mode in ("add-disk", "drop-disk"):
        r = rng.randint(0, 3)
        n, k = rng.randint(0, max(hi - 1, 0)), rng.randint(-1, 2)
        big = base + [Piece("disk", n, k, k + r)]
        fq, e2 = r == 0, r <= 1
        if mode == "add-disk":
            src, tgt, sel = base, big, list(range(len(base)))
        else:
            src, tgt, sel = big, base, list(range(len(base))) + [None]
    elif mode == "drop-sphere":
        pc = Piece("sphere", rng.randint(0, hi), rng.randint(-1, 2))
        src, tgt, sel = base + [pc], base, list(range(len(base))) + [None]
        fq = e2 = False
    else:
        n, k = rng.randint(0, hi), rng.randint(-1, 2)
        src = base + [Piece("sphere", n, k)]
        tgt = base + [Piece("sphere", n, k + 1)]
        sel = list(range(len(src)))
        fq = e2 = False
    m = _inclusion_of(src, tgt, sel)
    Xs, Xt = canonical_filtered(src), canonical_filtered(tgt)
    Hs, Ht = _random_basis_change(rng, Xs.complex), _random_basis_change(rng, Xt.complex)
    S, T = transport(Xs, Hs), transport(Xt, Ht)
    f = transport_map(m, Hs, Ht, S, T)
    return f, {"mode": mode, "filtered_qis": fq, "e2_iso": e2}


def filtered_vtensor(V: Truncated, X: FilteredComplex) -> CosimplicialFiltered:
    """n ↦ V^n ⊗ X for a cosimplicial vector space V, filtered by V^n ⊗ F^k."""
    A = X.complex
    objs = []
    for n in range(V.N + 1):
        v = V.objects[n].dim(0)
        objs.append(Complex(COCHAIN, {q: v * d for q, d in A.dims.items()},
                            {q: kron(Mat.identity(v), m) for q, m in A.diff.items()}))

    def lift(m, key, is_face):
        s, t = _src_tgt(COSIMPLICIAL, key[0], is_face)
        return ChainMap(objs[s], objs[t], {q: kron(m.at(0), Mat.identity(d)) for q, d in A.dims.items()})
    faces = {k: lift(m, k, True) for k, m in V.faces.items()}
    degens = {k: lift(m, k, False) for k, m in V.degens.items()}
    Y = Truncated(COSIMPLICIAL, V.N, objs, faces, degens)
    filts = []
    for n in range(V.N + 1):
        v = V.objects[n].dim(0)
        steps = {q: (lo, [kron(Mat.identity(v), m) for m in mats]) for q, (lo, mats) in X.steps.items()}
        filts.append(FilteredComplex(objs[n], steps, X.increasing, check=False))
    return CosimplicialFiltered(Y, filts, check=False)


def random_cosimplicial_filtered(rng: random.Random, N: int = 3, hi: int = 1) -> CosimplicialFiltered:
    from .generate import dualize, random_space_object
    V = dualize(random_space_object(rng, N, 2, 1))
    return filtered_vtensor(V, random_filtered(rng, rng.randint(1, 3), hi))


def random_hodge_datum(rng: random.Random, hi: int = 2):
    """(K_Q, W) = (K_C, W), an independent F, and K~ = K ⊕ (W-acyclic disk) with inclusions."""
    pcs = random_pieces(rng, rng.randint(1, 3), hi)
    C, lv, where = _canon(pcs)
    W = FilteredComplex.from_levels(C, lv, increasing=True)
    flv = {n: [0] * d for n, d in C.dims.items()}
    for w in where:
        k = rng.randint(-1, 1)
        flv[w[0][0]][w[0][1]] = k
        if len(w) == 2:
            flv[w[1][0]][w[1][1]] = k + rng.randint(0, 1)
    F = FilteredComplex.from_levels(C, flv)
    n, k = rng.randint(0, max(hi - 1, 0)), rng.randint(-1, 2)
    big = pcs + [Piece("disk", n, k, k)]
    Ct, lvt, _ = _canon(big)
    Wt = FilteredComplex.from_levels(Ct, lvt, increasing=True)
    inc = _inclusion_of(pcs, big, list(range(len(pcs))))
    a0 = FilteredMap(W, Wt, inc)
    a1 = FilteredMap(W, Wt, inc)
    return MixedHodgeDatum(W, BifilteredComplex(W, F), a0, a1)


def cosimplicial_hodge(V: Truncated, D: MixedHodgeDatum) -> CosimplicialHodge:
    KQ = filtered_vtensor(V, D.KQ)
    KCW = filtered_vtensor(V, D.KC.W)
    KCF = filtered_vtensor(V, D.KC.F)
    Kt = filtered_vtensor(V, D.alpha0.target)

    def lift(a: FilteredMap, S: CosimplicialFiltered, T: CosimplicialFiltered) -> SimplicialMap:
        comps = []
        for n in range(V.N + 1):
            v = V.objects[n].dim(0)
            comps.append(ChainMap(S.X.objects[n], T.X.objects[n],
                                  {q: kron(Mat.identity(v), m) for q, m in a.map.comps.items()}))
        return SimplicialMap(S.X, T.X, comps)
    return CosimplicialHodge(KQ, KCW, KCF, Kt, lift(D.alpha0, KQ, Kt), lift(D.alpha1, KCW, Kt))


def truncate_filtered(X: FilteredComplex, hi: int) -> FilteredComplex:
    A = X.complex.truncate(0, hi)
    return FilteredComplex(A, {n: v for n, v in X.steps.items() if n in A.dims}, X.increasing)


def constant_filtered(X: FilteredComplex, N: int) -> CosimplicialFiltered:
    from .simplicial import constant
    return CosimplicialFiltered(constant(X.complex, N, COSIMPLICIAL), [X] * (N + 1), check=False)


def constant_hodge(D: MixedHodgeDatum, N: int) -> CosimplicialHodge:
    from .simplicial import constant_map
    KQ = constant_filtered(D.KQ, N)
    KCW, KCF = constant_filtered(D.KC.W, N), constant_filtered(D.KC.F, N)
    Kt = constant_filtered(D.alpha0.target, N)
    return CosimplicialHodge(KQ, KCW, KCF, Kt, constant_map(D.alpha0.map, N, COSIMPLICIAL),
                             constant_map(D.alpha1.map, N, COSIMPLICIAL))


def lambda_hodge(D: MixedHodgeDatum, N: int, qmax: int):
    """λ from a datum (truncated to degrees <= qmax) into the Hodge simple of its constant object.

    Returns (λ_Q, λ_W, λ_F, target datum); λ_W and λ_F are the same linear map
    viewed against δW and sF.
    """
    from .simple import lambda_rho
    S = hodge_simple(constant_hodge(D, N), qmax)

    def lam(X: FilteredComplex, T: FilteredComplex) -> FilteredMap:
        into = lambda_rho(X.complex, N, qmax)[0]
        src = truncate_filtered(X, qmax)
        return FilteredMap(src, T, ChainMap(src.complex, T.complex, into.comps))
    return lam(D.KQ, S.KQ), lam(D.KC.W, S.KC.W), lam(D.KC.F, S.KC.F), S


def lambda_hodge_check(D: MixedHodgeDatum, N: int, qmax: int) -> tuple[bool, str]:
    lq, lw, lf, S = lambda_hodge(D, N, qmax)
    degs = range(qmax)
    if S.audit():
        return False, "simple datum fails its invariants"
    if not (lq.is_filtered() and lw.is_filtered() and lf.is_filtered()):
        return False, "λ is not filtered"
    if not is_filtered_qis(lf, degs):
        return False, "λ is not a filtered qis for sF"
    if not mhc_equivalence(HodgeMap(lq, lw), degs):
        return False, "λ on the rational part is not a qis"
    return True, "ok"


def _register():
    from . import codec
    codec.register("FilteredComplex", FilteredComplex.from_json)
    codec.register("FilteredMap", FilteredMap.from_json)
    codec.register("BifilteredComplex", BifilteredComplex.from_json)
    codec.register("MixedHodgeDatum", MixedHodgeDatum.from_json)
    codec.register("CosimplicialFiltered", CosimplicialFiltered.from_json)


_register()
