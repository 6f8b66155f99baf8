"""Bounded chain and cochain complexes of finite-dimensional Q-vector spaces."""
from __future__ import annotations

from typing import Iterable

from .linalg import (DimensionError, Mat, blocks, block_diag, hstack, image_basis, in_span,
                     kernel_basis, kron, mat_from_json, mat_to_json, rank, rref)

CHAIN = "chain"
COCHAIN = "cochain"


class ComplexError(ValueError):
    pass


class Complex:
    """Graded vector space with a square-zero differential.

    ``diff[q]`` is the matrix of the differential leaving degree q: into q-1 for
    chain complexes and into q+1 for cochain complexes.
    """

    __slots__ = ("direction", "dims", "diff")

    def __init__(self, direction: str, dims: dict, diff: dict | None = None,
                 check: bool = True):
        if direction not in (CHAIN, COCHAIN):
            raise ComplexError(f"unknown direction {direction!r}")
        self.direction = direction
        self.dims = {int(q): int(n) for q, n in dims.items() if n}
        self.diff = {}
        for q, m in (diff or {}).items():
            q = int(q)
            if m.is_zero():
                if m.shape != (self.dim(q + self.step), self.dim(q)):
                    raise DimensionError(f"differential at {q} has shape {m.shape}")
                continue
            self.diff[q] = m
        if check:
            self.validate()

    @property
    def step(self) -> int:
        return -1 if self.direction == CHAIN else 1

    def dim(self, q: int) -> int:
        return self.dims.get(q, 0)

    def d(self, q: int) -> Mat:
        m = self.diff.get(q)
        if m is None:
            return Mat(self.dim(q + self.step), self.dim(q))
        return m

    def d_into(self, q: int) -> Mat:
        """Differential arriving at degree q."""
        return self.d(q - self.step)

    def degrees(self) -> list[int]:
        return sorted(self.dims)

    def support(self) -> tuple[int, int]:
        if not self.dims:
            return (0, -1)
        return (min(self.dims), max(self.dims))

    def window(self, pad: int = 1) -> range:
        lo, hi = self.support()
        if hi < lo:
            return range(0)
        return range(lo - pad, hi + pad + 1)

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def validate(self) -> None:
        for q, m in self.diff.items():
            if m.shape != (self.dim(q + self.step), self.dim(q)):
                raise DimensionError(
                    f"differential at {q} has shape {m.shape}, expected "
                    f"{(self.dim(q + self.step), self.dim(q))}")
        for q in self.diff:
            if not (self.d(q + self.step) @ self.d(q)).is_zero():
                raise ComplexError(f"d∘d ≠ 0 at degree {q}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Complex):
            return NotImplemented
        return (self.direction == other.direction and self.dims == other.dims
                and self.diff == other.diff)

    def __repr__(self) -> str:
        return f"Complex({self.direction}, dims={dict(sorted(self.dims.items()))})"

    def truncate(self, lo: int | None = None, hi: int | None = None) -> "Complex":
        """Brutal truncation to degrees in [lo, hi]."""
        keep = lambda q: (lo is None or q >= lo) and (hi is None or q <= hi)
        dims = {q: n for q, n in self.dims.items() if keep(q)}
        diff = {q: m for q, m in self.diff.items() if keep(q) and keep(q + self.step)}
        return Complex(self.direction, dims, diff, check=False)

    def to_json(self) -> dict:
        return {
            "direction": self.direction,
            "dims": {str(q): n for q, n in sorted(self.dims.items())},
            "diff": {str(q): mat_to_json(m) for q, m in sorted(self.diff.items())},
        }

    @classmethod
    def from_json(cls, obj: dict, check: bool = True) -> "Complex":
        try:
            direction = obj["direction"]
            dims = {int(q): int(n) for q, n in obj["dims"].items()}
            step = -1 if direction == CHAIN else 1
            diff = {}
            for q, rows in obj.get("diff", {}).items():
                q = int(q)
                diff[q] = mat_from_json(rows, dims.get(q + step, 0), dims.get(q, 0))
        except (KeyError, TypeError, AttributeError) as exc:
            raise SchemaError(f"malformed complex: {exc}") from exc
        except DimensionError as exc:
            raise SchemaError(str(exc)) from exc
        return cls(direction, dims, diff, check=check)


class SchemaError(ValueError):
    pass


def zero_complex(direction: str = CHAIN) -> Complex:
    return Complex(direction, {}, {}, check=False)


def sphere(q: int, direction: str = CHAIN, n: int = 1) -> Complex:
    return Complex(direction, {q: n}, {}, check=False)


def disk(q: int, direction: str = CHAIN) -> Complex:
    """Q in degrees q and q+step joined by the identity."""
    step = -1 if direction == CHAIN else 1
    return Complex(direction, {q: 1, q + step: 1}, {q: Mat.identity(1)}, check=False)


class ChainMap:
    __slots__ = ("source", "target", "comps")

    def __init__(self, source: Complex, target: Complex, comps: dict | None = None,
                 check: bool = False):
        if source.direction != target.direction:
            raise ComplexError("direction mismatch")
        self.source = source
        self.target = target
        self.comps = {}
        for q, m in (comps or {}).items():
            if m.shape != (target.dim(q), source.dim(q)):
                raise DimensionError(f"component {q} has shape {m.shape}, expected "
                                     f"{(target.dim(q), source.dim(q))}")
            if not m.is_zero():
                self.comps[q] = m
        if check and not self.is_chain_map():
            raise ComplexError("map does not commute with differentials")

    def at(self, q: int) -> Mat:
        m = self.comps.get(q)
        if m is None:
            return Mat(self.target.dim(q), self.source.dim(q))
        return m

    def degrees(self) -> list[int]:
        return sorted(set(self.source.dims) | set(self.target.dims))

    def is_chain_map(self) -> bool:
        s, t = self.source, self.target
        for q in set(s.dims) | set(t.dims) | {q - s.step for q in t.dims}:
            if t.d(q) @ self.at(q) != self.at(q + s.step) @ s.d(q):
                return False
        return True

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChainMap):
            return NotImplemented
        return all(self.at(q) == other.at(q) for q in set(self.degrees()) | set(other.degrees()))

    def __add__(self, other: "ChainMap") -> "ChainMap":
        qs = set(self.comps) | set(other.comps)
        return ChainMap(self.source, self.target, {q: self.at(q) + other.at(q) for q in qs})

    def __neg__(self) -> "ChainMap":
        return ChainMap(self.source, self.target, {q: -m for q, m in self.comps.items()})

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        return self + (-other)

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        """Composition self ∘ other."""
        qs = set(self.comps) & set(other.comps)
        return ChainMap(other.source, self.target,
                        {q: self.comps[q] @ other.comps[q] for q in qs})

    def to_json(self) -> dict:
        return {"source": self.source.to_json(), "target": self.target.to_json(),
                "comps": {str(q): mat_to_json(m) for q, m in sorted(self.comps.items())}}

    @classmethod
    def from_json(cls, obj: dict) -> "ChainMap":
        s = Complex.from_json(obj["source"])
        t = Complex.from_json(obj["target"])
        comps = {int(q): mat_from_json(r, t.dim(int(q)), s.dim(int(q)))
                 for q, r in obj.get("comps", {}).items()}
        return cls(s, t, comps)


def identity_map(c: Complex) -> ChainMap:
    return ChainMap(c, c, {q: Mat.identity(n) for q, n in c.dims.items()})


def zero_map(s: Complex, t: Complex) -> ChainMap:
    return ChainMap(s, t, {})


class Homotopy:
    """Data h with from - to = d h + h d; h raises chain degree by one."""

    __slots__ = ("frm", "to", "comps")

    def __init__(self, frm: ChainMap, to: ChainMap, comps: dict):
        self.frm = frm
        self.to = to
        self.comps = dict(comps)

    def at(self, q: int) -> Mat:
        s, t = self.frm.source, self.frm.target
        m = self.comps.get(q)
        if m is None:
            return Mat(t.dim(q - s.step), s.dim(q))
        return m


def verify_homotopy(h: Homotopy, degrees: Iterable[int] | None = None) -> bool:
    s, t = h.frm.source, h.frm.target
    step = s.step
    for q in (set(s.dims) | set(t.dims)) if degrees is None else degrees:
        lhs = h.frm.at(q) - h.to.at(q)
        rhs = t.d(q - step) @ h.at(q) + h.at(q + step) @ s.d(q)
        if lhs != rhs:
            return False
    return True


# homology


def cycles(c: Complex, q: int) -> Mat:
    return kernel_basis(c.d(q))


def boundaries(c: Complex, q: int) -> Mat:
    return image_basis(c.d_into(q))


def homology(c: Complex, q: int) -> tuple[int, Mat]:
    """Dimension of H_q and a deterministic basis of representing cycles."""
    z = cycles(c, q)
    b = boundaries(c, q)
    if z.cols == 0:
        return 0, z
    _, piv = rref(hstack([b, z]))
    chosen = [p - b.cols for p in piv if p >= b.cols]
    return len(chosen), z.select_columns(chosen)


def homology_dim(c: Complex, q: int) -> int:
    return rank_ker(c.d(q)) - rank(c.d_into(q))


def rank_ker(m: Mat) -> int:
    return m.cols - rank(m)


def homology_dims(c: Complex, degrees: Iterable[int]) -> dict[int, int]:
    return {q: homology_dim(c, q) for q in degrees}


def is_acyclic(c: Complex, degrees: Iterable[int] | None = None) -> bool:
    if degrees is None:
        degrees = c.degrees()
    return all(homology_dim(c, q) == 0 for q in degrees)


def induced_rank(f: ChainMap, q: int) -> int:
    """Rank of H_q(f)."""
    _, reps = homology(f.source, q)
    if reps.cols == 0:
        return 0
    b = boundaries(f.target, q)
    img = f.at(q) @ reps
    return rank(hstack([b, img])) - b.cols


def is_quasi_iso(f: ChainMap, degrees: Iterable[int] | None = None) -> bool:
    """H(f) is an isomorphism in every listed degree (default: all degrees)."""
    if degrees is None:
        degrees = sorted(set(f.source.dims) | set(f.target.dims))
    for q in degrees:
        ha = homology_dim(f.source, q)
        hb = homology_dim(f.target, q)
        if ha != hb:
            return False
        if ha and induced_rank(f, q) != ha:
            return False
    return True


def mapping_cone(f: ChainMap) -> Complex:
    """c_n = B_n ⊕ A_{n-1} with d(b, a) = (d b + f a, -d a); cochains mirror degrees."""
    a, b = f.source, f.target
    step = a.step
    degs = set(b.dims) | {q - step for q in a.dims}
    dims = {q: b.dim(q) + a.dim(q + step) for q in degs}
    diff = {}
    for q in degs:
        # source B_q ⊕ A_{q+step} -> target B_{q+step} ⊕ A_{q+2 step}
        rs = [b.dim(q + step), a.dim(q + 2 * step)]
        cs = [b.dim(q), a.dim(q + step)]
        diff[q] = blocks(rs, cs, {(0, 0): b.d(q), (0, 1): f.at(q + step),
                                  (1, 1): -a.d(q + step)})
    return Complex(a.direction, dims, diff, check=False)


def cone_is_acyclic(f: ChainMap, degrees: Iterable[int] | None = None) -> bool:
    c = mapping_cone(f)
    if degrees is None:
        degrees = c.window()
    return is_acyclic(c, degrees)


def cone_contraction(c: Complex) -> Homotopy:
    """Contracting homotopy of cone(id_c): (b, a) ↦ (0, b)."""
    cone = mapping_cone(identity_map(c))
    step = c.step
    comps = {}
    for q in cone.dims:
        # cone_q = C_q ⊕ C_{q+step}  ->  cone_{q-step} = C_{q-step} ⊕ C_q
        comps[q] = blocks([c.dim(q - step), c.dim(q)], [c.dim(q), c.dim(q + step)],
                          {(1, 0): Mat.identity(c.dim(q))})
    return Homotopy(identity_map(cone), zero_map(cone, cone), comps)


def direct_sum(*cs: Complex) -> Complex:
    direction = cs[0].direction
    degs = set().union(*(c.dims for c in cs))
    dims = {q: sum(c.dim(q) for c in cs) for q in degs}
    diff = {q: block_diag([c.d(q) for c in cs]) for q in degs}
    return Complex(direction, dims, diff, check=False)


def sum_inclusions(cs: list[Complex], total: Complex) -> list[ChainMap]:
    out = []
    offs = {q: 0 for q in total.dims}
    for c in cs:
        comps = {}
        for q, n in c.dims.items():
            comps[q] = Mat.from_entries(total.dim(q), n,
                                        {(offs[q] + k, k): 1 for k in range(n)})
            offs[q] += n
        out.append(ChainMap(c, total, comps))
    return out


def map_sum(fs: list[ChainMap]) -> ChainMap:
    s = direct_sum(*[f.source for f in fs])
    t = direct_sum(*[f.target for f in fs])
    degs = set(s.dims) | set(t.dims)
    return ChainMap(s, t, {q: block_diag([f.at(q) for f in fs]) for q in degs})


def shift(c: Complex, k: int) -> Complex:
    """Reindex so that degree q moves to q+k (no sign change)."""
    return Complex(c.direction, {q + k: n for q, n in c.dims.items()},
                   {q + k: m for q, m in c.diff.items()}, check=False)


# tensor products (Koszul sign on the second factor)


def tensor_layout(a: Complex, b: Complex) -> dict:
    """Offsets of the (i, j) blocks of (a⊗b)_{i+j}, blocks ordered by i."""
    lay: dict = {}
    for i in sorted(a.dims):
        for j in sorted(b.dims):
            q = i + j
            lay.setdefault(q, [])
            lay[q].append((i, j))
    out = {}
    for q, pairs in lay.items():
        off = 0
        for (i, j) in sorted(pairs):
            out[(i, j)] = off
            off += a.dim(i) * b.dim(j)
    return out


def tensor(a: Complex, b: Complex) -> Complex:
    if a.direction != b.direction:
        raise ComplexError("direction mismatch")
    step = a.step
    lay = tensor_layout(a, b)
    dims: dict = {}
    for (i, j) in lay:
        dims[i + j] = dims.get(i + j, 0) + a.dim(i) * b.dim(j)
    entries: dict = {q: {} for q in dims}
    for (i, j), off in lay.items():
        q = i + j
        # d(x ⊗ y) = dx ⊗ y + (-1)^i x ⊗ dy
        if (i + step, j) in lay:
            m = kron(a.d(i), Mat.identity(b.dim(j)))
            o2 = lay[(i + step, j)]
            for r, c, v in m.entries():
                entries[q][(o2 + r, off + c)] = entries[q].get((o2 + r, off + c), 0) + v
        if (i, j + step) in lay:
            m = kron(Mat.identity(a.dim(i)), b.d(j))
            if i % 2:
                m = -m
            o2 = lay[(i, j + step)]
            for r, c, v in m.entries():
                entries[q][(o2 + r, off + c)] = entries[q].get((o2 + r, off + c), 0) + v
    diff = {q: Mat.from_entries(dims.get(q + step, 0), dims[q], e) for q, e in entries.items()}
    return Complex(a.direction, dims, diff, check=False)


def tensor_maps(f: ChainMap, g: ChainMap) -> ChainMap:
    """f ⊗ g for degree-zero maps (no sign)."""
    s = tensor(f.source, g.source)
    t = tensor(f.target, g.target)
    ls = tensor_layout(f.source, g.source)
    lt = tensor_layout(f.target, g.target)
    entries: dict = {q: {} for q in set(s.dims) | set(t.dims)}
    for (i, j), off in ls.items():
        if (i, j) not in lt:
            continue
        m = kron(f.at(i), g.at(j))
        o2 = lt[(i, j)]
        for r, c, v in m.entries():
            entries[i + j][(o2 + r, off + c)] = v
    comps = {q: Mat.from_entries(t.dim(q), s.dim(q), e) for q, e in entries.items()}
    return ChainMap(s, t, comps)


# double complexes


class DoubleComplex:
    """Bigraded pieces (n, p) with commuting differentials.

    ``horiz[(n, p)]`` moves the first index by one step (the simplicial
    direction), ``vert[(n, p)]`` the second (the internal direction).
    """

    def __init__(self, direction: str, dims: dict, horiz: dict, vert: dict):
        self.direction = direction
        self.dims = {k: v for k, v in dims.items() if v}
        self.horiz = dict(horiz)
        self.vert = dict(vert)

    @property
    def step(self) -> int:
        return -1 if self.direction == CHAIN else 1

    def dim(self, n: int, p: int) -> int:
        return self.dims.get((n, p), 0)

    def h(self, n: int, p: int) -> Mat:
        m = self.horiz.get((n, p))
        return m if m is not None else Mat(self.dim(n + self.step, p), self.dim(n, p))

    def v(self, n: int, p: int) -> Mat:
        m = self.vert.get((n, p))
        return m if m is not None else Mat(self.dim(n, p + self.step), self.dim(n, p))

    def validate(self) -> None:
        s = self.step
        for (n, p) in self.dims:
            if not (self.h(n + s, p) @ self.h(n, p)).is_zero():
                raise ComplexError(f"horizontal d² ≠ 0 at {(n, p)}")
            if not (self.v(n, p + s) @ self.v(n, p)).is_zero():
                raise ComplexError(f"vertical d² ≠ 0 at {(n, p)}")
            if self.v(n + s, p) @ self.h(n, p) != self.h(n, p + s) @ self.v(n, p):
                raise ComplexError(f"differentials do not commute at {(n, p)}")

    def transpose(self) -> "DoubleComplex":
        dims = {(p, n): d for (n, p), d in self.dims.items()}
        return DoubleComplex(self.direction, dims,
                             {(p, n): m for (n, p), m in self.vert.items()},
                             {(p, n): m for (n, p), m in self.horiz.items()})


def total_layout(dims: dict, degrees: Iterable[int] | None = None) -> dict:
    """Offsets of bidegree blocks inside each total degree, ordered by n."""
    by_q: dict = {}
    for (n, p), d in dims.items():
        by_q.setdefault(n + p, []).append((n, p))
    out = {}
    sizes = {}
    for q, keys in by_q.items():
        off = 0
        for key in sorted(keys):
            out[key] = off
            off += dims[key]
        sizes[q] = off
    return {"offset": out, "size": sizes}


def total_complex(k: DoubleComplex, degrees: Iterable[int] | None = None) -> Complex:
    """Total complex with d = d_vert + (-1)^p d_horiz on bidegree (n, p)."""
    dims = k.dims
    if degrees is not None:
        keep = set(degrees)
        dims = {key: v for key, v in dims.items() if key[0] + key[1] in keep}
    lay = total_layout(dims)
    off, size = lay["offset"], lay["size"]
    s = k.step
    entries: dict = {q: {} for q in size}
    for (n, p) in dims:
        q = n + p
        o = off[(n, p)]
        if (n + s, p) in off:
            m = k.h(n, p)
            o2 = off[(n + s, p)]
            sign = -1 if p % 2 else 1
            e = entries[q]
            for r, c, v in m.entries():
                e[(o2 + r, o + c)] = e.get((o2 + r, o + c), 0) + sign * v
        if (n, p + s) in off:
            m = k.v(n, p)
            o2 = off[(n, p + s)]
            e = entries[q]
            for r, c, v in m.entries():
                e[(o2 + r, o + c)] = e.get((o2 + r, o + c), 0) + v
    diff = {q: Mat.from_entries(size.get(q + s, 0), size[q], e) for q, e in entries.items()}
    return Complex(k.direction, size, diff, check=False)


def agree_on_homology(f: ChainMap, g: ChainMap, degrees: Iterable[int]) -> bool:
    """f and g induce the same map on homology in the listed degrees."""
    t = f.target
    for q in degrees:
        z = cycles(f.source, q)
        if not z.cols:
            continue
        diff = (f.at(q) - g.at(q)) @ z
        if diff.is_zero():
            continue
        b = boundaries(t, q)
        if not b.cols or not in_span(b, diff):
            return False
    return True


def find_homotopy(f: ChainMap, g: ChainMap, degrees: Iterable[int] | None = None) -> Homotopy | None:
    """Solve f - g = d h + h d for h (a linear system); None when no homotopy exists."""
    s, t = f.source, f.target
    step = s.step
    degs = sorted(set(s.dims) | set(t.dims)) if degrees is None else sorted(degrees)
    # unknowns: h_q : s_q -> t_{q-step}
    var = {}
    n = 0
    for q in set(s.dims):
        for r in range(t.dim(q - step)):
            for c in range(s.dim(q)):
                var[(q, r, c)] = n
                n += 1
    rows, rhs = [], []
    for q in degs:
        # (d_t h_q + h_{q+step} d_s)[r, c] = (f - g)_q[r, c]
        target = (f.at(q) - g.at(q))
        dt = t.d(q - step)
        ds = s.d(q)
        for r in range(t.dim(q)):
            for c in range(s.dim(q)):
                row = {}
                for k in range(t.dim(q - step)):
                    x = dt.get(r, k)
                    if x and (q, k, c) in var:
                        row[var[(q, k, c)]] = row.get(var[(q, k, c)], 0) + x
                for k in range(s.dim(q + step)):
                    x = ds.get(k, c)
                    if x and (q + step, r, k) in var:
                        row[var[(q + step, r, k)]] = row.get(var[(q + step, r, k)], 0) + x
                rows.append({j: v for j, v in row.items() if v})
                rhs.append(target.get(r, c))
    if not rows:
        return Homotopy(f, g, {})
    from .linalg import solve_many
    A = Mat(len(rows), n, rows)
    x = solve_many(A, Mat.from_columns(len(rhs), [rhs]))
    if x is None:
        return None
    comps = {}
    for q in set(s.dims):
        comps[q] = Mat.from_entries(t.dim(q - step), s.dim(q),
                                    {(r, c): x.get(var[(q, r, c)], 0)
                                     for r in range(t.dim(q - step)) for c in range(s.dim(q))})
    return Homotopy(f, g, comps)
