"""Machine checks of the descent axioms on seeded instances.

Every suite is a pair build(rng, N) -> instance, check(instance, N, Q) -> (ok, detail).
Instances are dicts of encodable values, so a failing instance is written out
verbatim and re-checked after decoding (``recheck``).
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import Callable

from . import codec
from .complexes import (CHAIN, COCHAIN, ChainMap, Complex, agree_on_homology, cone_contraction,
                        find_homotopy, homology_dims, identity_map, is_acyclic, is_quasi_iso,
                        mapping_cone, tensor, tensor_maps, verify_homotopy)
from .generate import (Grid, MAX_TRUNCATION, ProfileError, _random_chain_map, acyclic_complex,
                       random_complex, random_degreewise_qis, random_grid, random_labeled_map,
                       random_simplicial, random_simplicial_map, random_space_object, vtensor_map)
from .linalg import Mat, hstack, is_invertible
from .simple import (EXACT, HOMOLOGY, aw_map, aw_shuffle_normalized_identity, diagonal_map,
                     iterated_simple_map, iterated_simple_total, lambda_mu_composites, lambda_rho,
                     moore_section, normalized_simple, shuffle_map, simple, simple_map,
                     simple_total, total_map, total_of)
from .simplicial import (COSIMPLICIAL, SIMPLICIAL, Bisimplicial, BisimplicialMap, Cylinder,
                         FiniteSimplicialSet, SSetMap, SimplicialMap, Truncated, boundary_simplex,
                         circle, cone, constant, constant_columns, constant_map, cylinder_map,
                         degen_keys, diagonal, disjoint_points, disjoint_union, external_tensor,
                         external_tensor_map, face_keys, identity_smap, inverse_order_map,
                         linearize, linearize_map, point, standard_simplex, sum_injections,
                         sum_objects, zero_smap)


class SuiteError(ValueError):
    pass


@dataclass
class Suite:
    name: str
    axiom: str
    proxy: str
    build: Callable
    check: Callable
    instances: int = 50
    N: int = 4
    cosimplicial: bool = False

    def max_degree(self, N: int) -> int:
        return N if self.cosimplicial else N - 1


SUITES: dict[str, Suite] = {}


def suite(name, axiom, proxy, instances=50, N=4, cosimplicial=False):
    def deco(pair):
        build, check = pair()
        SUITES[name] = Suite(name, axiom, proxy, build, check, instances, N, cosimplicial)
        return pair
    return deco


def instance_rng(name: str, seed: int, index: int) -> random.Random:
    # string seeds are hashed with sha512 by random, so this is stable across runs
    return random.Random(f"{name}:{seed}:{index}")


def resolve_config(s: Suite, N: int | None, Q: int | None) -> tuple[int, int]:
    N = s.N if N is None else N
    if not 1 <= N <= MAX_TRUNCATION:
        raise ProfileError(f"truncation must be in 1..{MAX_TRUNCATION}")
    top = s.max_degree(N)
    Q = top if Q is None else Q
    if not 0 <= Q <= top:
        raise ProfileError(f"max degree must be in 0..{top} for truncation {N}")
    return N, Q


def run_check(s: Suite, inst: dict, N: int, Q: int) -> tuple[bool, str]:
    try:
        ok, detail = s.check(inst, N, Q)
    except (ArithmeticError, ValueError, KeyError, IndexError) as exc:
        return False, f"error: {type(exc).__name__}: {exc}"
    return bool(ok), detail


def run_suite(name: str, seed: int = 0, instances: int | None = None, N: int | None = None,
              Q: int | None = None) -> dict:
    if name not in SUITES:
        raise SuiteError(f"unknown suite {name!r}")
    s = SUITES[name]
    N, Q = resolve_config(s, N, Q)
    count = s.instances if instances is None else instances
    failures = []
    outcomes: dict[str, int] = {}
    for i in range(count):
        inst = s.build(instance_rng(name, seed, i), N, i)
        ok, detail = run_check(s, inst, N, Q)
        if ok:
            outcomes[detail] = outcomes.get(detail, 0) + 1
        else:
            failures.append({"index": i, "detail": detail, "instance": codec.encode(inst)})
    return {"axiom": s.axiom, "suite": name, "proxy": s.proxy, "seed": seed,
            "truncation": N, "max_degree": Q, "instances": count,
            "passed": count - len(failures), "outcomes": outcomes, "failures": failures,
            "ok": not failures}


def counterexample(report: dict, failure: dict) -> dict:
    return {"suite": report["suite"], "axiom": report["axiom"], "seed": report["seed"],
            "truncation": report["truncation"], "max_degree": report["max_degree"],
            "index": failure["index"], "detail": failure["detail"],
            "instance": failure["instance"]}


def recheck(ce: dict) -> tuple[bool, str]:
    """Decode a stored counterexample and run its single check again."""
    try:
        s = SUITES[ce["suite"]]
        N, Q = resolve_config(s, ce["truncation"], ce["max_degree"])
        inst = codec.decode(ce["instance"])
    except KeyError as exc:
        raise SuiteError(f"counterexample lacks {exc}") from exc
    return run_check(s, inst, N, Q)


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=1) + "\n"


# small helpers


def _upto(Q: int) -> range:
    return range(Q + 1)


def _qis(f: ChainMap, degrees) -> bool:
    return is_quasi_iso(f, degrees)


def _s(f: SimplicialMap, Q: int) -> ChainMap:
    return simple_map(f, Q)


def _flags(**kw) -> str:
    return " ".join(f"{k}={v}" for k, v in kw.items())


def _pick_qmax(X: Truncated, N: int, Q: int) -> tuple[int, range]:
    """Simplicial: simple to Q, trusted <= Q.  Cosimplicial: cosimple to N, trusted <= Q-1."""
    if X.kind == SIMPLICIAL:
        return Q, _upto(Q)
    return N, range(min(Q, N - 1) + 1)


# (S3) coproducts


def _coproduct_map(X: Truncated, Y: Truncated, qmax: int) -> tuple[ChainMap, Complex]:
    T = sum_objects(X, Y)
    ix, iy = sum_injections([X, Y], T)
    sx, sy, st = total_of(X, qmax), total_of(Y, qmax), total_of(T, qmax)
    a = total_map(ix, qmax, sx, st)
    b = total_map(iy, qmax, sy, st)
    comps = {q: hstack([a.at(q), b.at(q)], rows=st.complex.dim(q)) for q in st.layout.size}
    from .complexes import direct_sum
    return ChainMap(direct_sum(sx.complex, sy.complex), st.complex, comps), st.complex


@suite("s3", "S3", EXACT)
def _s3():
    def build(rng, N, index=0):
        direction = rng.choice([CHAIN, CHAIN, COCHAIN])
        X = random_simplicial(rng, N, direction, 1, 2, top=1)
        Y = random_simplicial(rng, N, direction, 1, 2, top=1)
        return {"X": X, "Y": Y}

    def check(inst, N, Q):
        X, Y = inst["X"], inst["Y"]
        qmax, _ = _pick_qmax(X, N, Q)
        m, tot = _coproduct_map(X, Y, qmax)
        for q in tot.dims:
            M = m.at(q)
            if M.rows != M.cols or not is_invertible(M):
                return False, f"canonical map not invertible in degree {q}"
        if not m.is_chain_map():
            return False, "canonical map is not a chain map"
        return True, _flags(kind=X.kind)
    return build, check


# (S4) Eilenberg–Zilber


@suite("s4", "S4", HOMOLOGY, N=3)
def _s4():
    def build(rng, N, index=0):
        f, _ = random_simplicial_map(rng, N, CHAIN, 1, 2, top=1)
        g, _ = random_simplicial_map(rng, N, CHAIN, 1, 2, top=1)
        return {"f": f, "g": g}

    def check(inst, N, Q):
        F = external_tensor_map(inst["f"], inst["g"])
        out = []
        for Z in (F.source, F.target):
            dS = simple_total(diagonal(Z), Q)
            iS = iterated_simple_total(Z, Q)
            aw = aw_map(Z, Q, dS, iS)
            nab = shuffle_map(Z, Q, dS, iS)
            if not aw.is_chain_map() or not nab.is_chain_map():
                return False, "AW or shuffle is not a chain map"
            if not _qis(aw, _upto(Q)) or not _qis(nab, _upto(Q)):
                return False, "AW or shuffle is not a quasi-isomorphism"
            if not aw_shuffle_normalized_identity(Z, Q):
                return False, "AW∘shuffle is not the identity on normalized simples"
            out.append((dS, iS, aw, nab))
        (dS, iS, awS, nS), (dT, iT, awT, nT) = out
        sD = simple_map(diagonal_map(F), Q, dS, dT)
        ss = iterated_simple_map(F, Q, iS, iT)
        if awT @ sD != ss @ awS or nT @ ss != sD @ nS:
            return False, "AW or shuffle is not natural"
        return True, "ok"
    return build, check


# (S5) λ as a weak retract


@suite("s5", "S5", EXACT)
def _s5():
    def build(rng, N, index=0):
        direction = rng.choice([CHAIN, CHAIN, COCHAIN])
        A, _ = random_complex(rng, direction, 0, 2, 3)
        B, _ = random_complex(rng, direction, 0, 2, 3)
        return {"A": A, "f": _random_chain_map(rng, A, B)}

    def check(inst, N, Q):
        A, f = inst["A"], inst["f"]
        kind = SIMPLICIAL if A.direction == CHAIN else COSIMPLICIAL
        qmax, trusted = _pick_qmax(constant(A, N, kind), N, Q)
        lamA, rhoA, totA = lambda_rho(A, N, qmax)
        lamB, _, totB = lambda_rho(f.target, N, qmax)
        sf = total_map(constant_map(f, N, kind), qmax, totA, totB)
        for q in totA.layout.size:
            if A.direction == CHAIN:
                if lamA.at(q) @ rhoA.at(q) != Mat.identity(A.dim(q)):
                    return False, f"λ∘ρ ≠ id in degree {q}"
                if lamB.at(q) @ sf.at(q) != f.at(q) @ lamA.at(q):
                    return False, f"λ not natural in degree {q}"
            else:
                if rhoA.at(q) @ lamA.at(q) != Mat.identity(A.dim(q)):
                    return False, f"ρ∘λ ≠ id in degree {q}"
                if sf.at(q) @ lamA.at(q) != lamB.at(q) @ f.at(q):
                    return False, f"λ not natural in degree {q}"
        if not _qis(lamA, trusted):
            return False, "λ is not a quasi-isomorphism"
        return True, _flags(direction=A.direction)
    return build, check


# (S6) degreewise equivalences


@suite("s6", "S6", HOMOLOGY)
def _s6():
    def build(rng, N, index=0):
        direction = rng.choice([CHAIN, CHAIN, COCHAIN])
        return {"f": random_degreewise_qis(rng, N, direction, 1, 2, top=1)}

    def check(inst, N, Q):
        f = inst["f"]
        if not all(is_quasi_iso(c) for c in f.comps):
            return False, "instance is not a degreewise equivalence"
        qmax, trusted = _pick_qmax(f.source, N, Q)
        return _qis(total_map(f, qmax), trusted), _flags(kind=f.source.kind)
    return build, check


# (S7) cones of constant maps


@suite("s7", "S7", HOMOLOGY, N=3)
def _s7():
    def build(rng, N, index=0):
        f, label = random_labeled_map(rng, CHAIN, rng.random() < 0.5, 0, max(0, N - 2), 3)
        return {"f": f, "label": label}

    def check(inst, N, Q):
        f, label = inst["f"], inst["label"]
        if is_quasi_iso(f) != label:
            return False, "generator label disagrees with the homology oracle"
        acyc = is_acyclic(simple(cone(constant_map(f, N)), Q), _upto(Q))
        return acyc == label, _flags(equivalence=label)
    return build, check


# (S8) inverse order


@suite("s8", "S8", HOMOLOGY)
def _s8():
    def build(rng, N, index=0):
        f, _ = random_simplicial_map(rng, N, CHAIN, 1, 2, top=1)
        return {"f": f}

    def check(inst, N, Q):
        f = inst["f"]
        a = _qis(_s(f, Q), _upto(Q))
        b = _qis(_s(inverse_order_map(f), Q), _upto(Q))
        return a == b, _flags(equivalence=a)
    return build, check


# compatibility of λ and μ


@suite("compat", "lambda-mu compatibility", HOMOLOGY, N=3)
def _compat():
    def build(rng, N, index=0):
        return {"X": random_simplicial(rng, N, CHAIN, 1, 2, top=1)}

    def check(inst, N, Q):
        X = inst["X"]
        c1, c2, tot = lambda_mu_composites(X, Q)
        idm = identity_map(tot.complex)
        for c in (c1, c2):
            if not agree_on_homology(c, idm, _upto(Q)):
                return False, "composite is not the identity on homology"
        return True, _flags(bit_exact=(c1 == idm and c2 == idm))
    return build, check


# (S2) saturation spot checks


@suite("s2", "S2", HOMOLOGY)
def _s2():
    def build(rng, N, index=0):
        a = rng.random() < 0.5
        f, la = random_labeled_map(rng, CHAIN, a, 0, 2, 3)
        # g: target(f) -> target(f) ⊕ acyclic, an equivalence by construction
        from .complexes import direct_sum, sum_inclusions
        B = f.target
        W = acyclic_complex(rng, CHAIN, 0, 2)
        inc = sum_inclusions([B, W], direct_sum(B, W))[0]
        return {"f": f, "label": la, "g": inc}

    def check(inst, N, Q):
        f, g, la = inst["f"], inst["g"], inst["label"]
        gf = g @ f
        if not is_quasi_iso(g):
            return False, "construction should give an equivalence"
        if is_quasi_iso(gf) != la or is_quasi_iso(f) != la:
            return False, "2-out-of-3 fails"
        if not is_quasi_iso(identity_map(f.source)):
            return False, "identity not in E"
        return True, _flags(equivalence=la)
    return build, check


# the double cylinder of a commuting 3x3 grid


def theta_check(grid: Grid) -> tuple[bool, str]:
    """Build Θ: Cyl(δ', δ) -> Cyl(f^, g^) as a block permutation and check the identities."""
    if not grid.commutes():
        raise SuiteError("grid does not commute")
    (g1, f1), (g, f), (g2, f2) = grid.top, grid.mid, grid.bot
    c_top, c_mid, c_bot = Cylinder(f1, g1), Cylinder(f, g), Cylinder(f2, g2)
    delta = cylinder_map(c_mid, c_top, grid.beta, grid.gamma, grid.alpha)
    delta2 = cylinder_map(c_mid, c_bot, grid.beta2, grid.gamma2, grid.alpha2)
    rows = Cylinder(delta2, delta)
    col_Z = Cylinder(grid.alpha2, grid.alpha)
    col_X = Cylinder(grid.beta2, grid.beta)
    col_Y = Cylinder(grid.gamma2, grid.gamma)
    fhat = cylinder_map(col_X, col_Y, f, f2, f1)
    ghat = cylinder_map(col_X, col_Z, g, g2, g1)
    cols = Cylinder(fhat, ghat)
    row_of = lambda a: c_bot if a == "Y" else c_top if a == "Z" else c_mid
    col_of = lambda b: col_Y if b == "Y" else col_Z if b == "Z" else col_X
    comps = []
    N = rows.N
    for n in range(N + 1):
        src, tgt = rows.objects[n], cols.objects[n]
        cm = {}
        for q in set(src.dims) | set(tgt.dims):
            ent = {}
            o1, o2 = rows.block_offsets(n, q), cols.block_offsets(n, q)
            for a in rows.labels[n]:
                inner1 = row_of(a).block_offsets(n, q)
                for b in row_of(a).labels[n]:
                    inner2 = col_of(b).block_offsets(n, q)
                    s0 = o1[a] + inner1[b]
                    t0 = o2[b] + inner2[a]
                    for k in range(row_of(a).part(n, b).dim(q)):
                        ent[(t0 + k, s0 + k)] = 1
            cm[q] = Mat.from_entries(tgt.dim(q), src.dim(q), ent)
        comps.append(ChainMap(src, tgt, cm))
    theta = SimplicialMap(rows.obj, cols.obj, comps)
    for n, c in enumerate(theta.comps):
        for q, m in c.comps.items():
            if m.rows != m.cols or not is_invertible(m):
                return False, f"Θ not invertible at ({n}, {q})"
    if not theta.is_natural():
        return False, "Θ is not simplicial"
    psi_p = cylinder_map(c_bot, cols, col_X.I_Y, col_Y.I_Y, col_Z.I_Y)
    psi = cylinder_map(col_Y, rows, c_mid.I_Y, c_bot.I_Y, c_top.I_Y)
    if (theta @ rows.I_Y).comps != psi_p.comps:
        return False, "Θ∘I ≠ ψ'"
    if (theta @ psi).comps != cols.I_Y.comps:
        return False, "Θ∘ψ ≠ I"
    return True, "ok"


def _grid_to_json(grid: Grid) -> dict:
    return {k: codec.encode(getattr(grid, k)) for k in
            ("top", "mid", "bot", "alpha", "alpha2", "beta", "beta2", "gamma", "gamma2")}


def _grid_from_json(body: dict) -> Grid:
    vals = {k: codec.decode(v) for k, v in body.items()}
    for k in ("top", "mid", "bot"):
        vals[k] = tuple(vals[k])
    return Grid(**vals)


Grid.to_json = _grid_to_json
codec.register("Grid", _grid_from_json)


@suite("cyl-theta", "cylinder iteration", EXACT, instances=20, N=3)
def _cyl_theta():
    def build(rng, N, index=0):
        return {"grid": random_grid(rng, N, CHAIN, 1, 2)}

    def check(inst, N, Q):
        return theta_check(inst["grid"])
    return build, check


# acyclicity and cylinders


@suite("acycl-cyl", "cylinder acyclicity", HOMOLOGY, N=3)
def _acycl_cyl():
    def build(rng, N, index=0):
        top, hi = rng.choice([(1, 0), (0, 1)])
        V = random_space_object(rng, N, 2, top)
        f0, _ = random_labeled_map(rng, CHAIN, rng.random() < 0.5, 0, hi, 2)
        A = f0.source
        mode = rng.choice(["random", "inclusion", "same", "identity"])
        if mode == "random":
            g0 = _random_chain_map(rng, A, random_complex(rng, CHAIN, 0, hi, 2)[0])
        elif mode == "inclusion":
            from .complexes import direct_sum, sum_inclusions
            W = acyclic_complex(rng, CHAIN, 0, max(hi, 1))
            g0 = sum_inclusions([A, W], direct_sum(A, W))[0]
        elif mode == "same":
            g0 = f0
        else:
            g0 = identity_map(A)
        return {"f": vtensor_map(V, f0), "g": vtensor_map(V, g0)}

    def check(inst, N, Q):
        f, g = inst["f"], inst["g"]
        c = Cylinder(f, g)
        deg = _upto(Q)
        ef, eg = _qis(_s(f, Q), deg), _qis(_s(g, Q), deg)
        ez, ey = _qis(_s(c.J_Z, Q), deg), _qis(_s(c.I_Y, Q), deg)
        acyc = is_acyclic(simple(cone(f), Q), deg)
        if ef != ez:
            return False, "s(f) and the Z-end inclusion disagree"
        if eg != ey:
            return False, "s(g) and the Y-end inclusion disagree"
        if ef != acyc:
            return False, "s(f) and acyclicity of the cone disagree"
        return True, _flags(f=ef, g=eg)
    return build, check


@suite("cone-compare", "simplicial cone vs mapping cone", HOMOLOGY, N=3)
def _cone_compare():
    def build(rng, N, index=0):
        f, _ = random_labeled_map(rng, CHAIN, rng.random() < 0.5, 0, max(0, N - 2), 3)
        return {"f": f}

    def check(inst, N, Q):
        f = inst["f"]
        a = homology_dims(simple(cone(constant_map(f, N)), Q), _upto(Q))
        b = homology_dims(mapping_cone(f), _upto(Q))
        if a != b:
            return False, f"homology dims differ: {a} vs {b}"
        return True, _flags(acyclic=not any(a.values()))
    return build, check


# transfer along K: simplicial vector spaces -> chain complexes


class TriTensor:
    """W_{a,b,k} = X_a ⊗ Y_b ⊗ U_k for simplicial vector spaces X, Y, U."""

    def __init__(self, X: Truncated, Y: Truncated, U: Truncated):
        self.f = (X, Y, U)
        self.N = X.N
        self._obj: dict = {}

    def obj(self, key) -> Complex:
        if key not in self._obj:
            X, Y, U = self.f
            a, b, k = key
            self._obj[key] = tensor(tensor(X.objects[a], Y.objects[b]), U.objects[k])
        return self._obj[key]

    def _arrow(self, axis, key, idx, is_face) -> ChainMap:
        maps = []
        tgt = list(key)
        for ax, F in enumerate(self.f):
            n = key[ax]
            if ax == axis:
                maps.append(F.faces[(n, idx)] if is_face else F.degens[(n, idx)])
                tgt[ax] = n - 1 if is_face else n + 1
            else:
                maps.append(identity_map(F.objects[n]))
        m = tensor_maps(tensor_maps(maps[0], maps[1]), maps[2])
        return ChainMap(self.obj(key), self.obj(tuple(tgt)), m.comps)

    def face(self, axis, key, i):
        return self._arrow(axis, key, i, True)

    def degen(self, axis, key, j):
        return self._arrow(axis, key, j, False)

    def bisimplicial(self, place, hax, vax) -> Bisimplicial:
        """(i, j) ↦ W_{place(i, j)}; hax/vax list the axes moved by the first/second index."""
        N = self.N
        objs = {(i, j): self.obj(place(i, j)) for i in range(N + 1) for j in range(N + 1)}

        def arrow(axes, i, j, idx, is_face):
            # the same structure map applied along each listed axis
            key = place(i, j)
            acc = None
            for ax in axes:
                m = self._arrow(ax, key, idx, is_face)
                key = _moved(key, ax, is_face)
                acc = m if acc is None else m @ acc
            return acc
        hf = {(i, j, t): arrow(hax, i, j, t, True) for (i, t) in face_keys(N) for j in range(N + 1)}
        vf = {(i, j, t): arrow(vax, i, j, t, True) for (j, t) in face_keys(N) for i in range(N + 1)}
        hd = {(i, j, t): arrow(hax, i, j, t, False) for (i, t) in degen_keys(N) for j in range(N + 1)}
        vd = {(i, j, t): arrow(vax, i, j, t, False) for (j, t) in degen_keys(N) for i in range(N + 1)}
        return Bisimplicial(N, objs, hf, vf, hd, vd)

    def column_object(self, a: int, b: int) -> Truncated:
        """k ↦ W_{a,b,k}."""
        N = self.N
        return Truncated(SIMPLICIAL, N, [self.obj((a, b, k)) for k in range(N + 1)],
                         {(k, i): self.face(2, (a, b, k), i) for (k, i) in face_keys(N)},
                         {(k, j): self.degen(2, (a, b, k), j) for (k, j) in degen_keys(N)})

    def column_map(self, axis, a, b, idx, is_face) -> SimplicialMap:
        src = self.column_object(a, b)
        a2, b2 = (a + (-1 if is_face else 1), b) if axis == 0 else (a, b + (-1 if is_face else 1))
        tgt = self.column_object(a2, b2)
        return SimplicialMap(src, tgt, [self._arrow(axis, (a, b, k), idx, is_face)
                                        for k in range(self.N + 1)])


def _moved(key, ax, is_face):
    out = list(key)
    out[ax] += -1 if is_face else 1
    return tuple(out)


def _k_of_columns(W: TriTensor, Q: int) -> Bisimplicial:
    """(a, b) ↦ K(k ↦ W_{a,b,k}) as a bisimplicial chain complex."""
    N = W.N
    tots = {(a, b): simple_total(W.column_object(a, b), Q) for a in range(N + 1) for b in range(N + 1)}
    objs = {k: t.complex for k, t in tots.items()}

    def induced(axis, a, b, idx, is_face):
        a2, b2 = (a + (-1 if is_face else 1), b) if axis == 0 else (a, b + (-1 if is_face else 1))
        return simple_map(W.column_map(axis, a, b, idx, is_face), Q, tots[(a, b)], tots[(a2, b2)])
    hf = {(a, b, i): induced(0, a, b, i, True) for (a, i) in face_keys(N) for b in range(N + 1)}
    vf = {(a, b, i): induced(1, a, b, i, True) for (b, i) in face_keys(N) for a in range(N + 1)}
    hd = {(a, b, j): induced(0, a, b, j, False) for (a, j) in degen_keys(N) for b in range(N + 1)}
    vd = {(a, b, j): induced(1, a, b, j, False) for (b, j) in degen_keys(N) for a in range(N + 1)}
    return Bisimplicial(N, objs, hf, vf, hd, vd)


def mu_square(W: TriTensor, Q: int) -> tuple[ChainMap, ChainMap]:
    """The two composites K(DDW) -> s s K(W) of the μ-compatibility square.

    Top: μ' (AW on (a,b) ↦ K W_{a,b,·}) after Θ on (a,k) ↦ W_{a,a,k}.
    Bottom: s(Θ on each slice a) after Θ on (a,k) ↦ W_{a,k,k}.
    """
    N = W.N
    Z1 = W.bisimplicial(lambda a, k: (a, a, k), (0, 1), (2,))
    Z2 = W.bisimplicial(lambda a, k: (a, k, k), (0,), (1, 2))
    psi = _k_of_columns(W, Q)
    top = aw_map(psi, Q) @ aw_map(Z1, Q)
    it_z1 = iterated_simple_total(Z1, Q).complex
    if it_z1 != simple(diagonal(psi), Q):
        raise SuiteError("layout mismatch between K(DZ) and the diagonal of ψZ")
    slices = [W.bisimplicial(lambda b, k, a=a: (a, b, k), (1,), (2,)) for a in range(N + 1)]
    d_tots = [simple_total(diagonal(Za), Q) for Za in slices]
    i_tots = [iterated_simple_total(Za, Q) for Za in slices]

    def slice_map(a, idx, is_face):
        a2 = a - 1 if is_face else a + 1
        comps = {(b, k): W._arrow(0, (a, b, k), idx, is_face) for b in range(N + 1) for k in range(N + 1)}
        return BisimplicialMap(slices[a], slices[a2], comps)

    def family(tots, induced):
        faces = {(a, i): induced(slice_map(a, i, True), tots[a], tots[a - 1]) for (a, i) in face_keys(N)}
        degens = {(a, j): induced(slice_map(a, j, False), tots[a], tots[a + 1]) for (a, j) in degen_keys(N)}
        return Truncated(SIMPLICIAL, N, [t.complex for t in tots], faces, degens)
    S = family(d_tots, lambda F, s, t: simple_map(diagonal_map(F), Q, s, t))
    T = family(i_tots, lambda F, s, t: iterated_simple_map(F, Q, s, t))
    fam = SimplicialMap(S, T, [aw_map(slices[a], Q, d_tots[a], i_tots[a]) for a in range(N + 1)])
    bottom = simple_map(fam, Q) @ aw_map(Z2, Q)
    if simple(S, Q) != iterated_simple_total(Z2, Q).complex:
        raise SuiteError("layout mismatch between K(D sZ) pieces")
    if simple(T, Q) != iterated_simple_total(psi, Q).complex:
        raise SuiteError("layout mismatch between the two iterated simples")
    return top, bottom


def _space_map(rng, N) -> SimplicialMap:
    """A map of simplicial vector spaces; equivalence status decided by the oracle."""
    V = random_space_object(rng, N, 2, N - 1)
    kind = rng.choice(["inclusion", "zero", "scalar"])
    if kind == "inclusion":
        from .generate import dold_kan, random_chain_of_spaces
        parts, bd, C = random_chain_of_spaces(rng, min(N, 2), 2)
        W = dold_kan(parts, bd, N)
        T = sum_objects(V, W)
        return sum_injections([V, W], T)[0]
    if kind == "zero":
        return zero_smap(V, V)
    i = identity_smap(V)
    return i + i


@suite("transfer-k", "transfer along K", HOMOLOGY, instances=10, N=3)
def _transfer_k():
    def build(rng, N, index=0):
        small = lambda: random_space_object(rng, N, 1, 1)
        return {"X": random_space_object(rng, N, 2, N - 1), "Y": random_space_object(rng, N, 2, N - 1),
                "W": [small(), small(), small()], "f": _space_map(rng, N),
                "g": _space_map(rng, N)}

    def check(inst, N, Q):
        X, Y = inst["X"], inst["Y"]
        deg = _upto(Q)
        # DF1: K commutes with sums
        m, tot = _coproduct_map(X, Y, Q)
        if any(not is_invertible(m.at(q)) for q in tot.dims if m.at(q).rows == m.at(q).cols) or \
                any(m.at(q).rows != m.at(q).cols for q in tot.dims):
            return False, "DF1: K(X)⊕K(Y) -> K(X⊕Y) not invertible"
        # DF2(i): λ'∘Θ = K(λ) = id, with Θ = AW on Δ×X
        c1, _, totX = lambda_mu_composites(X, Q)
        if c1 != identity_map(totX.complex):
            return False, "DF2(i): λ'∘Θ is not the identity"
        # DF2(ii): μ-square on a trisimplicial tensor, homology level
        top, bottom = mu_square(TriTensor(*inst["W"]), Q)
        if not agree_on_homology(top, bottom, deg):
            return False, "DF2(ii): μ-square does not commute on homology"
        # transferred axioms: s = diagonal, λ = μ = identity
        if diagonal(constant_columns(X)).faces != X.faces:
            return False, "S5: D(X×Δ) ≠ X"
        f, g = inst["f"], inst["g"]
        for h in (f, g):
            e = _qis(_s(h, Q), deg)
            if e != is_acyclic(simple(cone(h), Q), deg):
                return False, "S7: K-equivalence and cone acyclicity disagree"
            if e != _qis(_s(inverse_order_map(h), Q), deg):
                return False, "S8: Υ changes the equivalence status"
        # S6: rows id_X ⊠ (K-equivalence) give a K-equivalence on the diagonal
        if _qis(_s(g, Q), deg):
            F = external_tensor_map(identity_smap(X), g)
            if not _qis(_s(diagonal_map(F), Q), deg):
                return False, "S6: degreewise K-equivalence not preserved by D"
        return True, _flags(mu_square_bit_exact=(top == bottom))
    return build, check


# transfer along L: simplicial sets -> simplicial vector spaces


def product_diagonal(K: FiniteSimplicialSet, L: FiniteSimplicialSet, N: int) -> Truncated:
    """L(D(K × L)) with basis pairs of simplices in lexicographic order."""
    from .complexes import Complex as Cx
    pairs = [[(s, t) for s in K.simplices(n) for t in L.simplices(n)] for n in range(N + 1)]
    idx = [{p: k for k, p in enumerate(ps)} for ps in pairs]
    objs = [Cx(CHAIN, {0: len(ps)}, {}, check=False) for ps in pairs]

    def arrow(n, n2, op):
        ent = {(idx[n2][op(p)], k): 1 for k, p in enumerate(pairs[n])}
        return ChainMap(objs[n], objs[n2], {0: Mat.from_entries(len(pairs[n2]), len(pairs[n]), ent)})
    faces = {(n, i): arrow(n, n - 1, lambda p, i=i: (K.face(p[0], i), L.face(p[1], i)))
             for (n, i) in face_keys(N)}
    degens = {(n, j): arrow(n, n + 1, lambda p, j=j: (K.degen(p[0], j), L.degen(p[1], j)))
              for (n, j) in degen_keys(N)}
    return Truncated(SIMPLICIAL, N, objs, faces, degens)


def union_map(K: FiniteSimplicialSet, L: FiniteSimplicialSet, N: int) -> SimplicialMap:
    """Canonical L K ⊕ L L -> L(K ⊔ L)."""
    U = disjoint_union(K, L)
    A, B = linearize(K, N), linearize(L, N)
    T = linearize(U, N)
    S = sum_objects(A, B)
    comps = []
    for n in range(N + 1):
        idx = U.index(n)
        src = [("a:" + c, e) for c, e in K.simplices(n)] + [("b:" + c, e) for c, e in L.simplices(n)]
        ent = {(idx[s], k): 1 for k, s in enumerate(src)}
        comps.append(ChainMap(S.objects[n], T.objects[n],
                              {0: Mat.from_entries(T.objects[n].dim(0), S.objects[n].dim(0), ent)}))
    return SimplicialMap(S, T, comps)


def collapse_boundary_to_circle() -> SSetMap:
    """∂Δ[2] -> S¹ sending the edge 02 around the loop, 01 and 12 to the base point."""
    v, e, dv = ("v", (0,)), ("e", (0, 1)), ("v", (0, 0))
    return SSetMap(boundary_simplex(2), circle(),
                   {"0": v, "1": v, "2": v, "01": dv, "12": dv, "02": e})


def to_point(K: FiniteSimplicialSet) -> SSetMap:
    return SSetMap(K, point(), {c: ("*", (0,) * (k + 1)) for c, k in K.dim_of.items()})


def vertex_inclusion() -> SSetMap:
    return SSetMap(point(), standard_simplex(1), {"*": ("0", (0,))})


def interval_mod_boundary() -> SSetMap:
    """Δ[1] -> Δ[1]/∂Δ[1] (one vertex, one loop)."""
    q = FiniteSimplicialSet({0: ["v"], 1: ["e"]}, {"e": [("v", (0,)), ("v", (0,))]}, "Delta[1]/boundary")
    return SSetMap(standard_simplex(1), q, {"0": ("v", (0,)), "1": ("v", (0,)), "01": ("e", (0, 1))})


def transfer_l_cases() -> list[dict]:
    """Fixture checks; expected answers are standard facts about these spaces."""
    cases = [{"kind": "homology", "K": circle(), "dims": [1, 1, 0]},
             {"kind": "homology", "K": boundary_simplex(2), "dims": [1, 1, 0]},
             {"kind": "homology", "K": boundary_simplex(3), "dims": [1, 0, 1]},
             {"kind": "homology", "K": point(), "dims": [1, 0, 0]},
             {"kind": "homology", "K": standard_simplex(1), "dims": [1, 0, 0]},
             {"kind": "homology", "K": interval_mod_boundary().target, "dims": [1, 1, 0]},
             {"kind": "map", "f": collapse_boundary_to_circle(), "equivalence": True},
             {"kind": "map", "f": to_point(circle()), "equivalence": False},
             {"kind": "map", "f": to_point(boundary_simplex(2)), "equivalence": False},
             {"kind": "map", "f": to_point(boundary_simplex(3)), "equivalence": False},
             {"kind": "map", "f": to_point(standard_simplex(1)), "equivalence": True},
             {"kind": "map", "f": to_point(standard_simplex(2)), "equivalence": True},
             {"kind": "map", "f": to_point(disjoint_points(2)), "equivalence": False},
             {"kind": "map", "f": vertex_inclusion(), "equivalence": True},
             {"kind": "map", "f": interval_mod_boundary(), "equivalence": False},
             {"kind": "map", "f": SSetMap(point(), point(), {"*": ("*", (0,))}), "equivalence": True},
             {"kind": "sum", "K": circle(), "L": boundary_simplex(2)},
             {"kind": "sum", "K": point(), "L": standard_simplex(1)},
             {"kind": "diagonal", "K": circle(), "L": standard_simplex(1)},
             {"kind": "diagonal", "K": boundary_simplex(2), "L": disjoint_points(2)},
             {"kind": "diagonal", "K": point(), "L": point()}]
    return cases


@suite("transfer-l", "transfer along L", EXACT, instances=21, N=4)
def _transfer_l():
    def build(rng, N, index=0):
        cases = transfer_l_cases()
        return cases[index % len(cases)]

    def check(inst, N, Q):
        deg = _upto(Q)
        kind = inst["kind"]
        if kind == "homology":
            got = homology_dims(simple(linearize(inst["K"], N), Q), deg)
            want = {q: (inst["dims"][q] if q < len(inst["dims"]) else 0) for q in deg}
            return got == want, _flags(kind=kind, space=inst["K"].name)
        if kind == "map":
            f = inst["f"]
            if not f.is_simplicial():
                return False, "fixture map is not simplicial"
            Lf = linearize_map(f, N)
            e = _qis(_s(Lf, Q), deg)
            if e != inst["equivalence"]:
                return False, f"classification of {f.source.name} -> {f.target.name} is wrong"
            if e != is_acyclic(simple(cone(Lf), Q), deg):
                return False, "S7 in the transferred structure fails"
            return True, _flags(kind=kind, equivalence=e)
        if kind == "sum":
            m = union_map(inst["K"], inst["L"], N)
            if not m.is_natural():
                return False, "DF1 map is not simplicial"
            for c in m.comps:
                M = c.at(0)
                if M.rows != M.cols or not is_invertible(M):
                    return False, "DF1: L(K)⊕L(L) -> L(K⊔L) is not invertible"
            return True, _flags(kind=kind)
        if kind == "diagonal":
            K, L = inst["K"], inst["L"]
            a = product_diagonal(K, L, N)
            b = diagonal(external_tensor(linearize(K, N), linearize(L, N)))
            ok = all(x == y for x, y in zip(a.objects, b.objects)) and \
                a.faces == b.faces and a.degens == b.degens
            return ok, _flags(kind=kind)
        raise SuiteError(f"unknown case kind {kind}")
    return build, check



# the homotopy-equivalence instance: only checks with constructible homotopies


@suite("h-complexes", "homotopy equivalences (partial)", EXACT, N=3)
def _h_complexes():
    def build(rng, N, index=0):
        from .generate import vtensor
        A, _ = random_complex(rng, CHAIN, 0, 2, 2)
        K = rng.choice([point(), standard_simplex(1), circle()])
        B, _ = random_complex(rng, CHAIN, 0, 1, 1)
        return {"A": A, "X": vtensor(linearize(K, N), B)}

    def check(inst, N, Q):
        A, X = inst["A"], inst["X"]
        if not verify_homotopy(cone_contraction(A)):
            return False, "cone of the identity is not contracted"
        deg = _upto(Q)
        lam, rho, tot = lambda_rho(A, N, Q)
        h = find_homotopy(identity_map(tot.complex), rho @ lam, deg)
        if h is None or not verify_homotopy(h, deg):
            return False, "no homotopy id ≃ ρ∘λ"
        qn = normalized_simple(X, Q)
        sec = moore_section(X, Q, qn)
        for q in qn.complex.dims:
            if qn.proj.at(q) @ sec.at(q) != Mat.identity(qn.complex.dim(q)):
                return False, f"normalization section fails in degree {q}"
        h = find_homotopy(identity_map(qn.total.complex), sec @ qn.proj, deg)
        if h is None or not verify_homotopy(h, deg):
            return False, "no homotopy id ≃ section∘projection"
        return True, "ok"
    return build, check


# filtered complexes


def _flag_conservation(X) -> bool:
    from .filtered import graded
    tot: dict = {}
    for k in X.levels():
        for n, d in graded(X, k).dims.items():
            tot[n] = tot.get(n, 0) + d
    return tot == X.complex.dims


@suite("dec-e2", "Dec/E2", EXACT, instances=30, N=3)
def _dec_e2():
    from .filtered import (decalage, decalage_map, is_e2_iso, is_filtered_qis, page_consistency,
                           random_labeled_filtered_map)

    def build(rng, N, index=0):
        f, label = random_labeled_filtered_map(rng, hi=N - 1)
        return {"f": f, "label": label}

    def check(inst, N, Q):
        f, label = inst["f"], inst["label"]
        if not f.is_filtered():
            return False, "map is not filtered"
        fq, e2 = is_filtered_qis(f), is_e2_iso(f)
        if fq != label["filtered_qis"] or e2 != label["e2_iso"]:
            return False, f"label mismatch: {_flags(fqis=fq, e2=e2)} for {label['mode']}"
        if e2 != is_filtered_qis(decalage_map(f)):
            return False, "E2-iso and filtered qis of Dec disagree"
        for X in (f.source, f.target):
            bad = page_consistency(X, 3)
            if bad:
                return False, bad[0]
            D = decalage(X)
            if D.audit() or not _flag_conservation(X) or not _flag_conservation(D):
                return False, "filtration invariants fail"
        return True, _flags(e2=e2, fqis=fq)
    return build, check


@suite("interchange", "(s,s)Dec = Dec(s,delta)", EXACT, instances=20, N=3, cosimplicial=True)
def _interchange():
    from .filtered import SDELTA, SS, random_cosimplicial_filtered, simple_filtered, interchange_holds

    def build(rng, N, index=0):
        return {"X": random_cosimplicial_filtered(rng, N, 1)}

    def check(inst, N, Q):
        X = inst["X"]
        bad = X.audit()
        if bad:
            return False, bad[0]
        for mode in (SS, SDELTA):
            S = simple_filtered(X, mode, Q)
            if S.audit() or not _flag_conservation(S):
                return False, f"simple with {mode} filtration is invalid"
        if not interchange_holds(X, Q):
            return False, "filtrations differ"
        return True, "ok"
    return build, check


@suite("hodge", "Hodge simple", HOMOLOGY, instances=20, N=3, cosimplicial=True)
def _hodge():
    from .filtered import cosimplicial_hodge, hodge_simple, lambda_hodge_check, random_hodge_datum
    from .generate import dualize

    def build(rng, N, index=0):
        D = random_hodge_datum(rng, 2)
        return {"D": D, "V": dualize(random_space_object(rng, N, 2, 1))}

    def check(inst, N, Q):
        D, V = inst["D"], inst["V"]
        bad = hodge_simple(cosimplicial_hodge(V, D), Q).audit()
        if bad:
            return False, bad[0]
        return lambda_hodge_check(D, N, Q)
    return build, check


# triples and resolutions


def _monoid_for(index: int) -> str:
    from .monads import MONOIDS
    names = list(MONOIDS)
    return names[index % len(names)]


@suite("ce", "Cartan-Eilenberg conditions", HOMOLOGY, N=3)
def _ce():
    from .complexes import direct_sum
    from .monads import cobar, derived_value, tensor_triple, theta_identities, verify_ce_conditions

    def build(rng, N, index=0):
        s, _ = random_labeled_map(rng, COCHAIN, True, 0, 2, 2)
        return {"monoid": _monoid_for(index), "s": s, "acyclic": acyclic_complex(rng, COCHAIN, 0, 2)}

    def check(inst, N, Q):
        T = tensor_triple(inst["monoid"])
        s = inst["s"]
        X = s.source
        deg = _upto(Q)
        C = cobar(T, X, N)
        bad = theta_identities(T, C.X, N)
        if bad:
            return False, bad[0]
        rep = verify_ce_conditions(T, X, N, s, deg)
        if not rep.ok:
            return False, "conditions fail: " + json.dumps(rep.to_json(), sort_keys=True)
        Z = direct_sum(X, inst["acyclic"])
        vals = [derived_value("homology", T, Y, N, deg) for Y in (X, s.target, Z)]
        if vals[0] != vals[1] or vals[0] != vals[2]:
            return False, "derived values differ on equivalent inputs"
        return True, inst["monoid"]
    return build, check


@suite("extra-deg", "extra degeneracy", HOMOLOGY, instances=20, N=3, cosimplicial=True)
def _extra_deg():
    from .monads import (CoaugmentedCosimplicial, ExtraDegeneracyError, applied_cobar, cobar,
                         extra_degeneracy_check, tensor_triple)

    def build(rng, N, index=0):
        X, _ = random_complex(rng, COCHAIN, 0, 2, 2)
        return {"monoid": _monoid_for(index), "X": X}

    def check(inst, N, Q):
        T = tensor_triple(inst["monoid"])
        X = inst["X"]
        rep = extra_degeneracy_check(applied_cobar(T, X, N), Q)
        if not rep.ok:
            return False, (rep.identities or ["s(α) is not a quasi-isomorphism"])[0]
        K = constant(X, N, COSIMPLICIAL)
        idw = [identity_map(X)] * (N + 1)
        rep = extra_degeneracy_check(CoaugmentedCosimplicial(K, X, identity_map(X), idw), Q)
        if not rep.ok:
            return False, "constant object with identity witness fails"
        try:
            C = cobar(T, X, N)
            extra_degeneracy_check(C, Q)
        except ExtraDegeneracyError:
            return True, inst["monoid"]
        return False, "check ran without a witness"
    return build, check


@suite("normalization", "normalization", HOMOLOGY)
def _normalization():
    from .simple import conormal_retraction

    def build(rng, N, index=0):
        direction = CHAIN if index % 2 == 0 else COCHAIN
        return {"X": random_simplicial(rng, N, direction, 1, 2, top=1)}

    def check(inst, N, Q):
        X = inst["X"]
        deg = _upto(Q)
        if X.kind == SIMPLICIAL:
            qn = normalized_simple(X, Q)
            if not _qis(qn.proj, deg):
                return False, "projection onto the normalized simple is not a qis"
            if not _qis(moore_section(X, Q, qn), deg):
                return False, "Moore section is not a qis"
            return True, "chain"
        # cosimplicial totals are exact below their top degree
        sub = normalized_simple(X, Q + 1)
        if not _qis(sub.incl, deg):
            return False, "conormal inclusion is not a qis"
        r = conormal_retraction(X, Q + 1, sub)
        if r @ sub.incl != identity_map(sub.complex):
            return False, "retraction does not split the inclusion"
        if not _qis(r, deg):
            return False, "conormal retraction is not a qis"
        return True, "cochain"
    return build, check
