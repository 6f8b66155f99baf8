"""Brute-force oracles built on sympy, independent of descentkit.linalg."""
from __future__ import annotations

from itertools import product

import sympy


def to_sympy(m) -> sympy.Matrix:
    return sympy.Matrix(m.rows, m.cols, lambda i, j: sympy.Rational(m.get(i, j)))


def rank(m) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    return to_sympy(m).rank()


def homology_from_matrices(dims: dict, diff: dict, step: int) -> dict:
    """dim ker(d out of q) - rank(d into q), matrices as sympy objects keyed by source degree."""
    out = {}
    for q, n in dims.items():
        dq = diff.get(q)
        rk_out = dq.rank() if dq is not None and dq.rows and dq.cols else 0
        din = diff.get(q - step)
        rk_in = din.rank() if din is not None and din.rows and din.cols else 0
        out[q] = n - rk_out - rk_in
    return out


def complex_homology(C) -> dict:
    diff = {q: to_sympy(m) for q, m in C.diff.items()}
    return homology_from_matrices(C.dims, diff, C.step)


def sset_homology(K, top: int) -> dict:
    """Rational homology of a finite simplicial set from its nondegenerate cells.

    The normalized chain complex has the nondegenerate k-cells as basis and
    boundary Σ(-1)^i d_i, where a degenerate face counts as zero.
    """
    cells = {k: list(v) for k, v in K.cells.items()}
    faces = K.cell_faces
    diff = {}
    for k in range(1, top + 2):
        src, tgt = cells.get(k, []), cells.get(k - 1, [])
        m = sympy.zeros(len(tgt), len(src))
        for c, name in enumerate(src):
            for i, (f, degen) in enumerate(faces[name]):
                # degen is the surjection value tuple; only the identity is nondegenerate
                if tuple(degen) != tuple(range(k)):
                    continue
                m[tgt.index(f), c] += (-1) ** i
        diff[k] = m
    dims = {k: len(cells.get(k, [])) for k in range(top + 2)}
    h = homology_from_matrices(dims, diff, -1)
    return {k: h[k] for k in range(top + 1)}


def amitsur_cohomology(unit, top: int) -> list[int]:
    """Cohomology of the Amitsur complex B -> B^{⊗2} -> ... for an algebra B concentrated in
    degree 0 over Q, computed from scratch.

    unit: the b coefficients of 1 in the basis e_0 .. e_(b-1).
    Degree n holds B^{⊗(n+1)}; d = Σ_i (-1)^i d^i with d^i inserting the unit at slot i.
    """
    b = len(unit)
    basis = {n: list(product(range(b), repeat=n + 1)) for n in range(top + 2)}
    index = {n: {t: k for k, t in enumerate(basis[n])} for n in basis}
    diff = {}
    for n in range(top + 1):
        m = sympy.zeros(len(basis[n + 1]), len(basis[n]))
        for c, t in enumerate(basis[n]):
            for i in range(n + 2):
                for u, coef in enumerate(unit):
                    if coef:
                        s = t[:i] + (u,) + t[i:]
                        m[index[n + 1][s], c] += (-1) ** i * coef
        diff[n] = m
    dims = {n: len(basis[n]) for n in range(top + 2)}
    h = homology_from_matrices(dims, diff, 1)
    return [h[n] for n in range(top + 1)]
