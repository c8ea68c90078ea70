"""Finite-field orbit enumeration for parabolic and Levi conjugation.

The diagonal blocks of a nilpotent element of p are nilpotent, and each P-orbit
meets the fiber F_J of elements whose diagonal blocks are fixed Jordan matrices
J = (J_1, ..., J_p).  Inside F_J the orbit is a single orbit of the stabilizer
S_J = {g ∈ P : g_ii ∈ C(J_i)}, which acts affinely on the off-diagonal
coordinates.  We enumerate each fiber as base-q integers, apply the affine
generators of S_J as vectorized permutations and take connected components.

Orbit sizes in the full target follow from

    |O| = |O ∩ F_J| · Π_i |GL_{b_i}(q)| / |C_GL(J_i)(q)|,

and the total is checked against the closed-form size of the target.
"""

from __future__ import annotations

import itertools
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .exact import GF, ExactMatrix, FieldTag, jordan_matrix
from .parabolic import ParabolicShape, shape_of


class OracleError(Exception):
    pass


class BudgetExceeded(OracleError):
    pass


DEFAULT_BUDGET = 1 << 26
TARGETS = ("cone", "cone_x", "nilradical")
ACTING = ("P", "L", "Levi")


def partitions(n: int, max_part: int | None = None) -> list[tuple[int, ...]]:
    max_part = n if max_part is None else max_part
    if n == 0:
        return [()]
    out = []
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions(n - first, first):
            out.append((first,) + rest)
    return out


def gl_order(m: int, q: int) -> int:
    out = 1
    for i in range(m):
        out *= q ** m - q ** i
    return out


def _conjugate(lam: Sequence[int]) -> list[int]:
    return [sum(1 for x in lam if x > j) for j in range(lam[0])] if lam else []


def centralizer_order(lam: Sequence[int], q: int) -> int:
    """|C_GL(J_λ)(F_q)| = q^{Σλ'_j² − Σ m_k²} Π_k |GL_{m_k}(q)|."""
    if not lam:
        return 1
    mult = [sum(1 for x in lam if x == v) for v in set(lam)]
    e = sum(c * c for c in _conjugate(lam)) - sum(m * m for m in mult)
    out = q ** e
    for m in mult:
        out *= gl_order(m, q)
    return out


def _chain_starts(lam: Sequence[int]) -> list[int]:
    starts, s = [], 0
    for x in lam:
        starts.append(s)
        s += x
    return starts


def centralizer_generators(lam: Sequence[int], field: FieldTag) -> list[ExactMatrix]:
    """Generators of C_GL(J_λ)(F_q) for the superdiagonal Jordan matrix J_λ.

    An element of the centralizer algebra is fixed by the images of the chain
    tops v_{i,λ_i}.  The maps sending one top to a single basis vector span the
    algebra and are closed under composition, so 1 + (radical basis maps) and
    generators of each GL_{m_k} (on tops of equal-length chains) generate the
    unit group.
    """
    n = sum(lam)
    starts = _chain_starts(lam)
    gens = []
    omega = field.primitive_root()

    def chain_map(images: dict) -> ExactMatrix:
        # images: chain i -> vector (coordinates) for the image of its top
        rows = [[0] * n for _ in range(n)]
        for i, vec in images.items():
            for j in range(1, lam[i] + 1):
                # v_{i,j} = f^{λ_i - j} top  ->  f^{λ_i - j} vec
                shift = lam[i] - j
                col = starts[i] + j - 1
                for r, val in enumerate(vec):
                    if val:
                        # f lowers position inside each chain by one
                        chain = max(k for k in range(len(lam)) if starts[k] <= r)
                        pos = r - starts[chain]
                        if pos - shift >= 0:
                            rows[starts[chain] + pos - shift][col] = val
        return ExactMatrix.from_rows(field, rows, n)

    ident = ExactMatrix.identity(field, n)
    for i, li in enumerate(lam):
        for i2, l2 in enumerate(lam):
            for j2 in range(1, min(li, l2) + 1):
                if li == l2 and j2 == l2:
                    continue
                vec = [0] * n
                vec[starts[i2] + j2 - 1] = 1
                gens.append(ident + chain_map({i: vec}))
    for v in sorted(set(lam)):
        idx = [i for i, x in enumerate(lam) if x == v]
        if field.order > 2:
            vec = [0] * n
            vec[starts[idx[0]] + v - 1] = omega - 1
            gens.append(ident + chain_map({idx[0]: vec}))
        for a in idx:
            for b in idx:
                if a != b:
                    vec = [0] * n
                    vec[starts[b] + v - 1] = 1
                    gens.append(ident + chain_map({a: vec}))
    return gens


@dataclass
class OrbitTable:
    shape: ParabolicShape
    field: FieldTag
    target: str
    acting: str
    x: int | None
    orbit_count: int
    representatives: list[ExactMatrix]
    orbit_sizes: list[int]
    target_size: int
    stats: dict = dc_field(default_factory=dict)

    def to_json(self) -> dict:
        return {"bv": list(self.shape.bv.blocks), "field": str(self.field), "target": self.target,
                "acting": self.acting, "x": self.x, "orbit_count": self.orbit_count,
                "orbit_sizes": self.orbit_sizes, "target_size": self.target_size,
                "representatives": [r.to_json() for r in self.representatives]}


def _block_embed(shape: ParabolicShape, blocks: Sequence[ExactMatrix], field: FieldTag) -> ExactMatrix:
    n = shape.n
    rows = [[0] * n for _ in range(n)]
    for b, m in enumerate(blocks):
        r0 = shape.block_range(b).start
        for i in range(m.rows):
            for j in range(m.cols):
                rows[r0 + i][r0 + j] = m[i, j]
    return ExactMatrix.from_rows(field, rows, n)


def _offdiag_positions(shape: ParabolicShape) -> list[tuple[int, int]]:
    return shape.positions("nilradical")


def _np_mat(m: ExactMatrix) -> np.ndarray:
    return np.array([[int(x) for x in m.row(i)] for i in range(m.rows)], dtype=np.int64).reshape(m.rows, m.cols)


def _stabilizer_generators(shape: ParabolicShape, lams, field: FieldTag, acting: str) -> list[ExactMatrix]:
    n = shape.n
    gens = []
    ident = [ExactMatrix.identity(field, b) for b in shape.bv.blocks]
    for b, lam in enumerate(lams):
        for g in centralizer_generators(lam, field):
            blocks = list(ident)
            blocks[b] = g
            gens.append(_block_embed(shape, blocks, field))
    if acting == "P":
        for (r, s) in _offdiag_positions(shape):
            gens.append(ExactMatrix.identity(field, n) + ExactMatrix.unit(field, n, n, r, s))
    return gens


def _affine_action(g: ExactMatrix, D: ExactMatrix, pos, field: FieldTag):
    """The map X ↦ offdiag(g (D + X) g⁻¹) on off-diagonal coordinates, as (M, c)."""
    gi = g.inverse()
    n = D.rows
    base = g @ D @ gi
    c = np.array([int(base[i, j]) for i, j in pos], dtype=np.int64)
    m = len(pos)
    M = np.zeros((m, m), dtype=np.int64)
    for k, (i, j) in enumerate(pos):
        img = g @ ExactMatrix.unit(field, n, n, i, j) @ gi
        M[:, k] = [int(img[a, b]) for a, b in pos]
    return M, c


def _digits(indices: np.ndarray, m: int, q: int) -> np.ndarray:
    out = np.empty((len(indices), m), dtype=np.int64)
    rest = indices.copy()
    for k in range(m - 1, -1, -1):
        out[:, k] = rest % q
        rest //= q
    return out


def _encode(digits: np.ndarray, q: int) -> np.ndarray:
    m = digits.shape[1]
    w = q ** np.arange(m - 1, -1, -1, dtype=np.int64)
    return digits @ w


def _nilpotent_mask(digits: np.ndarray, D: np.ndarray, pos, q: int, x: int) -> np.ndarray:
    N = len(digits)
    n = D.shape[0]
    mats = np.broadcast_to(D, (N, n, n)).copy()
    for k, (i, j) in enumerate(pos):
        mats[:, i, j] = digits[:, k]
    power = mats.copy()
    for _ in range(x - 1):
        power = np.einsum("bij,bjk->bik", power, mats) % q
    return ~power.reshape(N, -1).any(axis=1)


def _fiber_orbits(shape: ParabolicShape, lams, field: FieldTag, acting: str, target: str, x: int):
    q = field.order
    pos = _offdiag_positions(shape)
    m = len(pos)
    size = q ** m
    D = _block_embed(shape, [jordan_matrix(field, lam) for lam in lams], field)
    idx = np.arange(size, dtype=np.int64)
    digits = _digits(idx, m, q)
    if target == "cone_x":
        mask = _nilpotent_mask(digits, _np_mat(D), pos, q, x)
    else:
        mask = np.ones(size, dtype=bool)
    live = idx[mask]
    dl = digits[mask]
    src, dst = [live], [live]
    for g in _stabilizer_generators(shape, lams, field, acting):
        M, c = _affine_action(g, D, pos, field)
        img = _encode((dl @ M.T + c) % q, q) if m else np.zeros(len(live), dtype=np.int64)
        src.append(live)
        dst.append(img)
    s = np.concatenate(src)
    t = np.concatenate(dst)
    graph = coo_matrix((np.ones(len(s), dtype=np.int8), (s, t)), shape=(size, size)).tocsr()
    _, labels = connected_components(graph, directed=True, connection="weak")
    labels = labels[mask]
    # smallest live index per component is the lex-least fiber element
    order = np.argsort(labels, kind="stable")
    lab_sorted = labels[order]
    first = np.ones(len(order), dtype=bool)
    first[1:] = lab_sorted[1:] != lab_sorted[:-1]
    reps = live[order[first]]
    counts = np.diff(np.append(np.flatnonzero(first), len(order)))
    scale = 1
    for b, lam in zip(shape.bv.blocks, lams):
        scale *= gl_order(b, q) // centralizer_order(lam, q)
    out = []
    for r, cnt in sorted(zip(reps.tolist(), counts.tolist())):
        dig = _digits(np.array([r], dtype=np.int64), m, q)[0] if m else []
        rows = D.to_rows()
        for k, (i, j) in enumerate(pos):
            rows[i][j] = int(dig[k])
        out.append((ExactMatrix.from_rows(field, rows, shape.n), cnt * scale))
    return out, int(mask.sum())


def _jordan_configs(shape: ParabolicShape, target: str, x: int):
    if target == "nilradical":
        return [tuple((1,) * b for b in shape.bv.blocks)]
    per_block = [partitions(b, x if target == "cone_x" else b) for b in shape.bv.blocks]
    return list(itertools.product(*per_block))


def target_size(shape, q: int, target: str, x: int | None = None) -> int | None:
    """Closed-form size of the target set (None for cone_x)."""
    shape = shape_of(shape)
    if target == "nilradical":
        return q ** shape.dim_nilradical()
    if target == "cone" or (target == "cone_x" and (x is None or x >= shape.n)):
        return q ** (shape.dim_p() - shape.n)
    return None


def enumerate_orbits(bv, q: int, target: str = "cone", acting: str = "P", x: int | None = None,
                     budget: int = DEFAULT_BUDGET, threads: int = 1) -> OrbitTable:
    shape = shape_of(bv)
    if target not in TARGETS or acting not in ACTING:
        raise OracleError(f"unknown target/acting {target}/{acting}")
    field = GF(q)
    x = shape.n if x is None else x
    if target != "cone_x":
        x_eff = shape.n
    else:
        x_eff = x
    configs = _jordan_configs(shape, target, x_eff)
    m = shape.dim_nilradical()
    if q ** m * len(configs) > budget:
        raise BudgetExceeded(f"{len(configs)} fibers of size {q}^{m} exceed budget {budget}")

    kind = "cone_x" if target == "cone_x" else "cone"

    def work(lams):
        return _fiber_orbits(shape, lams, field, acting, kind, x_eff)

    if threads > 1 and len(configs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(work, configs))
    else:
        results = [work(c) for c in configs]
    reps, sizes = [], []
    scale_total = 0
    for lams, (orbits, live) in zip(configs, results):
        for rep, size in orbits:
            reps.append(rep)
            sizes.append(size)
        per = 1
        for b, lam in zip(shape.bv.blocks, lams):
            per *= gl_order(b, q) // centralizer_order(lam, q)
        scale_total += live * per
    total = sum(sizes)
    if total != scale_total:  # pragma: no cover - internal consistency
        raise OracleError("orbit sizes do not add up to the fiber count")
    expected = target_size(shape, q, target, x)
    if expected is not None and total != expected:
        raise OracleError(f"orbit sizes sum to {total}, expected {expected}")
    return OrbitTable(shape, field, target, acting, x if target == "cone_x" else None, len(reps), reps, sizes,
                      total, {"fibers": len(configs), "fiber_size": q ** m})


def growth_profile(bv, target: str, acting: str, qs: Sequence[int], x: int | None = None,
                   budget: int = DEFAULT_BUDGET) -> dict:
    counts = [(q, enumerate_orbits(bv, q, target, acting, x, budget).orbit_count) for q in qs]
    vals = [c for _, c in counts]
    if all(a < b for a, b in zip(vals, vals[1:])):
        signal = "strictly_increasing"
    elif len(set(vals)) == 1:
        signal = "constant"
    else:
        signal = "mixed"
    return {"counts": counts, "signal": signal, "heuristic": True}


# ---------------------------------------------------------------------------
# independent brute force (tiny cases only)


def group_elements(bv, q: int, acting: str = "P") -> list[ExactMatrix]:
    """All elements of P(F_q) or L(F_q) (exhaustive; tiny shapes only)."""
    shape = shape_of(bv)
    field = GF(q)
    which = "parabolic" if acting == "P" else "levi"
    pos = shape.positions(which)
    if q ** len(pos) > 1 << 16:
        raise BudgetExceeded("group too large for exhaustive listing")
    n = shape.n
    out = []
    for vals in itertools.product(range(q), repeat=len(pos)):
        rows = [[0] * n for _ in range(n)]
        for (i, j), v in zip(pos, vals):
            rows[i][j] = v
        g = ExactMatrix.from_rows(field, rows, n)
        if g.det() != 0:
            out.append(g)
    return out


def target_elements(bv, q: int, target: str = "cone", x: int | None = None) -> list[ExactMatrix]:
    shape = shape_of(bv)
    field = GF(q)
    n = shape.n
    x = n if x is None else x
    which = "nilradical" if target == "nilradical" else "parabolic"
    pos = shape.positions(which)
    if q ** len(pos) > 1 << 16:
        raise BudgetExceeded("target too large for exhaustive listing")
    out = []
    for vals in itertools.product(range(q), repeat=len(pos)):
        rows = [[0] * n for _ in range(n)]
        for (i, j), v in zip(pos, vals):
            rows[i][j] = v
        m = ExactMatrix.from_rows(field, rows, n)
        if target == "nilradical" or (m ** x).is_zero():
            out.append(m)
    return out


def brute_force_orbits(bv, q: int, target: str = "cone", acting: str = "P", x: int | None = None):
    """Orbits by closing each element under the whole group; returns list of frozensets of matrices."""
    elems = target_elements(bv, q, target, x)
    group = [(g, g.inverse()) for g in group_elements(bv, q, acting)]
    seen = set()
    orbits = []
    for e in elems:
        if e in seen:
            continue
        orb = frozenset(g @ e @ gi for g, gi in group)
        seen |= orb
        orbits.append(orb)
    return orbits


def lex_key(m: ExactMatrix) -> tuple:
    return tuple(int(v) for v in m.entries())


def random_group_element(bv, q: int, acting: str = "P", rng: random.Random | None = None) -> ExactMatrix:
    shape = shape_of(bv)
    field = GF(q)
    rng = rng or random.Random(0)
    which = "parabolic" if acting == "P" else "levi"
    pos = shape.positions(which)
    n = shape.n
    while True:
        rows = [[0] * n for _ in range(n)]
        for i, j in pos:
            rows[i][j] = rng.randrange(q)
        g = ExactMatrix.from_rows(field, rows, n)
        if g.det() != 0:
            return g
