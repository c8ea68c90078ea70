"""Bound quiver representations for the parabolic quivers and the covering grid.

Presets
-------
``Qp``                 vertices 1..p, loops ``b{i}``, arrows ``a{i}``: i → i+1;
                       relations b_i^x = 0 and b_{i+1} a_i = a_i b_i.
``QLp_prime``          vertices 1..p, arrows ``a{i},{j}``: i → j for i < j, no relations.
``QLp``                ``QLp_prime`` plus loops ``b{i}`` with b_i^x = 0.
``covering_truncated`` vertices (r, c), row 1 on top; ``h{r},{c}``: (r,c) → (r,c+1),
                       ``v{r},{c}``: (r,c) → (r+1,c); commutative squares and any x
                       consecutive vertical maps compose to zero.

A map attached to an arrow s → t is a dim(t) × dim(s) matrix.  Paths are lists of
arrow ids in order of application.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import flint

from .exact import (ExactMatrix, FieldTag, QQ, Subspace, block_diag, generic_charpoly, hstack, kernel,
                    DimensionTooLarge)
from .parabolic import ParabolicShape, dims_of, in_nilpotent_cone, shape_of


class QuiverError(Exception):
    pass


class RelationViolation(QuiverError):
    pass


class PresetMismatch(QuiverError):
    pass


class NotInCone(QuiverError):
    pass


class NotInjectiveArrows(QuiverError):
    pass


class NotDeltaFiltered(QuiverError):
    pass


class FieldNotSupported(QuiverError):
    pass


class IndexOutOfGrid(QuiverError, IndexError):
    pass


@dataclass(frozen=True)
class QuiverPreset:
    kind: str
    p: int
    n_rows: int = 0
    x: int | None = None

    def __post_init__(self):
        if self.kind not in ("Qp", "QLp_prime", "QLp", "covering_truncated"):
            raise ValueError(f"unknown preset kind {self.kind!r}")
        if self.p < 1:
            raise ValueError("p must be positive")
        if self.kind == "covering_truncated" and self.n_rows < 1:
            raise ValueError("covering grid needs n_rows >= 1")

    @property
    def bound(self) -> int | None:
        if self.kind == "covering_truncated":
            return self.n_rows if self.x is None else self.x
        return self.x

    @cached_property
    def vertices(self) -> tuple:
        if self.kind == "covering_truncated":
            return tuple((r, c) for r in range(1, self.n_rows + 1) for c in range(1, self.p + 1))
        return tuple(range(1, self.p + 1))

    @cached_property
    def arrows(self) -> tuple[tuple[str, object, object], ...]:
        out = []
        p = self.p
        if self.kind == "Qp":
            for i in range(1, p + 1):
                out.append((f"b{i}", i, i))
            for i in range(1, p):
                out.append((f"a{i}", i, i + 1))
        elif self.kind in ("QLp_prime", "QLp"):
            if self.kind == "QLp":
                for i in range(1, p + 1):
                    out.append((f"b{i}", i, i))
            for i in range(1, p + 1):
                for j in range(i + 1, p + 1):
                    out.append((f"a{i},{j}", i, j))
        else:
            for r in range(1, self.n_rows + 1):
                for c in range(1, p + 1):
                    if c < p:
                        out.append((f"h{r},{c}", (r, c), (r, c + 1)))
                    if r < self.n_rows:
                        out.append((f"v{r},{c}", (r, c), (r + 1, c)))
        return tuple(out)

    @cached_property
    def arrow_index(self) -> dict:
        return {a[0]: a for a in self.arrows}

    @cached_property
    def relations(self) -> tuple[tuple[tuple[int, tuple[str, ...]], ...], ...]:
        rels = []
        p = self.p
        x = self.bound
        if self.kind == "Qp":
            if x is not None:
                for i in range(1, p + 1):
                    rels.append(((1, (f"b{i}",) * x),))
            for i in range(1, p):
                rels.append(((1, (f"b{i}", f"a{i}")), (-1, (f"a{i}", f"b{i + 1}"))))
        elif self.kind == "QLp":
            if x is not None:
                for i in range(1, p + 1):
                    rels.append(((1, (f"b{i}",) * x),))
        elif self.kind == "covering_truncated":
            n = self.n_rows
            for r in range(1, n):
                for c in range(1, p):
                    rels.append(((1, (f"v{r},{c}", f"h{r + 1},{c}")), (-1, (f"h{r},{c}", f"v{r},{c + 1}"))))
            for r in range(1, n - x + 1):
                for c in range(1, p + 1):
                    rels.append(((1, tuple(f"v{r + s},{c}" for s in range(x))),))
        return tuple(rels)

    def to_json(self) -> dict:
        d = {"kind": self.kind, "p": self.p}
        if self.kind == "covering_truncated":
            d["n_rows"] = self.n_rows
        if self.x is not None:
            d["x"] = self.x
        return d

    @classmethod
    def from_json(cls, d: Mapping) -> "QuiverPreset":
        return cls(d["kind"], int(d["p"]), int(d.get("n_rows", 0)), d.get("x"))


def vertex_key(v) -> str:
    return f"{v[0]},{v[1]}" if isinstance(v, tuple) else str(v)


class QuiverRep:
    """Representation of a preset quiver; relations are validated on construction."""

    __slots__ = ("preset", "field", "dims", "maps")

    def __init__(self, preset: QuiverPreset, field: FieldTag, dims: Mapping, maps: Mapping[str, ExactMatrix] | None = None,
                 check: bool = True):
        self.preset = preset
        self.field = field
        self.dims = {v: int(dims.get(v, 0)) for v in preset.vertices}
        maps = dict(maps or {})
        full = {}
        for name, s, t in preset.arrows:
            m = maps.pop(name, None)
            if m is None:
                m = ExactMatrix.zero(field, self.dims[t], self.dims[s])
            if m.shape != (self.dims[t], self.dims[s]):
                raise QuiverError(f"arrow {name}: expected {self.dims[t]}x{self.dims[s]}, got {m.rows}x{m.cols}")
            if m.field != field:
                raise QuiverError(f"arrow {name} over {m.field}, expected {field}")
            full[name] = m
        if maps:
            raise QuiverError(f"unknown arrows {sorted(maps)}")
        self.maps = full
        if check:
            bad = self.violated_relations()
            if bad:
                raise RelationViolation(f"relations violated: {bad}")

    def path_map(self, path: Sequence[str]) -> ExactMatrix:
        s = self.preset.arrow_index[path[0]][1]
        m = ExactMatrix.identity(self.field, self.dims[s])
        for a in path:
            m = self.maps[a] @ m
        return m

    def violated_relations(self) -> list:
        bad = []
        for rel in self.preset.relations:
            total = None
            for coef, path in rel:
                term = self.path_map(path).scale(coef)
                total = term if total is None else total + term
            if total is not None and not total.is_zero():
                bad.append(rel)
        return bad

    @property
    def dim_vector(self) -> tuple:
        return tuple(self.dims[v] for v in self.preset.vertices)

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def __eq__(self, other):
        return (isinstance(other, QuiverRep) and self.preset == other.preset and self.field == other.field
                and self.dims == other.dims and self.maps == other.maps)

    def __hash__(self):
        return hash((self.preset, self.field, self.dim_vector))

    def __repr__(self):
        return f"QuiverRep({self.preset.kind}, p={self.preset.p}, dims={self.dim_vector}, {self.field})"

    def to_json(self) -> dict:
        return {"preset": self.preset.to_json(), "field": str(self.field),
                "dims": {vertex_key(v): d for v, d in self.dims.items()},
                "maps": {k: m.to_json() for k, m in self.maps.items() if m.rows and m.cols}}

    @classmethod
    def from_json(cls, d: Mapping) -> "QuiverRep":
        preset = QuiverPreset.from_json(d["preset"])
        field = FieldTag.parse(d["field"])
        by_key = {vertex_key(v): v for v in preset.vertices}
        dims_in = d["dims"]
        if isinstance(dims_in, list):
            dims = dict(zip(preset.vertices, dims_in))
        else:
            dims = {by_key[k]: v for k, v in dims_in.items()}
        maps = {k: ExactMatrix.from_json(m) for k, m in d.get("maps", {}).items()}
        return cls(preset, field, dims, maps)

    def direct_sum(self, other: "QuiverRep") -> "QuiverRep":
        if self.preset != other.preset or self.field != other.field:
            raise PresetMismatch("direct sum of reps of different quivers")
        dims = {v: self.dims[v] + other.dims[v] for v in self.preset.vertices}
        maps = {a: block_diag([self.maps[a], other.maps[a]], self.field) for a in self.maps}
        return QuiverRep(self.preset, self.field, dims, maps, check=False)

    def transport(self, g: Mapping) -> "QuiverRep":
        """Isomorphic copy: vertex maps g_v (invertible) send this rep to one with maps g_t M g_s⁻¹."""
        inv = {v: g[v].inverse() for v in self.preset.vertices}
        maps = {name: g[t] @ self.maps[name] @ inv[s] for name, s, t in self.preset.arrows}
        return QuiverRep(self.preset, self.field, self.dims, maps, check=False)

    def with_field(self, field: FieldTag) -> "QuiverRep":
        """Reinterpret integer entries in another field (used for lifting / reduction)."""
        def conv(m):
            ent = []
            for x in m.entries():
                if self.field.is_finite:
                    ent.append(int(x))
                else:
                    ent.append(x)
            return ExactMatrix(field, m.rows, m.cols, ent)
        return QuiverRep(self.preset, field, self.dims, {k: conv(m) for k, m in self.maps.items()})


# ---------------------------------------------------------------------------
# hom spaces


class HomSpace:
    def __init__(self, source: QuiverRep, target: QuiverRep, basis: list[dict]):
        self.source = source
        self.target = target
        self.basis = basis

    @property
    def dim(self) -> int:
        return len(self.basis)

    def element(self, coeffs: Sequence) -> dict:
        f = self.source.field
        out = {}
        for v in self.source.preset.vertices:
            m = ExactMatrix.zero(f, self.target.dims[v], self.source.dims[v])
            for c, b in zip(coeffs, self.basis):
                if c:
                    m = m + b[v].scale(c)
            out[v] = m
        return out

    def is_morphism(self, h: Mapping) -> bool:
        for name, s, t in self.source.preset.arrows:
            if h[t] @ self.source.maps[name] != self.target.maps[name] @ h[s]:
                return False
        return True


def _hom_system(a: QuiverRep, b: QuiverRep):
    verts = a.preset.vertices
    offsets = {}
    off = 0
    for v in verts:
        offsets[v] = off
        off += b.dims[v] * a.dims[v]
    nunk = off
    rows = []
    for name, s, t in a.preset.arrows:
        A = a.maps[name]  # a_t x a_s
        B = b.maps[name]  # b_t x b_s
        bt, at_, bs, as_ = b.dims[t], a.dims[t], b.dims[s], a.dims[s]
        # (h_t A - B h_s)[i,k] = 0 for i < bt, k < as_
        for i in range(bt):
            for k in range(as_):
                row = {}
                for j in range(at_):
                    c = A[j, k]
                    if c:
                        idx = offsets[t] + i * at_ + j
                        row[idx] = row.get(idx, 0) + c
                for j in range(bs):
                    c = B[i, j]
                    if c:
                        idx = offsets[s] + j * as_ + k
                        row[idx] = row.get(idx, 0) - c
                if row:
                    dense = [0] * nunk
                    for idx, c in row.items():
                        dense[idx] = c
                    rows.append(dense)
    return offsets, nunk, rows


def hom_space(a: QuiverRep, b: QuiverRep) -> HomSpace:
    if a.preset != b.preset or a.field != b.field:
        raise PresetMismatch("hom between reps of different quivers or fields")
    offsets, nunk, rows = _hom_system(a, b)
    f = a.field
    if rows:
        ker = kernel(ExactMatrix.from_rows(f, rows, nunk))
        vecs = list(ker.basis)
    else:
        vecs = [tuple(1 if i == j else 0 for i in range(nunk)) for j in range(nunk)]
    basis = []
    for vec in vecs:
        h = {}
        for v in a.preset.vertices:
            o = offsets[v]
            h[v] = ExactMatrix(f, b.dims[v], a.dims[v], [f(x) for x in vec[o:o + b.dims[v] * a.dims[v]]],
                               _normalized=True)
        basis.append(h)
    return HomSpace(a, b, basis)


def hom_dim(a: QuiverRep, b: QuiverRep) -> int:
    if a.preset != b.preset or a.field != b.field:
        raise PresetMismatch("hom between reps of different quivers or fields")
    offsets, nunk, rows = _hom_system(a, b)
    if not rows:
        return nunk
    return nunk - ExactMatrix.from_rows(a.field, rows, nunk).rank()


def _all_invertible(h: Mapping, verts) -> bool:
    return all(h[v].rows == 0 or h[v].det() != 0 for v in verts)


@dataclass
class IsoResult:
    isomorphic: bool
    method: str
    witness: dict | None = None


def _fq_witness(hs: HomSpace, verts, q: int, seed: int, tries: int) -> bool:
    """Random points of the hom space over GF(q^e) with q^e ≥ 2^20."""
    e = 1
    while q ** e < 1 << 20:
        e += 1
    ctx = flint.fq_default_ctx(q, e)
    rng = random.Random(seed)
    for _ in range(tries):
        coeffs = [ctx([rng.randrange(q) for _ in range(e)]) for _ in hs.basis]
        ok = True
        for v in verts:
            n = hs.source.dims[v]
            if n == 0:
                continue
            rows = [[ctx(0)] * n for _ in range(n)]
            for c, b in zip(coeffs, hs.basis):
                m = b[v]
                for i in range(n):
                    for j in range(n):
                        x = m[i, j]
                        if x:
                            rows[i][j] = rows[i][j] + c * int(x)
            if _fq_det(rows, ctx) == 0:
                ok = False
                break
        if ok:
            return True
    return False


def _fq_det(rows, ctx):
    a = [list(r) for r in rows]
    n = len(a)
    det = ctx(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return ctx(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det = det * a[col][col]
        inv = a[col][col] ** -1
        for r in range(col + 1, n):
            if a[r][col] != 0:
                fct = a[r][col] * inv
                for c in range(col, n):
                    a[r][c] = a[r][c] - fct * a[col][c]
    return det


def _symbolic_iso(hs: HomSpace, verts, budget: int) -> bool:
    """Generic element of the hom space is invertible at every vertex (symbolic determinant)."""
    for v in verts:
        n = hs.source.dims[v]
        if n == 0:
            continue
        mats = [b[v] for b in hs.basis]
        coeffs = generic_charpoly(mats, budget=budget)
        if coeffs[-1].is_zero():
            return False
    return True


def find_isomorphism(a: QuiverRep, b: QuiverRep, seed: int = 0, enum_budget: int = 1 << 14,
                     samples: int = 64, symbolic_budget: int = 200_000) -> IsoResult:
    if a.preset != b.preset or a.field != b.field or a.dims != b.dims:
        return IsoResult(False, "dimension_vector")
    if a.maps == b.maps:
        verts = a.preset.vertices
        return IsoResult(True, "identical", {v: ExactMatrix.identity(a.field, a.dims[v]) for v in verts})
    hab = hom_space(a, b)
    if hab.dim != hom_dim(a, a) or hom_dim(b, a) != hom_dim(b, b):
        return IsoResult(False, "hom_dimensions")
    verts = [v for v in a.preset.vertices if a.dims[v]]
    f = a.field
    d = hab.dim
    if d == 0:
        return IsoResult(not verts, "empty")
    if f.is_finite and f.order ** d <= enum_budget:
        for coeffs in itertools.product(range(f.order), repeat=d):
            h = hab.element(coeffs)
            if _all_invertible(h, verts):
                return IsoResult(True, "enumeration", h)
        return IsoResult(False, "enumeration")
    rng = random.Random(seed)
    for _ in range(samples):
        if f.is_finite:
            coeffs = [rng.randrange(f.order) for _ in range(d)]
        else:
            coeffs = [rng.randint(-(d + 8), d + 8) for _ in range(d)]
        h = hab.element(coeffs)
        if _all_invertible(h, verts):
            return IsoResult(True, "sampling", h)
    if f.is_finite and _fq_witness(hab, verts, f.order, seed, samples):
        # iso over an extension field descends to the prime field (Noether-Deuring)
        return IsoResult(True, "extension_sampling")
    return IsoResult(_symbolic_iso(hab, verts, symbolic_budget), "symbolic_determinant")


def is_isomorphic(a: QuiverRep, b: QuiverRep, **kw) -> bool:
    return find_isomorphism(a, b, **kw).isomorphic


# ---------------------------------------------------------------------------
# endomorphism rings


def _coordinates(basis_vecs: list[tuple], target_vecs: list[tuple], field: FieldTag) -> list[list]:
    """Coordinates of each target vector in the given (independent) basis."""
    B = ExactMatrix.from_columns(field, basis_vecs)
    T = ExactMatrix.from_columns(field, target_vecs, B.rows)
    X = B.solve_right(T)
    if X is None:
        raise AssertionError("vector outside the span")
    return [list(X.col(j)) for j in range(X.cols)]


def _flatten(h: Mapping, verts) -> tuple:
    out = []
    for v in verts:
        out.extend(h[v].entries())
    return tuple(out)


def endomorphism_structure(r: QuiverRep):
    """Basis of End(r) and structure constants c[a][b][k] of basis_a ∘ basis_b."""
    hs = hom_space(r, r)
    verts = r.preset.vertices
    flat = [_flatten(h, verts) for h in hs.basis]
    prods = []
    for ha in hs.basis:
        for hb in hs.basis:
            prods.append(_flatten({v: ha[v] @ hb[v] for v in verts}, verts))
    d = hs.dim
    coords = _coordinates(flat, prods, r.field) if d else []
    c = [[coords[a * d + b] for b in range(d)] for a in range(d)]
    return hs, c


def _total_matrix(h: Mapping, verts) -> ExactMatrix:
    return block_diag([h[v] for v in verts]) if verts else None


def endomorphism_local(r: QuiverRep, samples: int = 16, seed: int = 0) -> bool:
    """End(r) is local (r indecomposable), over Q.

    The trace form of the regular representation has radical J(End) in
    characteristic 0, so rank 1 means End/J = Q and r is indecomposable.  For
    larger rank, an element whose characteristic polynomial has two coprime
    factors gives a nontrivial idempotent; if no sample has one, End/J is taken
    to be a division algebra.
    """
    if r.field.is_finite:
        raise FieldNotSupported("trace-form radical needs characteristic 0; use idempotent_search")
    if r.is_zero():
        return False
    hs, c = endomorphism_structure(r)
    d = hs.dim
    f = r.field
    tau = [f(sum(c[m][k][k] for k in range(d))) for m in range(d)]
    gram = [[f(sum(c[a][b][m] * tau[m] for m in range(d))) for b in range(d)] for a in range(d)]
    rank = ExactMatrix.from_rows(f, gram, d).rank()
    if rank == 1:
        return True
    verts = [v for v in r.preset.vertices if r.dims[v]]
    rng = random.Random(seed)
    for _ in range(samples):
        h = hs.element([rng.randint(-5, 5) for _ in range(d)])
        m = _total_matrix(h, verts)
        cp = m._flint().charpoly()
        _, factors = cp.factor()
        if len(factors) > 1:
            return False
    return True


def idempotent_search(r: QuiverRep, budget: int = 1 << 20) -> bool:
    """Indecomposability over GF(q) by exhaustive search for a nontrivial idempotent."""
    if not r.field.is_finite:
        raise FieldNotSupported("use endomorphism_local over Q")
    if r.is_zero():
        return False
    hs = hom_space(r, r)
    q = r.field.order
    if q ** hs.dim > budget:
        raise DimensionTooLarge(f"|End| = {q}^{hs.dim} exceeds budget")
    verts = r.preset.vertices
    zero = {v: ExactMatrix.zero(r.field, r.dims[v]) for v in verts}
    one = {v: ExactMatrix.identity(r.field, r.dims[v]) for v in verts}
    for coeffs in itertools.product(range(q), repeat=hs.dim):
        e = hs.element(coeffs)
        if e == zero or e == one:
            continue
        if all(e[v] @ e[v] == e[v] for v in verts):
            return False
    return True


def is_indecomposable(r: QuiverRep) -> bool:
    return endomorphism_local(r) if not r.field.is_finite else idempotent_search(r)


# ---------------------------------------------------------------------------
# translation between parabolic matrices and Q_p representations


def _inclusion(field: FieldTag, big: int, small: int) -> ExactMatrix:
    return ExactMatrix.from_rows(field, [[1 if i == j else 0 for j in range(small)] for i in range(big)], small)


def matrix_to_rep(shape, N: ExactMatrix, x: int | None = None) -> QuiverRep:
    shape = shape_of(shape)
    x = shape.n if x is None else x
    if not in_nilpotent_cone(shape, N, x):
        raise NotInCone("matrix is not an x-nilpotent element of the parabolic")
    p = shape.bv.p
    preset = QuiverPreset("Qp", p, x=x)
    dims = {i + 1: shape.dims[i] for i in range(p)}
    maps = {f"b{i + 1}": N.leading(shape.dims[i]) for i in range(p)}
    for i in range(p - 1):
        maps[f"a{i + 1}"] = _inclusion(N.field, shape.dims[i + 1], shape.dims[i])
    return QuiverRep(preset, N.field, dims, maps)


def rep_to_matrix(r: QuiverRep) -> tuple[ParabolicShape, ExactMatrix]:
    if r.preset.kind != "Qp":
        raise PresetMismatch("rep_to_matrix needs a Q_p representation")
    p = r.preset.p
    f = r.field
    for i in range(1, p):
        a = r.maps[f"a{i}"]
        if a.rank() != a.cols:
            raise NotInjectiveArrows(f"arrow a{i} is not injective")
    dims = [r.dims[i] for i in range(1, p + 1)]
    if any(dims[i] >= dims[i + 1] for i in range(p - 1)) or dims[0] == 0:
        raise NotInjectiveArrows("dimension vector must be strictly increasing and positive")
    # adapted basis of V_p: images of V_1, then complements of V_{i-1} in V_i, pushed to V_p
    cols: list[tuple] = []
    for i in range(1, p + 1):
        push = ExactMatrix.identity(f, dims[i - 1])
        for j in range(i, p):
            push = r.maps[f"a{j}"] @ push
        if i == 1:
            new = [tuple(push.col(c)) for c in range(dims[0])]
        else:
            img = r.maps[f"a{i - 1}"]
            span = Subspace(f, dims[i - 1], img.T.to_rows())
            new = []
            for u in span.complement_units():
                e = [0] * dims[i - 1]
                e[u] = 1
                new.append(push.apply(e))
        cols.extend(new)
    B = ExactMatrix.from_columns(f, cols, dims[-1])
    N = B.inverse() @ r.maps[f"b{p}"] @ B
    bv = [dims[0]] + [dims[i] - dims[i - 1] for i in range(1, p)]
    return dims_of(bv), N


def levi_rep(shape, N: ExactMatrix, target: str = "nilradical") -> QuiverRep:
    """Rep of Q'_{L,p} (nilradical) or Q_{L,p} (cone): arrow i → j carries N_ij transposed."""
    shape = shape_of(shape)
    p = shape.bv.p
    f = N.field
    kind = "QLp_prime" if target == "nilradical" else "QLp"
    preset = QuiverPreset(kind, p, x=None if kind == "QLp_prime" else shape.n)
    dims = {i + 1: shape.bv.blocks[i] for i in range(p)}
    maps = {}
    for i in range(p):
        ri = list(shape.block_range(i))
        if kind == "QLp":
            maps[f"b{i + 1}"] = N.submatrix(ri, ri).T
        for j in range(i + 1, p):
            rj = list(shape.block_range(j))
            maps[f"a{i + 1},{j + 1}"] = N.submatrix(ri, rj).T
    return QuiverRep(preset, f, dims, maps)


# ---------------------------------------------------------------------------
# covering grid: push-down, standard modules, sub/quotient reps


def covering_preset(p: int, n_rows: int, x: int | None = None) -> QuiverPreset:
    return QuiverPreset("covering_truncated", p, n_rows, x)


def covering_rep(field: FieldTag, grid: Sequence[Sequence[int]], maps: Mapping[str, ExactMatrix] | None = None,
                 x: int | None = None, thin_default: bool = True) -> QuiverRep:
    """Covering rep from a dimension grid (rows top to bottom).

    Arrows not given explicitly get the map [1] between one-dimensional spaces when
    ``thin_default`` is set, and zero otherwise.
    """
    n_rows = len(grid)
    p = len(grid[0])
    preset = covering_preset(p, n_rows, x)
    dims = {(r + 1, c + 1): grid[r][c] for r in range(n_rows) for c in range(p)}
    full = dict(maps or {})
    if thin_default:
        for name, s, t in preset.arrows:
            if name not in full and dims[s] == 1 and dims[t] == 1:
                full[name] = ExactMatrix.identity(field, 1)
    return QuiverRep(preset, field, dims, full)


def push_down(r: QuiverRep) -> QuiverRep:
    if r.preset.kind != "covering_truncated":
        raise PresetMismatch("push_down needs a covering representation")
    bad = r.violated_relations()
    if bad:
        raise RelationViolation(f"relations violated: {bad}")
    p, n = r.preset.p, r.preset.n_rows
    f = r.field
    x = r.preset.bound
    dims = {c: sum(r.dims[(row, c)] for row in range(1, n + 1)) for c in range(1, p + 1)}
    maps = {}
    for c in range(1, p + 1):
        blocks = [[ExactMatrix.zero(f, r.dims[(i, c)], r.dims[(j, c)]) for j in range(1, n + 1)]
                  for i in range(1, n + 1)]
        for i in range(1, n):
            blocks[i][i - 1] = r.maps[f"v{i},{c}"]
        maps[f"b{c}"] = _assemble(f, blocks, [r.dims[(i, c)] for i in range(1, n + 1)],
                                  [r.dims[(j, c)] for j in range(1, n + 1)])
    for c in range(1, p):
        maps[f"a{c}"] = block_diag([r.maps[f"h{i},{c}"] for i in range(1, n + 1)], f)
    return QuiverRep(QuiverPreset("Qp", p, x=x), f, dims, maps)


def _assemble(f, blocks, row_dims, col_dims) -> ExactMatrix:
    R, C = sum(row_dims), sum(col_dims)
    out = [[0] * C for _ in range(R)]
    r0 = 0
    for bi, rd in enumerate(row_dims):
        c0 = 0
        for bj, cd in enumerate(col_dims):
            m = blocks[bi][bj]
            for i in range(rd):
                for j in range(cd):
                    out[r0 + i][c0 + j] = m[i, j]
            c0 += cd
        r0 += rd
    return ExactMatrix.from_rows(f, out, C)


def vertical_shift(r: QuiverRep, k: int) -> QuiverRep:
    """Move a covering rep down by k rows inside a grid with k more rows."""
    p, n = r.preset.p, r.preset.n_rows
    preset = QuiverPreset("covering_truncated", p, n + k, r.preset.x)
    dims = {(row + k, c): d for (row, c), d in r.dims.items()}
    maps = {}
    for name, s, t in r.preset.arrows:
        kind, rest = name[0], name[1:]
        row, col = (int(z) for z in rest.split(","))
        maps[f"{kind}{row + k},{col}"] = r.maps[name]
    return QuiverRep(preset, r.field, dims, maps)


def _indicator_rep(field: FieldTag, p: int, n_rows: int, support, x: int | None = None) -> QuiverRep:
    grid = [[1 if support(r, c) else 0 for c in range(1, p + 1)] for r in range(1, n_rows + 1)]
    return covering_rep(field, grid, x=x)


def _check_index(p: int, n_rows: int, i: int, j: int):
    if not (1 <= i <= n_rows and 1 <= j <= p):
        raise IndexOutOfGrid(f"({i},{j}) outside the {n_rows}x{p} grid")


def standard_P(field, p, n_rows, i, j):
    _check_index(p, n_rows, i, j)
    return _indicator_rep(field, p, n_rows, lambda k, l: k >= i and l >= j)


def standard_D(field, p, n_rows, i, j):
    _check_index(p, n_rows, i, j)
    return _indicator_rep(field, p, n_rows, lambda k, l: k == i and l >= j)


def standard_nabla(field, p, n_rows, i, j):
    _check_index(p, n_rows, i, j)
    return _indicator_rep(field, p, n_rows, lambda k, l: k <= i and l == j)


def standard_T(field, p, n_rows, i, j):
    _check_index(p, n_rows, i, j)
    return _indicator_rep(field, p, n_rows, lambda k, l: k <= i and l >= j)


def standard_modules(preset: QuiverPreset, field: FieldTag = QQ) -> dict:
    """Constructors (i, j) ↦ rep for P, D, nabla and T on the preset's grid."""
    if preset.kind != "covering_truncated":
        raise PresetMismatch("standard modules live on the covering grid")
    p, n = preset.p, preset.n_rows
    return {
        "P": lambda i, j: standard_P(field, p, n, i, j),
        "D": lambda i, j: standard_D(field, p, n, i, j),
        "nabla": lambda i, j: standard_nabla(field, p, n, i, j),
        "T": lambda i, j: standard_T(field, p, n, i, j),
    }


def subrep(r: QuiverRep, spaces: Mapping) -> QuiverRep:
    """Sub-representation on column-basis matrices spaces[v] (must be stable)."""
    f = r.field
    dims = {v: spaces[v].cols for v in r.preset.vertices}
    maps = {}
    for name, s, t in r.preset.arrows:
        img = r.maps[name] @ spaces[s]
        X = spaces[t].solve_right(img) if spaces[t].cols else (
            ExactMatrix.zero(f, 0, img.cols) if img.is_zero() else None)
        if X is None:
            raise QuiverError(f"subspace not stable under {name}")
        maps[name] = X
    return QuiverRep(r.preset, f, dims, maps)


def _echelon_complement(sub: ExactMatrix, n: int, f: FieldTag) -> ExactMatrix:
    span = Subspace(f, n, sub.T.to_rows()) if sub.cols else Subspace(f, n)
    units = span.complement_units()
    return ExactMatrix.from_columns(f, [[1 if i == u else 0 for i in range(n)] for u in units], n) \
        if units else ExactMatrix.zero(f, n, 0)


def quotient_rep(r: QuiverRep, spaces: Mapping) -> tuple[QuiverRep, dict]:
    """Quotient r / sub, with echelon complements as representatives.

    Returns the quotient and the complement basis matrices per vertex.
    """
    f = r.field
    comp = {v: _echelon_complement(spaces[v], r.dims[v], f) for v in r.preset.vertices}
    dims = {v: comp[v].cols for v in r.preset.vertices}
    maps = {}
    for name, s, t in r.preset.arrows:
        full = hstack([spaces[t], comp[t]]) if spaces[t].cols else comp[t]
        if full.cols == 0:
            maps[name] = ExactMatrix.zero(f, 0, dims[s])
            continue
        coords = full.inverse() @ (r.maps[name] @ comp[s])
        k = spaces[t].cols
        maps[name] = coords.submatrix(range(k, full.rows), range(coords.cols))
    return QuiverRep(r.preset, f, dims, maps), comp


def _span_basis(f: FieldTag, n: int, vectors: Iterable[Sequence]) -> ExactMatrix:
    s = Subspace(f, n, list(vectors))
    return s.columns() if s.dim else ExactMatrix.zero(f, n, 0)


def delta_filtration(r: QuiverRep, verify: bool = True) -> list[tuple[int, int]]:
    """Greedy Δ-filtration of an injective-horizontal covering rep.

    Each step picks x = the top row with a nonzero last column, y = the leftmost
    nonzero column of row x, and splits off a quotient D(x, y) through a functional
    on M_{x,p} that does not vanish on the image of M_{x,y}.
    """
    if r.preset.kind != "covering_truncated":
        raise PresetMismatch("Δ-filtrations live on the covering grid")
    p, n = r.preset.p, r.preset.n_rows
    for name, s, t in r.preset.arrows:
        if name[0] == "h" and r.maps[name].rank() != r.dims[s]:
            raise NotDeltaFiltered(f"horizontal map {name} is not injective")
    f = r.field
    labels = []
    cur = r
    while not cur.is_zero():
        x = next(row for row in range(1, n + 1) if cur.dims[(row, p)])
        y = next(c for c in range(1, p + 1) if cur.dims[(x, c)])
        # composites M_{x,l} -> M_{x,p}
        comp = {p: ExactMatrix.identity(f, cur.dims[(x, p)])}
        for l in range(p - 1, y - 1, -1):
            comp[l] = comp[l + 1] @ cur.maps[f"h{x},{l}"]
        w = comp[y].col(0)
        j = next(i for i, z in enumerate(w) if z)
        phi_p = ExactMatrix.from_rows(f, [[f.inv(w[j]) if i == j else 0 for i in range(len(w))]])
        spaces = {}
        for v in cur.preset.vertices:
            d = cur.dims[v]
            if v[0] == x and v[1] >= y:
                spaces[v] = kernel(phi_p @ comp[v[1]]).columns() if d else ExactMatrix.zero(f, 0, 0)
                if spaces[v].rows == 0:
                    spaces[v] = ExactMatrix.zero(f, d, 0)
            else:
                spaces[v] = ExactMatrix.identity(f, d)
        if verify:
            quo, _ = quotient_rep(cur, spaces)
            target = standard_D(f, p, n, x, y)
            target = QuiverRep(cur.preset, f, target.dims, target.maps)
            if not is_isomorphic(quo, target):
                raise NotDeltaFiltered(f"quotient at step {len(labels) + 1} is not D({x},{y})")
        labels.append((x, y))
        cur = subrep(cur, spaces)
    return labels


def trace_of_T(r: QuiverRep) -> dict:
    """Column bases of η_T(r): the sum of images of all maps T(i,j) → r."""
    if r.preset.kind != "covering_truncated":
        raise PresetMismatch("trace along T lives on the covering grid")
    p, n = r.preset.p, r.preset.n_rows
    f = r.field
    vecs: dict = {v: [] for v in r.preset.vertices}
    for i in range(1, n + 1):
        for j in range(1, p + 1):
            T = standard_T(f, p, n, i, j)
            T = QuiverRep(r.preset, f, T.dims, T.maps)
            for h in hom_space(T, r).basis:
                for v in r.preset.vertices:
                    m = h[v]
                    for c in range(m.cols):
                        col = m.col(c)
                        if any(col):
                            vecs[v].append(col)
    return {v: _span_basis(f, r.dims[v], vecs[v]) for v in r.preset.vertices}


def phi_quotient(r: QuiverRep) -> QuiverRep:
    quo, _ = quotient_rep(r, trace_of_T(r))
    return quo


def drop_first_row(r: QuiverRep) -> QuiverRep:
    """Restrict a covering rep with zero first row to the grid of the remaining rows."""
    p, n = r.preset.p, r.preset.n_rows
    if any(r.dims[(1, c)] for c in range(1, p + 1)):
        raise QuiverError("first row is not zero")
    x = r.preset.x
    new_x = None if x is None else min(x, n - 1)
    preset = QuiverPreset("covering_truncated", p, n - 1, new_x)
    dims = {(row - 1, c): r.dims[(row, c)] for row in range(2, n + 1) for c in range(1, p + 1)}
    maps = {}
    for name, s, t in r.preset.arrows:
        row = s[0]
        if row == 1:
            continue
        kind = name[0]
        maps[f"{kind}{row - 1},{s[1]}"] = r.maps[name]
    return QuiverRep(preset, r.field, dims, maps)


def random_injective_covering_rep(field: FieldTag, p: int, n_rows: int, max_total: int,
                                  rng: random.Random, x: int | None = None) -> QuiverRep:
    """Random covering rep with coordinate-inclusion horizontal maps.

    Each row is a flag K^{d_1} ⊂ ... ⊂ K^{d_p}; a vertical map on the last column is
    block triangular for the two flags and its restrictions give the other columns,
    so every square commutes.  Up to isomorphism this reaches every injective-
    horizontal representation with the chosen dimensions.
    """
    while True:
        grid = []
        for _ in range(n_rows):
            row, d = [], 0
            for _ in range(p):
                d += rng.randint(0, 2)
                row.append(d)
            grid.append(row)
        if 0 < sum(map(sum, grid)) <= max_total:
            break
    maps = {}
    for r in range(n_rows):
        for c in range(p - 1):
            maps[f"h{r + 1},{c + 1}"] = _inclusion(field, grid[r][c + 1], grid[r][c])
    for r in range(n_rows - 1):
        src, tgt = grid[r], grid[r + 1]
        big = [[0] * src[-1] for _ in range(tgt[-1])]
        for j in range(src[-1]):
            level = next(c for c in range(p) if j < src[c])
            for i in range(tgt[level]):
                big[i][j] = rng.randrange(field.order) if field.is_finite else rng.randint(-3, 3)
        for c in range(p):
            maps[f"v{r + 1},{c + 1}"] = ExactMatrix.from_rows(field, [row[:src[c]] for row in big[:tgt[c]]],
                                                            src[c])
    bound = x if x is not None else n_rows
    if n_rows > bound:
        raise QuiverError("nilpotency bound smaller than the number of rows is not supported here")
    return covering_rep(field, grid, maps, x=x, thin_default=False)
