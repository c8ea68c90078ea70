"""Explicit one-parameter families, commuting pairs and distinguished elements.

Covering-built families are described by a small picture: named nodes at grid
positions (row, col) with a dimension, and labeled arrows between neighbouring
nodes (rightward = horizontal, downward = vertical).  Horizontal maps are always
coordinate inclusions, so the pushed-down matrix has its entries among the
entries of the vertical maps.  The parameter t sits on exactly one label:

* d4_222: the vertical map c = [1, t] out of the rank-2 centre;
* e6_*, ext_kk: the vertical map d = [e3 | e1 + t e2] into the rank-3 centre.

Over Q the covering representations at t in {-1, 0, 1, 2, 3} are bricks with
no nonzero maps between different parameters; certificates re-check this per
sample rather than assume it.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .exact import (QQ, GF, ExactMatrix, FieldTag, Subspace, DimensionTooLarge, kernel, is_nilpotent_subspace,
                    subspace_matrices)
from .parabolic import ParabolicShape, as_bv, contains, dims_of, in_nilpotent_cone, shape_of
from .quiver import (QuiverRep, covering_rep, push_down, rep_to_matrix, matrix_to_rep, levi_rep, is_isomorphic,
                     endomorphism_local, idempotent_search)


class FamilyError(Exception):
    pass


class ParamOutOfRange(FamilyError, ValueError):
    pass


class NotInParabolic(FamilyError, ValueError):
    pass


class MethodsDisagree(FamilyError, AssertionError):
    def __init__(self, message: str, dump: dict):
        super().__init__(message)
        self.dump = dump


class InfiniteType(FamilyError):
    pass


FAMILY_NAMES = ("levi_nilr_111", "levi_cone_22", "d4_222", "e6_66", "e6_414", "e6_146", "e6_1441", "e6_1214",
                "e6_12121", "ext_kk", "commuting_pair")

COVERING_FAMILIES = ("d4_222", "e6_66", "e6_414", "e6_146", "e6_1441", "e6_1214", "e6_12121", "ext_kk")

_FIXED_BV = {
    "levi_nilr_111": (1, 1, 1),
    "levi_cone_22": (2, 2),
    "d4_222": (2, 2, 2),
    "e6_66": (6, 6),
    "e6_414": (4, 1, 4),
    "e6_146": (1, 4, 6),
    "e6_1441": (1, 4, 4, 1),
    "e6_1214": (1, 2, 1, 4),
    "e6_12121": (1, 2, 1, 2, 1),
}


@dataclass(frozen=True)
class FamilySpec:
    name: str
    k: int | None = None
    n: int | None = None
    variant: str = "corrected"  # commuting_pair only: "corrected" or "printed"

    def __post_init__(self):
        if self.name not in FAMILY_NAMES:
            raise ParamOutOfRange(f"unknown family {self.name!r}")
        if self.name in ("ext_kk", "commuting_pair"):
            if self.k is None or self.n is None:
                raise ParamOutOfRange(f"{self.name} needs k and n")
            if self.k < 6 or self.n - self.k < 6:
                raise ParamOutOfRange(f"{self.name} needs k >= 6 and n - k >= 6")
        if self.variant not in ("corrected", "printed"):
            raise ParamOutOfRange(f"unknown variant {self.variant!r}")

    @property
    def bv(self) -> tuple[int, ...]:
        if self.name in _FIXED_BV:
            return _FIXED_BV[self.name]
        return (self.k, self.n - self.k)

    @property
    def shape(self) -> ParabolicShape:
        return dims_of(self.bv)

    def to_json(self) -> dict:
        d = {"name": self.name, "bv": list(self.bv)}
        if self.k is not None:
            d.update(k=self.k, n=self.n)
        if self.name == "commuting_pair":
            d["variant"] = self.variant
        return d


# ---------------------------------------------------------------------------
# covering pictures


@dataclass(frozen=True)
class Picture:
    nodes: dict  # name -> (row, col, dim)
    arrows: tuple  # (source, target, label)


def _col(f: FieldTag, *entries) -> ExactMatrix:
    return ExactMatrix.from_columns(f, [list(entries)], len(entries))


def _d4_maps(f: FieldTag, t) -> dict:
    return {
        "a": _col(f, 1, 0),
        "b": _col(f, 0, 1),
        "d": _col(f, 1, 1),
        "c": ExactMatrix.from_rows(f, [[1, t]], 2),
        "ca": ExactMatrix.from_rows(f, [[1]], 1),
    }


def _e6_maps(f: FieldTag, t, orientation: int) -> dict:
    m = {
        "a": _col(f, 1, 0),
        "b": ExactMatrix.from_columns(f, [[1, 0, 0], [0, 1, 0]], 3),
        "ba": _col(f, 1, 0, 0),
        "c": _col(f, 1, 0),
        "d": ExactMatrix.from_columns(f, [[0, 0, 1], [1, t, 0]], 3),
        "dc": _col(f, 0, 0, 1),
    }
    if orientation == 1:  # 3 -> 2c -> 1c
        m["f"] = ExactMatrix.from_rows(f, [[1, 0, 0], [0, 1, 1]], 3)
        m["e"] = ExactMatrix.from_rows(f, [[1, 1]], 2)
    else:  # 3 -> 2c <- 1c
        m["f"] = ExactMatrix.from_rows(f, [[1, 1, 0], [1, 0, 1]], 3)
        m["e"] = _col(f, 1, 0)
    m["fb"] = m["f"] @ m["b"]
    m["fba"] = m["fb"] @ m["a"]
    return m


_D4 = Picture(
    {"1d": (-1, 1, 1), "1b": (0, 0, 1), "2pp": (0, 1, 2), "1a": (1, -1, 1), "2": (1, 0, 2), "2p": (1, 1, 2),
     "1c1": (2, -1, 1), "1c": (2, 0, 1), "1c2": (2, 1, 1)},
    (("1a", "2", "a"), ("2", "1c", "c"), ("1b", "2", "b"), ("1b", "2pp", "b"), ("1d", "2pp", "d"),
     ("1a", "1c1", "ca"), ("2p", "1c2", "c"), ("1c1", "1c", "id"), ("1c", "1c2", "id"), ("2", "2p", "id"),
     ("2pp", "2p", "id")))

_E6_66 = Picture(
    {"1b": (0, 0, 1), "2b": (1, 0, 2), "1a": (2, -1, 1), "3": (2, 0, 3), "2a": (3, -1, 2), "3p": (3, 0, 3),
     "2c2": (4, -1, 2), "2c": (4, 0, 2), "1c2": (5, -1, 1), "1c": (5, 0, 1)},
    (("1a", "2a", "a"), ("2a", "3p", "b"), ("2b", "3", "d"), ("1b", "2b", "c"), ("2c2", "1c2", "e"),
     ("2c", "1c", "e"), ("2a", "2c2", "fb"), ("1a", "3", "ba"), ("3p", "2c", "f"), ("2c2", "2c", "id"),
     ("3", "3p", "id"), ("1c2", "1c", "id")))

_E6_414 = Picture(
    {"1b": (0, 0, 1), "2b": (1, 0, 2), "1a": (2, -2, 1), "2a": (2, -1, 2), "3": (2, 0, 3),
     "2a1": (3, -2, 2), "2a2": (3, -1, 2), "2c": (3, 0, 2), "1a1": (4, -2, 1), "1a2": (4, -1, 1), "1c": (4, 0, 1)},
    (("1a", "2a", "a"), ("2a", "3", "b"), ("2b", "3", "d"), ("1b", "2b", "c"), ("2c", "1c", "e"),
     ("3", "2c", "f"), ("1a", "2a1", "fba"), ("2a", "2a2", "fb"), ("2a1", "1a1", "e"), ("2a2", "1a2", "e"),
     ("2a1", "2a2", "id"), ("2a2", "2c", "id"), ("1a1", "1a2", "id"), ("1a2", "1c", "id")))

_E6_146 = Picture(
    {"1b": (0, 0, 1), "2b": (1, 0, 2), "1a": (2, -1, 1), "3": (2, 0, 3), "2a": (3, -1, 2), "3p": (3, 0, 3),
     "1c": (4, -2, 1), "2c2": (4, -1, 2), "2c": (4, 0, 2)},
    (("1a", "2a", "a"), ("2a", "3p", "b"), ("2b", "3", "d"), ("1b", "2b", "c"), ("1c", "2c2", "e"),
     ("2a", "2c2", "fb"), ("1a", "3", "ba"), ("3p", "2c", "f"), ("2c2", "2c", "id"), ("3", "3p", "id")))

_E6_1441 = Picture(
    {"1b": (0, 0, 1), "2b": (0, 1, 2), "1a": (1, -1, 1), "3": (1, 0, 3), "30": (1, 1, 3), "2a": (2, -1, 2),
     "3p": (2, 0, 3), "3p0": (2, 1, 3), "1c": (3, -2, 1), "2cp": (3, -1, 2), "2c": (3, 0, 2), "2c0": (3, 1, 2)},
    (("1a", "2a", "a"), ("2a", "3p", "b"), ("2b", "30", "d"), ("1b", "3", "dc"), ("1b", "2b", "c"),
     ("1c", "2cp", "e"), ("3p", "2c", "f"), ("3p0", "2c0", "f"), ("1a", "3", "ba"), ("2a", "2cp", "fb"),
     ("3", "30", "id"), ("30", "3p0", "id"), ("3", "3p", "id"), ("3p", "3p0", "id"), ("2cp", "2c", "id"),
     ("2c", "2c0", "id")))

_E6_1214 = Picture(
    {"1b": (0, 0, 1), "2b": (1, 0, 2), "1a": (2, -2, 1), "2a": (2, -1, 2), "3": (2, 0, 3),
     "1c": (3, -3, 1), "2cpp": (3, -2, 2), "2cp": (3, -1, 2), "2c": (3, 0, 2)},
    (("1a", "2a", "a"), ("2a", "3", "b"), ("2b", "3", "d"), ("1b", "2b", "c"), ("1c", "2cpp", "e"),
     ("3", "2c", "f"), ("1a", "2cpp", "fba"), ("2a", "2cp", "fb"), ("2cpp", "2cp", "id"), ("2cp", "2c", "id")))

_E6_12121 = Picture(
    {"1b": (0, 0, 1), "2b": (0, 1, 2), "1a": (1, -2, 1), "2a": (1, -1, 2), "3": (1, 0, 3), "30": (1, 1, 3),
     "1c": (2, -3, 1), "2cpp": (2, -2, 2), "2cp": (2, -1, 2), "2c": (2, 0, 2), "2c0": (2, 1, 2)},
    (("1a", "2a", "a"), ("2a", "3", "b"), ("2b", "30", "d"), ("1b", "3", "dc"), ("1b", "2b", "c"),
     ("1c", "2cpp", "e"), ("3", "2c", "f"), ("30", "2c0", "f"), ("1a", "2cpp", "fba"), ("2a", "2cp", "fb"),
     ("2cpp", "2cp", "id"), ("2cp", "2c", "id"), ("2c", "2c0", "id"), ("3", "30", "id")))

# picture, orientation of the third Ẽ6 arm (0 for D̃4)
_PICTURES = {
    "d4_222": (_D4, 0),
    "e6_66": (_E6_66, 1),
    "e6_414": (_E6_414, 1),
    "e6_146": (_E6_146, 2),
    "e6_1441": (_E6_1441, 2),
    "e6_1214": (_E6_1214, 2),
    "e6_12121": (_E6_12121, 2),
}


def _ext_picture(k: int, n: int) -> Picture:
    """(6,6) picture with n-k-6 one-dimensional rows on top and k-6 rows [1,1] at the bottom."""
    nodes = dict(_E6_66.nodes)
    arrows = list(_E6_66.arrows)
    prev = "1b"
    for j in range(1, n - k - 6 + 1):
        name = f"u{j}"
        nodes[name] = (-j, 0, 1)
        arrows.append((name, prev, "id"))
        prev = name
    left, right = "1c2", "1c"
    for j in range(1, k - 6 + 1):
        nl, nr = f"g{j}l", f"g{j}r"
        nodes[nl] = (5 + j, -1, 1)
        nodes[nr] = (5 + j, 0, 1)
        arrows += [(left, nl, "id"), (right, nr, "id"), (nl, nr, "id")]
        left, right = nl, nr
    return Picture(nodes, tuple(arrows))


def _picture(spec: FamilySpec) -> tuple[Picture, int]:
    if spec.name == "ext_kk":
        return _ext_picture(spec.k, spec.n), 1
    if spec.name not in _PICTURES:
        raise ParamOutOfRange(f"{spec.name} is not covering-built")
    return _PICTURES[spec.name]


def _realize(pic: Picture, maps: dict, f: FieldTag) -> QuiverRep:
    rows = [r for r, _, _ in pic.nodes.values()]
    cols = [c for _, c, _ in pic.nodes.values()]
    r0, c0 = min(rows), min(cols)
    n_rows, p = max(rows) - r0 + 1, max(cols) - c0 + 1
    grid = [[0] * p for _ in range(n_rows)]
    pos = {}
    for name, (r, c, d) in pic.nodes.items():
        pos[name] = (r - r0 + 1, c - c0 + 1)
        grid[r - r0][c - c0] = d
    arrow_maps = {}
    for s, t, label in pic.arrows:
        (rs, cs), (rt, ct) = pos[s], pos[t]
        if (rt, ct) == (rs, cs + 1):
            name = f"h{rs},{cs}"
        elif (rt, ct) == (rs + 1, cs):
            name = f"v{rs},{cs}"
        else:
            raise AssertionError(f"arrow {s}->{t} is not between neighbours")
        m = ExactMatrix.identity(f, pic.nodes[s][2]) if label == "id" else maps[label]
        if m.shape != (pic.nodes[t][2], pic.nodes[s][2]):
            raise AssertionError(f"arrow {s}->{t} ({label}) has shape {m.shape}")
        arrow_maps[name] = m
    return covering_rep(f, grid, arrow_maps, thin_default=False)


def family_covering_rep(spec: FamilySpec, t, field: FieldTag = QQ) -> QuiverRep:
    pic, orientation = _picture(spec)
    tt = field(t)
    maps = _d4_maps(field, tt) if orientation == 0 else _e6_maps(field, tt, orientation)
    return _realize(pic, maps, field)


# ---------------------------------------------------------------------------
# commuting pairs


def _unit(f: FieldTag, n: int, i: int) -> list:
    v = [f(0)] * n
    v[i - 1] = f(1)
    return v


def _lin(f: FieldTag, n: int, *terms) -> list:
    """Σ c·e_i for (c, i) in terms."""
    v = [f(0)] * n
    for c, i in terms:
        v[i - 1] = f(v[i - 1] + c)
    return v


def commuting_x(n: int, k: int, t, field: FieldTag = QQ) -> ExactMatrix:
    f = field
    t = f(t)
    img = {i: [f(0)] * n for i in range(1, n + 1)}
    for i in range(k + 4, n + 1):
        img[i] = _unit(f, n, i - 1)
    img[k + 3] = _unit(f, n, k - 1)
    img[k - 1] = _unit(f, n, k - 5)
    for i in range(2, k - 4):
        img[i] = _unit(f, n, i - 1)
    img[k + 2] = _unit(f, n, k + 1)
    img[k + 1] = _unit(f, n, k)
    img[k] = _lin(f, n, (1, k - 1), (1, k - 4))
    img[k - 2] = _unit(f, n, k - 3)
    img[k - 3] = _unit(f, n, k - 4)
    img[k - 4] = _lin(f, n, (t, k - 5))
    return ExactMatrix.from_columns(f, [img[i] for i in range(1, n + 1)], n)


def _jordan_data(n: int, k: int, t, f: FieldTag, variant: str):
    """Chain tops of x_t, their lengths, and the images of the tops under y_t."""
    x = commuting_x(n, k, t, f)
    t = f(t)
    w1 = _lin(f, n, (1, k + 2), (-(1 + t), k + 5))
    w3 = _lin(f, n, (1, k), (-(1 + t), k + 3))
    z1 = _lin(f, n, (1, k + 1), (-1, k - 2), (-1, k + 4))
    z2 = list(x.apply(z1))
    if variant == "printed":
        alpha = t if n == k + 6 else f(0)
        last = [f(alpha * a) for a in w3]
    elif n == k + 6:
        last = [f((1 + t) * a - t * b) for a, b in zip(w3, z2)]
    else:
        last = z2
    tops = [(_unit(f, n, n), n - 6), (w1, 4), (z1, 2)]
    return x, tops, [w1, z1, last]


def commuting_pair(n: int, k: int, t, field: FieldTag = QQ, variant: str = "corrected"):
    """(x_t, y_t) with y_t built on the Jordan chains of x_t and extended by commuting with x_t."""
    FamilySpec("commuting_pair", k, n, variant)
    x, tops, images = _jordan_data(n, k, t, field, variant)
    cols, imgs = [], []
    for (v, length), w in zip(tops, images):
        for _ in range(length):
            cols.append(v)
            imgs.append(w)
            v, w = list(x.apply(v)), list(x.apply(w))
    J = ExactMatrix.from_columns(field, cols, n)
    if not J.is_invertible():
        raise ParamOutOfRange(f"Jordan chains of x_t are dependent at t={t}")
    y = ExactMatrix.from_columns(field, imgs, n) @ J.inverse()
    return x, y


def commutator_identity(n: int, k: int, variant: str = "corrected") -> dict:
    """[x_t, y_t] = 0 as an identity in Q[t].

    x_t has entries of degree <= 1, so the chain vectors and the y-images have
    degree <= n + 2.  If det J(t) is a nonzero constant, y_t = Y(t) adj J(t) / det
    has degree <= D = (n + 2) + (n - 1)(n + 2), and the commutator degree <= D + 1.
    Vanishing at D + 2 distinct rationals is then an identity.  Constancy of det J
    (degree <= n(n + 2)) is checked the same way.
    """
    FamilySpec("commuting_pair", k, n, variant)
    deg_j = n + 2
    det_points = n * deg_j + 1
    dets = set()
    for s in range(det_points):
        x, tops, images = _jordan_data(n, k, s, QQ, variant)
        dets.add(_chain_matrix(x, tops).det())
    constant_det = len(dets) == 1 and 0 not in dets
    bound = deg_j + (n - 1) * deg_j + 1
    failures = []
    if constant_det:
        for s in range(bound + 1):
            x, y = commuting_pair(n, k, s, QQ, variant)
            if not (x @ y - y @ x).is_zero():
                failures.append(s)
                break
    return {"n": n, "k": k, "variant": variant, "det_constant": constant_det,
            "det": str(next(iter(dets))) if constant_det else None, "degree_bound": bound,
            "points_checked": bound + 1 if constant_det else 0, "identity": constant_det and not failures,
            "failures": failures}


def _chain_matrix(x: ExactMatrix, tops) -> ExactMatrix:
    cols = []
    for v, length in tops:
        for _ in range(length):
            cols.append(v)
            v = list(x.apply(v))
    return ExactMatrix.from_columns(x.field, cols, x.rows)


def is_cyclic_vector(x: ExactMatrix, y: ExactMatrix, v: Sequence) -> bool:
    """The span of all x^i y^j v is the whole space (x, y commute)."""
    f = x.field
    n = x.rows
    span = Subspace(f, n, [v])
    queue = [list(v)]
    while queue:
        w = queue.pop()
        for m in (x, y):
            u = list(m.apply(w))
            if not span.contains(u):
                span = Subspace(f, n, list(span.basis) + [u])
                queue.append(u)
    return span.dim == n


# ---------------------------------------------------------------------------
# members and certificates


def _levi_nilr_111(f: FieldTag, t) -> ExactMatrix:
    return ExactMatrix.from_rows(f, [[0, 1, t], [0, 0, 1], [0, 0, 0]], 3)


def _levi_cone_22(f: FieldTag, t) -> ExactMatrix:
    # loops E_12 on both blocks, arrow diag(1, t) between them
    return ExactMatrix.from_rows(f, [[0, 1, 1, 0], [0, 0, 0, t], [0, 0, 0, 1], [0, 0, 0, 0]], 4)


def build_family_member(spec: FamilySpec, t, field: FieldTag = QQ):
    """A member of the family at parameter t; a pair (x_t, y_t) for commuting_pair."""
    tt = field(t)
    if spec.name == "commuting_pair":
        return commuting_pair(spec.n, spec.k, tt, field, spec.variant)
    if spec.name == "levi_nilr_111":
        return _levi_nilr_111(field, tt)
    if spec.name == "levi_cone_22":
        return _levi_cone_22(field, tt)
    shape, N = rep_to_matrix(push_down(family_covering_rep(spec, tt, field)))
    if shape.bv.blocks != spec.bv:
        raise AssertionError(f"{spec.name}: pushed-down block vector {shape.bv.blocks} != {spec.bv}")
    return N


def _entries_ok(m: ExactMatrix, t) -> bool:
    allowed = {m.field(0), m.field(1), m.field(t)}
    return all(v in allowed for v in m.entries())


def _membership(spec: FamilySpec, member, t) -> list[str]:
    """Names of failed membership clauses (empty when the member is valid)."""
    shape = spec.shape
    bad = []
    if spec.name == "commuting_pair":
        x, y = member
        if not in_nilpotent_cone(shape, x):
            bad.append("x_in_cone")
        if not contains(shape, y):
            bad.append("y_in_parabolic")
        if not (x @ y - y @ x).is_zero():
            bad.append("commute")
        return bad
    if spec.name == "levi_nilr_111":
        if not contains(shape, member, "nilradical"):
            bad.append("in_nilradical")
    elif not in_nilpotent_cone(shape, member):
        bad.append("in_cone")
    if not _entries_ok(member, t):
        bad.append("entries_0_1_t")
    return bad


@lru_cache(maxsize=64)
def _levi_orbit(shape, N: ExactMatrix) -> frozenset:
    from .oracle import group_elements

    return frozenset(g @ N @ g.inverse() for g in group_elements(shape.bv.blocks, N.field.order, "L"))


def _non_isomorphic(spec: FamilySpec, a, b) -> tuple[bool, str]:
    shape = spec.shape
    if spec.name == "commuting_pair":
        a, b = a[0], b[0]
    if spec.name == "levi_nilr_111":
        if a.field.is_finite:
            return b not in _levi_orbit(shape, a), "exhaustive_levi"
        return not is_isomorphic(levi_rep(shape, a, "nilradical"), levi_rep(shape, b, "nilradical")), "levi_quiver"
    if spec.name == "levi_cone_22":
        return not is_isomorphic(levi_rep(shape, a, "cone"), levi_rep(shape, b, "cone")), "levi_quiver"
    return not is_isomorphic(matrix_to_rep(shape, a), matrix_to_rep(shape, b)), "quiver_isomorphism"


def injectivity_violations(r: QuiverRep) -> list[str]:
    """Arrows that should be injective but are not: all horizontal arrows, and any arrow to a bigger space."""
    bad = []
    for name, s, t in r.preset.arrows:
        ds, dt = r.dims[s], r.dims[t]
        if ds == 0:
            continue
        if (name.startswith("h") or ds < dt) and r.maps[name].rank() != ds:
            bad.append(name)
    return bad


@dataclass
class Certificate:
    spec: FamilySpec
    field: FieldTag
    sample: list
    checks: dict = dc_field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c["pass"] for c in self.checks.values())

    def to_json(self) -> dict:
        return {"family": self.spec.to_json(), "field": str(self.field),
                "sample": [self.field.scalar_to_json(self.field(t)) for t in self.sample],
                "checks": self.checks, "pass": self.passed}


def certify_family(spec: FamilySpec, sample: Sequence, field: FieldTag = QQ, threads: int = 1) -> Certificate:
    """Membership, pairwise non-isomorphism and (for covering families) injectivity.

    Failures are recorded with a witness; nothing is raised for a failing check.
    """
    cert = Certificate(spec, field, list(sample))
    ts = [field(t) for t in sample]
    members, failures = {}, []
    for t in ts:
        try:
            m = build_family_member(spec, t, field)
        except Exception as exc:  # a member that cannot be built is a membership failure
            failures.append({"t": field.scalar_to_json(t), "error": f"{type(exc).__name__}: {exc}"})
            continue
        bad = _membership(spec, m, t)
        if bad:
            failures.append({"t": field.scalar_to_json(t), "failed": bad})
        members[t] = m
    cert.checks["membership"] = {"pass": not failures, "witness": failures or None}

    pairs = list(itertools.combinations(range(len(ts)), 2))
    duplicate = next(((i, j) for i, j in pairs if ts[i] == ts[j]), None)
    if duplicate is not None:
        i, j = duplicate
        cert.checks["non_isomorphic"] = {"pass": False, "method": "duplicate_parameter",
                                         "witness": [field.scalar_to_json(ts[i]), field.scalar_to_json(ts[j])]}
    else:
        live = [(i, j) for i, j in pairs if ts[i] in members and ts[j] in members]

        def work(ij):
            i, j = ij
            return ij, _non_isomorphic(spec, members[ts[i]], members[ts[j]])

        if threads > 1 and len(live) > 1:
            with ThreadPoolExecutor(max_workers=threads) as ex:
                results = list(ex.map(work, live))
        else:
            results = [work(ij) for ij in live]
        bad = [[field.scalar_to_json(ts[i]), field.scalar_to_json(ts[j])] for (i, j), (ok, _) in results if not ok]
        method = results[0][1][1] if results else "none"
        cert.checks["non_isomorphic"] = {"pass": not bad and len(live) == len(pairs), "method": method,
                                         "pairs_checked": len(live), "witness": bad[0] if bad else None}

    if spec.name in COVERING_FAMILIES:
        viol = []
        for t in ts:
            names = injectivity_violations(family_covering_rep(spec, t, field))
            if names:
                viol.append({"t": field.scalar_to_json(t), "arrows": names})
        cert.checks["injective_arrows"] = {"pass": not viol, "witness": viol or None}
    return cert


# ---------------------------------------------------------------------------
# centralizers and distinguished elements


def centralizer_in_p(shape, x: ExactMatrix) -> Subspace:
    """p^x as a subspace of K^{n^2} (matrices flattened row by row)."""
    shape = shape_of(shape)
    if not contains(shape, x):
        raise NotInParabolic("x is not in the parabolic")
    f = x.field
    n = shape.n
    pos = shape.positions("parabolic")
    cols = []
    for i, j in pos:
        E = ExactMatrix.unit(f, n, n, i, j)
        cols.append((x @ E - E @ x).entries())
    ker = kernel(ExactMatrix.from_columns(f, cols, n * n))
    vecs = []
    for v in ker.basis:
        m = [0] * (n * n)
        for c, (i, j) in zip(v, pos):
            m[i * n + j] = c
        vecs.append(m)
    return Subspace(f, n * n, vecs)


def _trace_free_part(ms: list[ExactMatrix]) -> list[ExactMatrix]:
    f = ms[0].field if ms else QQ
    traces = [m.trace() for m in ms]
    piv = next((i for i, tr in enumerate(traces) if tr), None)
    if piv is None:
        return list(ms)
    c = f.inv(traces[piv])
    return [m - ms[piv].scale(f(traces[i] * c)) for i, m in enumerate(ms) if i != piv]


def _route_nilpotent(shape, x: ExactMatrix, budget: int):
    f = x.field
    n = shape.n
    if f.characteristic and n % f.characteristic == 0:
        return None, "characteristic_divides_n"
    ms = subspace_matrices(centralizer_in_p(shape, x), n, n)
    try:
        return is_nilpotent_subspace(_trace_free_part(ms), n, budget=budget), "nilpotent_centralizer"
    except DimensionTooLarge:
        return None, "dimension_too_large"


def _route_local(shape, x: ExactMatrix, idempotent_budget: int):
    r = matrix_to_rep(shape, x)
    if not x.field.is_finite:
        return endomorphism_local(r), "endomorphism_local"
    try:
        return idempotent_search(r, budget=idempotent_budget), "idempotent_search"
    except DimensionTooLarge:
        return None, "dimension_too_large"


@dataclass
class DistinguishedResult:
    distinguished: bool
    method: str  # "both" | "nilpotent_centralizer" | "endomorphism_local" | "idempotent_search"
    routes: dict

    def __bool__(self):
        return self.distinguished

    def to_json(self) -> dict:
        return {"distinguished": self.distinguished, "method": self.method, "routes": self.routes}


def is_distinguished(shape, x: ExactMatrix, budget: int = 200_000, idempotent_budget: int = 1 << 16,
                     routes: str = "both") -> DistinguishedResult:
    """p^x ∩ sl_n nilpotent (route 1), cross-checked with indecomposability of the rep (route 2)."""
    shape = shape_of(shape)
    if not in_nilpotent_cone(shape, x):
        raise NotInParabolic("x is not a nilpotent element of the parabolic")
    out = {}
    if routes in ("both", "nilpotent"):
        v, tag = _route_nilpotent(shape, x, budget)
        out["nilpotent_centralizer"] = {"value": v, "status": tag}
    if routes in ("both", "local"):
        v, tag = _route_local(shape, x, idempotent_budget)
        out["indecomposable"] = {"value": v, "status": tag}
    vals = {k: r["value"] for k, r in out.items() if r["value"] is not None}
    if not vals:
        raise DimensionTooLarge("no distinguishedness route completed within budget")
    if len(set(vals.values())) > 1:
        raise MethodsDisagree("distinguishedness routes disagree",
                              {"bv": list(shape.bv.blocks), "x": x.to_json(), "routes": out})
    method = "both" if len(vals) == 2 else next(r["status"] for r in out.values() if r["value"] is not None)
    return DistinguishedResult(next(iter(vals.values())), method, out)


def lift_to_rationals(m: ExactMatrix) -> ExactMatrix:
    """Entries of a GF(q) matrix read as integers in [0, q)."""
    return ExactMatrix.from_rows(QQ, [[int(v) for v in row] for row in m.to_rows()], m.cols)


@dataclass
class Census:
    bv: tuple
    q: int
    orbit_count: int
    count: int
    representatives: list  # distinguished representatives (over GF(q))
    discrepancies: list

    def to_json(self) -> dict:
        return {"bv": list(self.bv), "q": self.q, "orbit_count": self.orbit_count, "count": self.count,
                "representatives": [r.to_json() for r in self.representatives],
                "discrepancies": self.discrepancies}


def distinguished_census(bv, q: int = 2, budget: int | None = None) -> Census:
    """Distinguished P-orbits in N_p, via oracle representatives lifted to Q."""
    from .classifier import classify_P_on_Np
    from .oracle import DEFAULT_BUDGET, enumerate_orbits

    shape = shape_of(as_bv(bv))
    if not classify_P_on_Np(shape.bv).finite:
        raise InfiniteType(f"{shape.bv} has infinitely many orbits")
    table = enumerate_orbits(shape.bv, q, "cone", "P", budget=budget or DEFAULT_BUDGET)
    reps, notes = [], []
    for rep in table.representatives:
        lifted = lift_to_rationals(rep)
        if not in_nilpotent_cone(shape, lifted):
            notes.append({"rep": rep.to_json(), "issue": "lift_not_in_cone"})
            continue
        res = is_distinguished(shape, lifted)
        modular, tag = _route_nilpotent(shape, rep, 200_000)
        if modular is not None and modular != res.distinguished:
            notes.append({"rep": rep.to_json(), "issue": "lift_disagrees_with_gf_route",
                          "over_Q": res.distinguished, "over_GF": modular})
        if res.distinguished:
            reps.append(rep)
    return Census(shape.bv.blocks, q, table.orbit_count, len(reps), reps, notes)


def commuting_pair_report(n: int, k: int, q: int = 101, ts: Sequence | None = None,
                          variant: str = "corrected") -> dict:
    """Commutation identity plus, per sampled t, cyclicity of e_n and distinguishedness of x_t."""
    spec = FamilySpec("commuting_pair", k, n, variant)
    f = GF(q)
    ts = list(range(1, q)) if ts is None else list(ts)
    rows, exceptional = [], []
    for t in ts:
        try:
            x, y = commuting_pair(n, k, t, f, variant)
        except ParamOutOfRange:
            exceptional.append(t)
            rows.append({"t": t, "built": False})
            continue
        bad = _membership(spec, (x, y), t)
        cyc = is_cyclic_vector(x, y, _unit(f, n, n))
        dist = is_distinguished(spec.shape, x, routes="nilpotent").distinguished
        ok = not bad and cyc and dist
        if not ok:
            exceptional.append(t)
        rows.append({"t": t, "built": True, "membership": not bad, "cyclic": cyc, "distinguished": dist})
    return {"n": n, "k": k, "q": q, "variant": variant, "identity": commutator_identity(n, k, variant),
            "sampled": len(ts), "good": len(ts) - len(exceptional), "exceptional": exceptional, "rows": rows}
