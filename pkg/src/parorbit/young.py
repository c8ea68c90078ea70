"""Labeled Young diagrams for pairs (U, V, f) and their reduction to {0,1} forms.

A pair is a nilpotent f on V together with an f-stable subspace U.  In a Jordan
basis v_{i,j} of V (f v_{i,j} = v_{i,j-1}) and a Jordan basis of f|U with chain
tops u_1, ..., u_h, write u_m = Σ γ^m_{i,j} v_{i,j}.  The diagram of λ (Jordan
type of f) carrying the h-tuples γ_{i,j} is the reduction state.

The state stores the tops u_m in box coordinates; moves are genuine base
changes of V or of U, after which γ is recomputed and the expected pictorial
effect is asserted.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator, Sequence

from .exact import (ExactMatrix, FieldTag, QQ, Subspace, jordan_matrix, kernel,
                    nilpotent_jordan_basis)


class YoungError(Exception):
    pass


class NotStable(YoungError, ValueError):
    pass


class InvalidDiagram(YoungError, ValueError):
    pass


class InadmissibleBaseChange(YoungError, ValueError):
    """The base change does not keep f in Jordan normal form."""


class MovePreconditionViolated(YoungError, ValueError):
    def __init__(self, kind: str, clause: str):
        super().__init__(f"{kind}: {clause}")
        self.kind = kind
        self.clause = clause


class MoveEffectMismatch(YoungError, AssertionError):
    pass


class MuTooLarge(YoungError, ValueError):
    pass


class NotReducedBase(YoungError, ValueError):
    pass


# ---------------------------------------------------------------------------
# partitions and boxes (1-based (i, j) everywhere outside this block)

def _check_partition(p, name: str) -> tuple[int, ...]:
    p = tuple(int(x) for x in p)
    if any(x < 1 for x in p) or any(p[i] < p[i + 1] for i in range(len(p) - 1)):
        raise InvalidDiagram(f"{name} must be non-increasing positive, got {p}")
    return p


def boxes(part: Sequence[int]) -> list[tuple[int, int]]:
    return [(i + 1, j + 1) for i, r in enumerate(part) for j in range(r)]


def _index(part: Sequence[int]) -> dict[tuple[int, int], int]:
    return {b: n for n, b in enumerate(boxes(part))}


def _shift(vec: Sequence, part: Sequence[int], s: int, zero) -> list:
    """f^s applied to a vector in box coordinates."""
    out = [zero] * len(vec)
    n = 0
    for r in part:
        for j in range(r):
            if j >= s:
                out[n + j - s] = vec[n + j]
        n += r
    return out


def _lastnz(t: Sequence) -> int:
    for s in range(len(t), 0, -1):
        if t[s - 1]:
            return s
    return 0


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LabeledYoungDiagram:
    lam: tuple[int, ...]
    mu: tuple[int, ...]
    field: FieldTag
    tops: tuple[tuple, ...]  # u_m in box coordinates of V

    def __post_init__(self):
        lam = _check_partition(self.lam, "lambda")
        mu = _check_partition(self.mu, "mu")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "mu", mu)
        k = sum(lam)
        F = self.field
        tops = tuple(tuple(F(x) for x in u) for u in self.tops)
        if len(tops) != len(mu) or any(len(u) != k for u in tops):
            raise InvalidDiagram("one top vector of length |lambda| per part of mu")
        object.__setattr__(self, "tops", tops)
        idx = _index(lam)
        for m, u in enumerate(tops):
            for (i, j), n in idx.items():
                if j > mu[m] and u[n]:
                    raise InvalidDiagram(f"gamma^{m + 1}_{i},{j} must vanish since j > mu_{m + 1}")

    # -- construction
    @classmethod
    def from_gamma(cls, lam, mu, field: FieldTag, gamma: dict) -> "LabeledYoungDiagram":
        """gamma maps (i, j) (or "i,j") to an h-tuple; missing boxes are zero."""
        lam = _check_partition(lam, "lambda")
        mu = _check_partition(mu, "mu")
        idx = _index(lam)
        tops = [[field(0)] * sum(lam) for _ in mu]
        for key, t in gamma.items():
            if isinstance(key, str):
                key = tuple(int(x) for x in key.split(","))
            if key not in idx:
                raise InvalidDiagram(f"box {key} not in lambda={lam}")
            if len(t) != len(mu):
                raise InvalidDiagram(f"tuple at {key} has length {len(t)}, expected {len(mu)}")
            for m, x in enumerate(t):
                tops[m][idx[key]] = field(x)
        return cls(lam, mu, field, tuple(map(tuple, tops)))

    @classmethod
    def zero(cls, lam, mu, field: FieldTag) -> "LabeledYoungDiagram":
        return cls.from_gamma(lam, mu, field, {})

    # -- access
    @property
    def k(self) -> int:
        return sum(self.lam)

    @property
    def l(self) -> int:
        return sum(self.mu)

    @property
    def h(self) -> int:
        return len(self.mu)

    @property
    def g(self) -> int:
        return len(self.lam)

    def gamma(self, i: int, j: int) -> tuple:
        n = _index(self.lam)[(i, j)]
        return tuple(u[n] for u in self.tops)

    def gamma_map(self) -> dict[tuple[int, int], tuple]:
        return {b: tuple(u[n] for u in self.tops) for b, n in _index(self.lam).items()}

    def nonzero(self) -> dict[tuple[int, int], tuple]:
        return {b: t for b, t in self.gamma_map().items() if any(t)}

    def is_zero(self) -> bool:
        return not any(any(u) for u in self.tops)

    def chain_vectors(self) -> list[tuple]:
        """u_{m,t} = f^{μ_m - t} u_m, ordered m = 1..h, t = 1..μ_m."""
        z = self.field(0)
        out = []
        for m, u in enumerate(self.tops):
            for t in range(1, self.mu[m] + 1):
                out.append(tuple(_shift(u, self.lam, self.mu[m] - t, z)))
        return out

    def is_valid(self) -> bool:
        """Chains independent, so that U has dimension |μ| and f|U has Jordan type μ."""
        vs = self.chain_vectors()
        return not vs or Subspace(self.field, self.k, vs).dim == len(vs)

    def f_matrix(self) -> ExactMatrix:
        return jordan_matrix(self.field, self.lam) if self.lam else ExactMatrix.zero(self.field, 0)

    def to_pair(self) -> tuple[Subspace, ExactMatrix]:
        return Subspace(self.field, self.k, self.chain_vectors()), self.f_matrix()

    def to_matrix(self) -> tuple[tuple[int, int], ExactMatrix]:
        """Block vector (l, k - l) and f in a basis whose first l vectors span U."""
        if not self.is_valid():
            raise InvalidDiagram("chains are dependent")
        F = self.field
        vs = self.chain_vectors()
        comp = Subspace(F, self.k, vs).complement_units() if vs else list(range(self.k))
        cols = [list(v) for v in vs] + [[F(1) if r == c else F(0) for r in range(self.k)] for c in comp]
        B = ExactMatrix.from_columns(F, cols, self.k)
        N = B.inverse() @ self.f_matrix() @ B
        bv = (self.l, self.k - self.l) if self.l < self.k else (self.k,)
        return bv, N

    # -- serialization
    def to_json(self) -> dict:
        F = self.field
        return {"lambda": list(self.lam), "mu": list(self.mu), "field": str(F),
                "gamma": {f"{i},{j}": [F.scalar_to_json(x) for x in t]
                          for (i, j), t in self.gamma_map().items()}}

    @classmethod
    def from_json(cls, obj: dict) -> "LabeledYoungDiagram":
        F = FieldTag.parse(obj["field"])
        gamma = {k: [F.scalar_from_json(x) for x in v] for k, v in obj.get("gamma", {}).items()}
        return cls.from_gamma(obj["lambda"], obj["mu"], F, gamma)

    def pretty(self) -> str:
        F = self.field
        gm = self.gamma_map()
        lines = []
        for i, r in enumerate(self.lam, 1):
            cells = ["(" + ",".join(str(F.scalar_to_json(x)) for x in gm[(i, j)]) + ")" for j in range(1, r + 1)]
            lines.append(" ".join(cells))
        return "\n".join(lines)


def diagram_from_pair(U_basis: Subspace, V_dim: int, f: ExactMatrix) -> LabeledYoungDiagram:
    F = f.field
    if f.shape != (V_dim, V_dim):
        raise ValueError(f"f must be {V_dim}x{V_dim}")
    Bv, lam = nilpotent_jordan_basis(f)
    if U_basis.dim == 0:
        return LabeledYoungDiagram(tuple(lam), (), F, ())
    Ub = U_basis.columns()
    fU = f @ Ub
    X = Ub.solve_right(fU)
    if X is None:
        raise NotStable("f(U) is not contained in U")
    Bu, mu = nilpotent_jordan_basis(X)
    # tops are the last column of each chain
    top_cols, n = [], 0
    for r in mu:
        top_cols.append(n + r - 1)
        n += r
    tops_U = Ub @ Bu.submatrix(range(Bu.rows), top_cols)
    gam = Bv.inverse() @ tops_U
    tops = tuple(gam.col(c) for c in range(gam.cols))
    return LabeledYoungDiagram(tuple(lam), tuple(mu), F, tops)


# ---------------------------------------------------------------------------
# base changes

def stab_violations(omega: ExactMatrix, part: Sequence[int]) -> list[str]:
    """Entries breaking the admissibility condition for a base change of a Jordan basis.

    omega[(i',j'), (i,j)] is the coefficient of the old v_{i',j'} in the new v_{i,j}.
    """
    bx = boxes(part)
    idx = {b: n for n, b in enumerate(bx)}
    out = []
    for (i, j), c in idx.items():
        for (i2, j2), r in idx.items():
            w = omega[r, c]
            if j2 > j or part[i - 1] - j > part[i2 - 1] - j2:
                if w:
                    out.append(f"omega[{i2},{j2}; {i},{j}] must vanish")
            elif j2 >= 2 and w != omega[idx[(i2, j2 - 1)], idx[(i, j - 1)]]:
                out.append(f"omega[{i2},{j2}; {i},{j}] breaks the propagation rule")
    return out


def commutes_with_jordan(omega: ExactMatrix, part: Sequence[int]) -> bool:
    J = jordan_matrix(omega.field, part)
    return omega @ J == J @ omega


def _omega_from_tops(field: FieldTag, part: Sequence[int], images: dict) -> ExactMatrix:
    """Full base change determined by images of chosen chain vectors.

    images maps a row i to (j_i, {(i',j'): coeff}) meaning v_{i,j_i} ↦ Σ coeff v_{i',j'};
    the other v_{i,j} follow by applying powers of f (or shifting up).
    Rows not listed are kept.
    """
    idx = _index(part)
    n = len(idx)
    ent = [[field(0)] * n for _ in range(n)]
    for (i, j), c in idx.items():
        if i not in images:
            ent[c][c] = field(1)
            continue
        ji, img = images[i]
        for (i2, j2), w in img.items():
            jj = j2 - (ji - j)
            if w and 1 <= jj <= part[i2 - 1]:
                ent[idx[(i2, jj)]][c] = field(w)
    return ExactMatrix.from_rows(field, ent, n)


@dataclass(frozen=True)
class BaseChange:
    side: str   # "V" | "U"
    kind: str   # "M" | "C" | "B" | "D" | "E"
    params: tuple  # sorted (name, value) pairs
    omega: ExactMatrix

    def __post_init__(self):
        part = self.params_dict()["partition"]
        if not self.omega.is_invertible():
            raise InadmissibleBaseChange(f"{self.kind}: base change is singular")
        bad = stab_violations(self.omega, part)
        if bad:
            raise InadmissibleBaseChange(f"{self.kind}: " + "; ".join(bad[:3]))

    def params_dict(self) -> dict:
        return dict(self.params)

    def label(self) -> str:
        p = self.params_dict()
        if self.kind == "M":
            return f"M_{p['i']}"
        if self.kind == "C":
            return f"C_{p['i']},{p['j']}[m={p['m']}]"
        if self.kind == "B":
            return f"B_({p['i0']},{p['j0']}),({p['i1']},{p['j1']})"
        if self.kind == "D":
            return f"D_{p['j']}"
        return f"E_{p['m']},{p['j']}"

    def to_json(self) -> dict:
        F = self.omega.field
        out = {"side": self.side, "kind": self.kind, "label": self.label()}
        for k, v in self.params:
            if k == "partition":
                continue
            out[k] = _jsonable(F, v)
        return out


def _jsonable(F, v):
    if isinstance(v, tuple):
        return [_jsonable(F, x) for x in v]
    if isinstance(v, int) and not isinstance(v, bool):
        return v
    return F.scalar_to_json(v)


def _bc(side, kind, part, mat, **params) -> BaseChange:
    params["partition"] = tuple(part)
    return BaseChange(side, kind, tuple(sorted(params.items())), mat)


def _fail(kind, clause):
    raise MovePreconditionViolated(kind, clause)


def move_M(d: LabeledYoungDiagram, i: int, omega) -> BaseChange:
    """v_i ↦ ω v_i on the whole chain; row i of the diagram gets multiplied by 1/ω."""
    F = d.field
    omega = F(omega)
    if not 1 <= i <= d.g:
        _fail("M", "row index out of range")
    if not omega:
        _fail("M", "omega must be non-zero")
    r = d.lam[i - 1]
    om = _omega_from_tops(F, d.lam, {i: (r, {(i, r): omega})})
    return _bc("V", "M", d.lam, om, i=i, omega=omega)


def move_C(d: LabeledYoungDiagram, i: int, j: int, m: int) -> BaseChange:
    """Use γ^m_{i,j} = 1 to kill the m-th entries in the quadrant northwest of (i, j)."""
    F = d.field
    if (i, j) not in _index(d.lam):
        _fail("C", "box not in diagram")
    if not 1 <= m <= d.h:
        _fail("C", "pivot index out of range")
    gm = d.gamma_map()
    if gm[(i, j)][m - 1] != F(1):
        _fail("C", f"gamma^{m}_{i},{j} must equal 1")
    if any(any(gm[(i, jj)]) for jj in range(j + 1, d.lam[i - 1] + 1)):
        _fail("C", f"row {i} must vanish right of column {j}")
    img = {(i, j): F(1)}
    for (i2, j2), t in gm.items():
        if i2 <= i and j2 <= j and (i2, j2) != (i, j) and t[m - 1]:
            img[(i2, j2)] = t[m - 1]
    om = _omega_from_tops(F, d.lam, {i: (j, img)})
    coeffs = tuple(sorted((a, b, c) for (a, b), c in img.items() if (a, b) != (i, j)))
    return _bc("V", "C", d.lam, om, i=i, j=j, m=m, coeffs=coeffs)


def move_B(d: LabeledYoungDiagram, i0: int, j0: int, i1: int, j1: int, omega) -> BaseChange:
    """v_{i0,j0} += ω v_{i0,j1} and v_{i1,j1} -= ω v_{i0,j1}: adds ω γ_{i1,1} to γ_{i0,1}."""
    F = d.field
    omega = F(omega)
    idx = _index(d.lam)
    if (i0, j0) not in idx or (i1, j1) not in idx:
        _fail("B", "box not in diagram")
    if not (i0 < i1 and j0 > j1 >= 2):
        _fail("B", "need i0 < i1 and j0 > j1 > 1")
    gm = d.gamma_map()
    for (r, jr) in ((i0, j0), (i1, j1)):
        if any(any(gm[(r, jj)]) for jj in range(2, d.lam[r - 1] + 1) if jj != jr):
            _fail("B", f"row {r} must vanish outside columns 1 and {jr}")
    if gm[(i0, j0)] != gm[(i1, j1)]:
        _fail("B", "gamma_{i0,j0} must equal gamma_{i1,j1}")
    images = {i0: (j0, {(i0, j0): F(1), (i0, j1): omega}),
              i1: (j1, {(i1, j1): F(1), (i0, j1): -omega})}
    if i0 == i1:
        _fail("B", "rows must differ")
    om = _omega_from_tops(F, d.lam, images)
    return _bc("V", "B", d.lam, om, i0=i0, j0=j0, i1=i1, j1=j1, omega=omega)


def _u_omega(d: LabeledYoungDiagram, images: dict) -> ExactMatrix:
    """U-side analogue: images maps m to (t_m, {(m', t'): coeff}) in the chain basis of U."""
    return _omega_from_tops(d.field, d.mu, images)


def move_D(d: LabeledYoungDiagram, j: int, A) -> BaseChange:
    """u_m ↦ Σ A[m][m'] u_{m'}; A is identity off S = {m : μ_m = j}, columns of S live in rows ≤ m2."""
    F = d.field
    h = d.h
    A = A if isinstance(A, ExactMatrix) else ExactMatrix.from_rows(F, A, h)
    if A.shape != (h, h):
        _fail("D", "A must be h x h")
    S = [m for m in range(h) if d.mu[m] == j]
    if not S:
        _fail("D", f"no part of mu equals {j}")
    m2 = max(S)
    for c in range(h):
        for r in range(h):
            if c not in S and A[r, c] != (1 if r == c else 0):
                _fail("D", "columns outside S must be the identity")
            if c in S and r > m2 and A[r, c]:
                _fail("D", "columns in S must be supported on rows <= m2")
    if not A.is_invertible():
        _fail("D", "A must be invertible")
    images = {m + 1: (d.mu[m], {(mm + 1, d.mu[mm]): A[m, mm] for mm in range(h) if A[m, mm]})
              for m in range(h)}
    om = _u_omega(d, images)
    return _bc("U", "D", d.mu, om, j=j, A=tuple(tuple(r) for r in A.to_rows()))


def move_E(d: LabeledYoungDiagram, m: int, j: int) -> BaseChange:
    """u_{m'} += ω_{m'} f^{μ_m - j} u_m for μ_{m'} ≥ j, killing the tuple γ_{i,j} of the unique
    row i with γ^m_{i,μ_m} ≠ 0."""
    F = d.field
    if not 1 <= m <= d.h or not 1 <= j < d.mu[m - 1]:
        _fail("E", "need 1 <= j < mu_m")
    col = d.mu[m - 1]
    gm = d.gamma_map()
    rows = [i for (i, jj), t in gm.items() if jj == col and t[m - 1]]
    if len(rows) != 1:
        _fail("E", f"exactly one row must have gamma^{m} non-zero in column {col}")
    i = rows[0]
    if d.lam[i - 1] < j:
        _fail("E", "target box outside the diagram")
    piv = gm[(i, col)][m - 1]
    tgt = gm[(i, j)]
    om_coeffs = {}
    for mm in range(1, d.h + 1):
        if d.mu[mm - 1] >= j and tgt[mm - 1]:
            om_coeffs[mm] = -tgt[mm - 1] * F.inv(piv)
    images = {mm: (d.mu[mm - 1], {(mm, d.mu[mm - 1]): F(1), (m, j): F(w)}) for mm, w in om_coeffs.items()}
    om = _u_omega(d, images)
    return _bc("U", "E", d.mu, om, m=m, j=j, row=i,
               omegas=tuple(sorted((mm, F(w)) for mm, w in om_coeffs.items())))


# ---------------------------------------------------------------------------
# applying moves

def _transform(d: LabeledYoungDiagram, bc: BaseChange) -> LabeledYoungDiagram:
    F = d.field
    if bc.side == "V":
        if bc.omega.rows != d.k:
            raise MovePreconditionViolated(bc.kind, "base change size differs from |lambda|")
        if not d.h:
            return d
        U = ExactMatrix.from_columns(F, [list(u) for u in d.tops], d.k)
        new = bc.omega.inverse() @ U
        return LabeledYoungDiagram(d.lam, d.mu, F, tuple(new.col(c) for c in range(new.cols)))
    # U side: new u_m = Σ omega[(m',t'), (m, μ_m)] u_{m',t'}
    if bc.omega.rows != d.l:
        raise MovePreconditionViolated(bc.kind, "base change size differs from |mu|")
    chains = d.chain_vectors()
    idx = _index(d.mu)
    z = F(0)
    tops = []
    for m in range(1, d.h + 1):
        c = idx[(m, d.mu[m - 1])]
        acc = [z] * d.k
        for r, vec in enumerate(chains):
            w = bc.omega[r, c]
            if w:
                acc = [a + w * x for a, x in zip(acc, vec)]
        tops.append(tuple(acc))
    return LabeledYoungDiagram(d.lam, d.mu, F, tuple(tops))


def _matches_params(d: LabeledYoungDiagram, bc: BaseChange) -> BaseChange:
    """Rebuild the move from its parameters against d, re-checking preconditions."""
    p = bc.params_dict()
    if bc.kind == "M":
        return move_M(d, p["i"], p["omega"])
    if bc.kind == "C":
        return move_C(d, p["i"], p["j"], p["m"])
    if bc.kind == "B":
        return move_B(d, p["i0"], p["j0"], p["i1"], p["j1"], p["omega"])
    if bc.kind == "D":
        return move_D(d, p["j"], [list(r) for r in p["A"]])
    if bc.kind == "E":
        return move_E(d, p["m"], p["j"])
    raise MovePreconditionViolated(bc.kind, "unknown move kind")


def _expect(cond: bool, bc: BaseChange, what: str):
    if not cond:
        raise MoveEffectMismatch(f"{bc.label()}: {what}")


def _check_effect(before: LabeledYoungDiagram, after: LabeledYoungDiagram, bc: BaseChange):
    F = before.field
    p = bc.params_dict()
    g0, g1 = before.gamma_map(), after.gamma_map()
    if bc.kind == "M":
        inv = F.inv(p["omega"])
        for (i, j), t in g0.items():
            want = tuple(F(x * inv) for x in t) if i == p["i"] else t
            _expect(g1[(i, j)] == want, bc, f"row scaling at ({i},{j})")
    elif bc.kind == "C":
        i, j, m = p["i"], p["j"], p["m"]
        for (a, b), t in g0.items():
            if a <= i and b <= j:
                want = 1 if (a, b) == (i, j) else 0
                _expect(g1[(a, b)][m - 1] == F(want), bc, f"entry {m} at ({a},{b}) not killed")
            else:
                _expect(g1[(a, b)] == t, bc, f"tuple outside the quadrant changed at ({a},{b})")
    elif bc.kind == "B":
        key = (p["i0"], 1)
        want = tuple(F(x + p["omega"] * y) for x, y in zip(g0[key], g0[(p["i1"], 1)]))
        for b, t in g0.items():
            _expect(g1[b] == (want if b == key else t), bc, f"unexpected change at {b}")
    elif bc.kind == "D":
        A = ExactMatrix.from_rows(F, [list(r) for r in p["A"]], before.h)
        for b, t in g0.items():
            _expect(g1[b] == A.apply(t), bc, f"tuple at {b} is not A·gamma")
    elif bc.kind == "E":
        tgt = (p["row"], p["j"])
        _expect(not any(g1[tgt]), bc, "target tuple not killed")
        for b, t in g0.items():
            if b != tgt and b[1] >= p["j"]:
                _expect(g1[b] == t, bc, f"column >= j changed at {b}")


def apply_move(d: LabeledYoungDiagram, bc: BaseChange) -> LabeledYoungDiagram:
    rebuilt = _matches_params(d, bc)
    if rebuilt.omega != bc.omega:
        raise MovePreconditionViolated(bc.kind, "coefficients do not match the current diagram")
    out = _transform(d, bc)
    _check_effect(d, out, bc)
    return out


def replay(d: LabeledYoungDiagram, moves: Sequence[BaseChange]) -> LabeledYoungDiagram:
    for bc in moves:
        d = apply_move(d, bc)
    return d


# ---------------------------------------------------------------------------
# reduction

def _unit(F, h, s):
    return [F(1) if t == s else F(0) for t in range(1, h + 1)]


def _pivot_matrix(F, h: int, gamma: Sequence, s: int) -> list[list]:
    """Identity except column s, chosen so that A·gamma = e_s (gamma ∈ W_s \\ W_{s-1})."""
    A = [[F(1) if r == c else F(0) for c in range(h)] for r in range(h)]
    inv = F.inv(gamma[s - 1])
    for r in range(h):
        A[r][s - 1] = F(-gamma[r] * inv) if r < s - 1 else F(0)
    A[s - 1][s - 1] = inv
    return A


def _is_identity(A) -> bool:
    return all(A[r][c] == (1 if r == c else 0) for r in range(len(A)) for c in range(len(A)))


class _Reducer:
    def __init__(self, d: LabeledYoungDiagram):
        self.d = d
        self.F = d.field
        self.moves: list[BaseChange] = []
        self.positions: list[tuple[int, int]] = []
        self.pos = (max(d.lam, default=0) + 1, 0)

    def at(self, j: int, i: int):
        if (j, i) > self.pos:
            raise AssertionError(f"reduction measure increased: {self.pos} -> {(j, i)}")
        self.pos = (j, i)

    def _apply(self, bc: BaseChange):
        self.d = apply_move(self.d, bc)
        self.moves.append(bc)
        self.positions.append(self.pos)

    def g(self, i, j) -> tuple:
        return self.d.gamma(i, j)

    def M(self, i, omega):
        if self.F(omega) != 1:
            self._apply(move_M(self.d, i, omega))

    def C(self, i, j, m):
        """Apply C only when something in the quadrant is still to be killed."""
        gm = self.d.gamma_map()
        if any(t[m - 1] for (a, b), t in gm.items() if a <= i and b <= j and (a, b) != (i, j)):
            self._apply(move_C(self.d, i, j, m))

    def B(self, *args):
        self._apply(move_B(self.d, *args))

    def D(self, j, A):
        if not _is_identity(A):
            self._apply(move_D(self.d, j, A))

    def E(self, m, j):
        self._apply(move_E(self.d, m, j))

    def rows(self, j: int) -> list[int]:
        return [i for i in range(self.d.g, 0, -1) if self.d.lam[i - 1] >= j]

    # -- case a: μ = (2^a, 1^{l-2a})
    def case_a(self):
        d, F, h = self.d, self.F, self.d.h
        mu = d.mu
        a = sum(1 for x in mu if x == 2)
        piv: dict[int, int] = {}
        if a:
            s = 0
            for i in self.rows(2):
                self.at(2, i)
                t = self.g(i, 2)
                if not any(t):
                    continue
                p = next(r for r in range(s, h) if t[r])  # first non-zero entry beyond s
                cols = [_unit(F, h, r) for r in range(1, s + 1)] + [list(t)]
                rest = [r for r in range(s + 1, h + 1) if r != p + 1]
                cols += [_unit(F, h, r) for r in rest]
                Ainv = ExactMatrix.from_columns(F, cols, h)
                self.D(2, Ainv.inverse().to_rows())
                self.C(i, 2, s + 1)
                if any(self.g(i, 1)):
                    self.E(s + 1, 1)
                piv[s + 1] = i
                s += 1
        for i in self.rows(1):
            self.at(1, i)
            t = self.g(i, 1)
            if not any(t):
                continue
            s = _lastnz(t)
            A = _pivot_matrix(F, h, t, s)
            if mu[s - 1] == 1:
                self.D(1, A)
            else:
                self.D(2, A)
                if s in piv:
                    self.M(piv[s], F.inv(t[s - 1]))
                    for r in range(1, s):
                        if t[r - 1] and r in piv:
                            self.C(piv[r], 2, r)
            self.C(i, 1, s)

    # -- case b: μ = (a, 1^{l-a}), a ≥ 3
    def case_b(self):
        F, h = self.F, self.d.h
        mu = self.d.mu
        top = mu[0]
        low = mu[1] if h >= 2 else 0
        piv: dict[int, int] = {}
        for j in range(top, low, -1):
            self.at(j, self.d.g)
            nz = [i for i in self.rows(j) if any(self.g(i, j))]
            if not nz:
                continue
            i = max(nz)
            self.at(j, i)
            self.M(i, self.g(i, j)[0])
            self.C(i, j, 1)
            piv[j] = i
        if h < 2:
            return
        self.at(2, 0)
        istar = None
        carrying = [j for j in sorted(piv) if any(self.g(piv[j], 1))]
        if h == 2:
            if carrying:
                jstar = carrying[0]
                i1 = piv[jstar]
                for j in carrying[1:]:
                    c0, c1 = self.g(piv[j], 1)[1], self.g(i1, 1)[1]
                    self.B(piv[j], j, i1, jstar, F(-c0 * F.inv(c1)))
                istar = i1
        else:
            if 3 in piv and any(self.g(piv[3], 1)):
                self.E(1, 1)
            if 2 in piv and any(self.g(piv[2], 1)):
                istar = piv[2]
        pivots = [(i, j) for j, i in piv.items()]
        e1row = None
        passed_star = False

        def reclear():
            for (pi, pj) in pivots:
                self.C(pi, pj, 1)
            if e1row is not None:
                self.C(e1row, 1, 1)

        for i in self.rows(1):
            self.at(1, i)
            t = self.g(i, 1)
            if not any(t):
                continue
            if i == istar:
                if t[0]:
                    raise AssertionError("first entry at the special row should vanish")
                s = _lastnz(t)
                self.D(1, _pivot_matrix(F, h, t, s))
                if s != 2:
                    # σ: e_s -> e_2, e_r -> e_{r+1} for 2 <= r < s
                    sigma = {r: r for r in range(1, h + 1)}
                    sigma[s] = 2
                    for r in range(2, s):
                        sigma[r] = r + 1
                    P = [[F(0)] * h for _ in range(h)]
                    for r, c in sigma.items():
                        P[c - 1][r - 1] = F(1)
                    self.D(1, P)
                passed_star = True
                continue
            if any(i == pi for pi, _ in pivots):
                raise AssertionError("pivot row carries a first-column tuple")
            if passed_star and not any(x for r, x in enumerate(t) if r != 1):
                self.M(i, t[1])
                self.C(i, 1, 2)
                continue
            s = _lastnz(t)
            if s == 1:
                self.M(i, t[0])
                self.C(i, 1, 1)
                e1row = i
                continue
            self.D(1, _pivot_matrix(F, h, t, s))
            if t[0]:
                reclear()
            self.C(i, 1, s)

    # -- case c: μ = (3, 2)
    def case_c(self):
        F = self.F
        i3 = i2 = istar = None
        self.at(3, self.d.g)
        nz = [i for i in self.rows(3) if any(self.g(i, 3))]
        if nz:
            i3 = max(nz)
            self.at(3, i3)
            self.M(i3, self.g(i3, 3)[0])
            self.C(i3, 3, 1)
            if any(self.g(i3, 2)):
                self.E(1, 2)
            if any(self.g(i3, 1)):
                self.E(1, 1)
        for i in self.rows(2):
            self.at(2, i)
            if i == i3:
                continue
            t = self.g(i, 2)
            if not any(t):
                continue
            if t[1]:
                if i2 is not None:
                    raise AssertionError("second pivot in column 2")
                self.D(2, _pivot_matrix(F, 2, t, 2))
                if t[0]:
                    if i3 is not None:
                        self.C(i3, 3, 1)
                    if istar is not None:
                        self.C(istar, 2, 1)
                self.C(i, 2, 2)
                i2 = i
            else:
                if istar is not None:
                    raise AssertionError("second (1,0) pivot in column 2")
                self.M(i, t[0])
                self.C(i, 2, 1)
                istar = i
        self.at(2, 0)
        if i3 is not None and any(self.g(i3, 1)):
            self.E(1, 1)
        if i2 is not None and any(self.g(i2, 1)):
            self.E(2, 1)
        if istar is not None:
            self.C(istar, 2, 1)
        if i3 is not None:
            self.C(i3, 3, 1)
        if i2 is not None:
            self.C(i2, 2, 2)
        nz = [i for i in self.rows(1) if any(self.g(i, 1))]
        if not nz:
            return
        i0 = max(nz)
        self.at(1, i0)
        t = self.g(i0, 1)
        if t[0] and t[1]:
            self.M(i0, t[0])
            c = self.g(i0, 1)[1]
            self.D(2, [[F(1), F(0)], [F(0), F.inv(c)]])
            if i2 is not None:
                self.M(i2, F.inv(c))
            self.C(i0, 1, 2)
            if istar is not None:
                self.C(istar, 2, 1)
            for i in self.rows(1):
                if i >= i0:
                    continue
                t = self.g(i, 1)
                if any(t):
                    self.at(1, i)
                    if t[1]:
                        raise AssertionError("second entry should have been killed")
                    self.M(i, t[0])
                    self.C(i, 1, 1)
                    break
            return
        for i in self.rows(1):
            if i > i0:
                continue
            self.at(1, i)
            t = self.g(i, 1)
            if not any(t):
                continue
            if i == istar:
                if t[0]:
                    raise AssertionError("first entry at the special row should vanish")
                self.D(2, [[F(1), F(0)], [F(0), F.inv(t[1])]])
                if i2 is not None:
                    self.M(i2, F.inv(t[1]))
                continue
            if t[0] and t[1]:
                raise AssertionError("tuple with two non-zero entries in the loop")
            s = 1 if t[0] else 2
            self.M(i, t[s - 1])
            self.C(i, 1, s)


def _case(mu: Sequence[int]) -> str:
    if not mu:
        return "empty"
    if max(mu) <= 2:
        return "a"
    if tuple(mu) == (3, 2):
        return "c"
    if all(x == 1 for x in mu[1:]):
        return "b"
    raise MuTooLarge(f"no reduction for mu={tuple(mu)}")


def reduce(d: LabeledYoungDiagram) -> tuple[LabeledYoungDiagram, list[BaseChange]]:
    if d.l > 5:
        raise MuTooLarge(f"|mu| = {d.l} > 5")
    case = _case(d.mu)
    r = _Reducer(d)
    if case == "a":
        r.case_a()
    elif case == "b":
        r.case_b()
    elif case == "c":
        r.case_c()
    return r.d, r.moves


def reduce_with_log(d: LabeledYoungDiagram) -> dict:
    out, moves = reduce(d)
    return {"input": d.to_json(), "output": out.to_json(), "case": _case(d.mu),
            "moves": [m.to_json() for m in moves]}


# ---------------------------------------------------------------------------
# the four conditions

def check_reduced(d: LabeledYoungDiagram) -> tuple[bool, list[int]]:
    """True iff the diagram is in the reduced form; otherwise the violated clauses (1-4)."""
    F = d.field
    one, zero = F(1), F(0)
    violated: set[int] = set()
    nz = d.nonzero()
    special = tuple(d.mu) == (3, 2)
    ones11 = [b for b, t in nz.items() if d.h == 2 and t == (one, one)]
    if ones11:
        if not special or len(ones11) > 1 or ones11[0][1] != 1:
            violated.add(1)
    for b, t in nz.items():
        if b in ones11:
            continue
        s = _lastnz(t)
        if t != tuple(one if r == s else zero for r in range(1, d.h + 1)) or d.mu[s - 1] < b[1]:
            violated.add(2)
    by_row: dict[int, list[tuple[int, int]]] = {}
    for (i, j) in nz:
        by_row.setdefault(i, []).append((i, j))
    multi = [i for i, bs in by_row.items() if len(bs) > 1]
    istar = None
    if multi:
        if len(multi) > 1:
            violated.add(3)
        i = multi[0]
        bs = by_row[i]
        if len(bs) != 2 or (i, 1) not in bs:
            violated.add(1)
        else:
            istar = i
        if ones11:
            violated.add(1)
    cols: dict[int, dict[int, int]] = {}
    for (i, j), t in nz.items():
        if (i, j) in ones11 or 2 in violated:
            continue
        if j == 1 and i == istar:
            continue
        s = _lastnz(t)
        c = cols.setdefault(j, {})
        if s in c:
            violated.add(4)
        c[s] = i
    return not violated, sorted(violated)


# ---------------------------------------------------------------------------
# enumeration of reduced forms

def iter_reduced(lam, mu, field: FieldTag = QQ) -> Iterator[dict]:
    """All gamma assignments (box -> tuple) satisfying the four conditions."""
    lam = _check_partition(lam, "lambda")
    mu = _check_partition(mu, "mu")
    if sum(mu) > 5:
        raise MuTooLarge(f"|mu| = {sum(mu)} > 5")
    h = len(mu)
    one, zero = field(1), field(0)
    units = {s: tuple(one if r == s else zero for r in range(1, h + 1)) for s in range(1, h + 1)}
    special = tuple(mu) == (3, 2)

    def opts(j):
        return [s for s in range(1, h + 1) if mu[s - 1] >= j]

    # row patterns: (cells, kind) with kind in {"plain", "star", "11"}
    def row_patterns(r):
        pats = [((), "plain")]
        for j in range(1, r + 1):
            for s in opts(j):
                pats.append((((j, s),), "plain"))
        if special:
            pats.append((((1, "11"),), "11"))
        for s1 in opts(1):
            for j in range(2, r + 1):
                for s in opts(j):
                    pats.append((((1, s1), (j, s)), "star"))
        return pats

    pats = [row_patterns(r) for r in lam]

    def rec(i, used, have_star, have_11, acc):
        if i == len(lam):
            yield dict(acc)
            return
        for cells, kind in pats[i]:
            if kind == "star" and (have_star or have_11):
                continue
            if kind == "11" and (have_11 or have_star):
                continue
            new = set()
            ok = True
            for j, s in cells:
                if s == "11" or (kind == "star" and j == 1):
                    continue
                if (j, s) in used or (j, s) in new:
                    ok = False
                    break
                new.add((j, s))
            if not ok:
                continue
            for j, s in cells:
                acc[(i + 1, j)] = (one, one) if s == "11" else units[s]
            yield from rec(i + 1, used | new, have_star or kind == "star", have_11 or kind == "11", acc)
            for j, _ in cells:
                del acc[(i + 1, j)]

    yield from rec(0, frozenset(), False, False, {})


def enumerate_reduced(lam, mu, field: FieldTag = QQ, valid_only: bool = False) -> list[LabeledYoungDiagram]:
    out = []
    for gm in iter_reduced(lam, mu, field):
        d = LabeledYoungDiagram.from_gamma(lam, mu, field, gm)
        if not valid_only or d.is_valid():
            out.append(d)
    return out


def count_reduced(lam, mu, field: FieldTag = QQ, valid_only: bool = False) -> int:
    if not valid_only:
        return sum(1 for _ in iter_reduced(lam, mu, field))
    return len(enumerate_reduced(lam, mu, field, valid_only=True))


def reduced_key(d: LabeledYoungDiagram):
    return (d.lam, d.mu, tuple(sorted(d.nonzero().items())))


# ---------------------------------------------------------------------------
# extension checks

def _require_reduced(d: LabeledYoungDiagram):
    ok, bad = check_reduced(d)
    if not ok:
        raise NotReducedBase(f"base diagram violates clauses {bad}")


def _part_ends(lam: Sequence[int]) -> list[int]:
    return [i for i in range(1, len(lam) + 1) if i == len(lam) or lam[i] < lam[i - 1]]


def extend_check(kind: str, data: dict) -> dict:
    """Normalize the auxiliary datum attached to a reduced pair.

    kinds and data:
      right_functional: {"diagram", "phi"}  phi ∈ V* as values on the boxes, with f(V) ⊂ ker φ
      left_vector:      {"diagram", "eta"}  u' = Σ η_m u_{m,1} ∈ U ∩ ker f
      left_functional:  {"diagram", "values"}  (φ(u_m))_m for φ ∈ U* with f-stable kernel
      flag:             {"diagram", "flag": [U'' basis, U' basis]} in chain coordinates of U
    """
    d = data["diagram"]
    if isinstance(d, dict):
        d = LabeledYoungDiagram.from_json(d)
    if kind != "right_functional":
        _require_reduced(d)
    F = d.field
    if kind == "right_functional":
        return _right_functional(d, data.get("phi"))
    if kind == "left_vector":
        return _left_datum(d, [F(x) for x in data.get("eta", [0] * d.h)], "vector")
    if kind == "left_functional":
        return _left_datum(d, [F(x) for x in data.get("values", [0] * d.h)], "functional")
    if kind == "flag":
        return _flag(d, data.get("flag"))
    raise ValueError(f"unknown extension kind {kind!r}")


def _right_functional(d: LabeledYoungDiagram, phi) -> dict:
    cands = _part_ends(d.lam)
    report = {"kind": "right_functional", "candidates": cands, "classes": len(cands), "zero_class": True}
    if phi is None:
        report["normalized"] = None
        return report
    F = d.field
    idx = _index(d.lam)
    vals = [F(x) for x in phi]
    if len(vals) != d.k:
        raise ValueError("phi must have one value per box")
    for (i, j), n in idx.items():
        if j < d.lam[i - 1] and vals[n]:
            raise ValueError("phi must vanish on f(V) for its kernel to be f-stable")
    live = [i for i in range(1, d.g + 1) if vals[idx[(i, d.lam[i - 1])]]]
    if not live:
        report["normalized"] = None
        return report
    longest = max(d.lam[i - 1] for i in live)
    report["normalized"] = {"i_bullet": max(i for i in range(1, d.g + 1) if d.lam[i - 1] == longest)}
    return report


def _left_datum(d: LabeledYoungDiagram, eta: list, what: str) -> dict:
    mu = d.mu
    if len(eta) != d.h:
        raise ValueError("one coefficient per chain")
    report = {"kind": "left_" + what, "mu": list(mu)}
    if not any(eta):
        report.update(case="zero", epsilon=[0] * d.h)
        return report
    if max(mu) <= 2:
        # rescale u_m by η_m; the diagram is restored with row scalings M_i
        report.update(case="a", epsilon=[1 if e else 0 for e in eta])
        return report
    top = [m for m in range(d.h) if mu[m] == mu[0]]
    if all(not eta[m] for m in range(d.h) if m not in top):
        report.update(case="b_top", epsilon=[1 if (m in top and eta[m]) else 0 for m in range(d.h)])
        return report
    if tuple(mu) == (3, 1):
        report.update(case="b_generic", epsilon=[0, 1], note="rebased with the datum as the second chain")
        return report
    report.update(case="b_other", epsilon=[1 if e else 0 for e in eta])
    return report


def _flag(d: LabeledYoungDiagram, flag) -> dict:
    mu = tuple(d.mu)
    if sum(mu) != 3:
        raise ValueError("flag extension needs dim U = 3")
    if mu == (3,):
        return {"kind": "flag", "case": "mu=(3)", "forced": True}
    if mu == (2, 1):
        sub = None
        if flag is not None:
            F = d.field
            # chain coordinates (u_{1,1}, u_{1,2}, u_{2,1}); ker f|U = <u_{1,1}, u_{2,1}>
            Up = Subspace(F, 3, [[F(x) for x in v] for v in flag[1]])
            ker = Subspace(F, 3, [[1, 0, 0], [0, 0, 1]])
            sub = "U'=ker f" if Up == ker else "U'!=ker f"
        return {"kind": "flag", "case": "mu=(2,1)", "subcase": sub}
    return {"kind": "flag", "case": "mu=(1,1,1)", "method": "triangular base change on U, then column 1 as in case a"}


# ---------------------------------------------------------------------------
# random inputs

def random_diagram(lam, mu, field: FieldTag, rng: random.Random) -> LabeledYoungDiagram:
    """Random u_m ∈ ker f^{μ_m} with independent chains."""
    lam = _check_partition(lam, "lambda")
    mu = _check_partition(mu, "mu")
    idx = _index(lam)
    q = field.characteristic

    def rnd():
        return field(rng.randrange(q)) if q else field(rng.randint(-9, 9))

    for _ in range(1000):
        tops = []
        for m in mu:
            tops.append(tuple(rnd() if j <= m else field(0) for (i, j) in idx))
        d = LabeledYoungDiagram(lam, mu, field, tuple(tops))
        if d.is_valid():
            return d
    raise InvalidDiagram(f"mu={mu} does not fit in lambda={lam}")


def random_pair(k: int, field: FieldTag, rng: random.Random, max_l: int = 5) -> tuple[Subspace, ExactMatrix]:
    """A random nilpotent f on K^k (hidden Jordan basis) and a random f-stable U, dim U <= max_l."""
    q = field.characteristic

    def rnd():
        return field(rng.randrange(q)) if q else field(rng.randint(-3, 3))

    lam = _random_partition(k, rng)
    J = jordan_matrix(field, lam)
    while True:
        g = ExactMatrix.from_rows(field, [[rnd() for _ in range(k)] for _ in range(k)], k)
        if g.is_invertible():
            break
    f = g @ J @ g.inverse()
    U = Subspace(field, k)
    target = rng.randint(0, max_l)
    for _ in range(4 * k):
        if U.dim >= target:
            break
        c = rng.randint(1, max(lam))
        ker = kernel(f ** c)
        coeffs = [rnd() for _ in ker.basis]
        v = [field(sum(a * b for a, b in zip(coeffs, col))) for col in zip(*ker.basis)]
        chain = [v]
        for _ in range(c - 1):
            chain.append(list(f.apply(chain[-1])))
        W = U + Subspace(field, k, chain)
        if W.dim <= max_l:
            U = W
    return U, f


def _random_partition(n: int, rng: random.Random) -> tuple[int, ...]:
    parts = []
    while n:
        x = rng.randint(1, n)
        parts.append(x)
        n -= x
    return tuple(sorted(parts, reverse=True))


def pair_rep(U: Subspace, f: ExactMatrix):
    """The pair as a point of the nilpotent cone of the parabolic with blocks (dim U, k - dim U)."""
    F = f.field
    k = f.rows
    cols = [list(v) for v in U.basis] + [[F(1) if r == c else F(0) for r in range(k)] for c in U.complement_units()]
    B = ExactMatrix.from_columns(F, cols, k)
    bv = (U.dim, k - U.dim) if 0 < U.dim < k else (k,)
    return bv, B.inverse() @ f @ B


__all__ = [
    "LabeledYoungDiagram", "BaseChange", "diagram_from_pair", "apply_move", "replay", "reduce",
    "reduce_with_log", "check_reduced", "iter_reduced", "enumerate_reduced", "count_reduced",
    "extend_check", "stab_violations", "commutes_with_jordan", "move_M", "move_C", "move_B",
    "move_D", "move_E", "random_diagram", "random_pair", "pair_rep", "boxes", "reduced_key",
    "YoungError", "NotStable", "InvalidDiagram", "InadmissibleBaseChange", "MovePreconditionViolated",
    "MoveEffectMismatch", "MuTooLarge", "NotReducedBase",
]
