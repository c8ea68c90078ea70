"""Exact linear algebra over the rationals and prime fields GF(q).

Dense matrices are immutable and backed by python-flint (``fmpq_mat`` over Q,
``nmod_mat`` over GF(q)).  Scalars are ``fractions.Fraction`` over Q and plain
ints in ``[0, q)`` over GF(q).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import flint


class ExactAlgebraError(Exception):
    pass


class SizeMismatch(ExactAlgebraError, ValueError):
    pass


class NotNilpotent(ExactAlgebraError, ValueError):
    pass


class DimensionTooLarge(ExactAlgebraError):
    """Symbolic expansion exceeded its term budget."""


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    d = 2
    while d * d <= q:
        if q % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class FieldTag:
    """Q when ``characteristic == 0``, else the prime field GF(characteristic)."""

    characteristic: int = 0

    def __post_init__(self):
        if self.characteristic != 0 and not _is_prime(self.characteristic):
            raise ValueError(f"GF({self.characteristic}) is not a prime field")

    @property
    def kind(self) -> str:
        return "rational" if self.characteristic == 0 else "prime-field"

    @property
    def is_finite(self) -> bool:
        return self.characteristic != 0

    @property
    def order(self) -> int:
        if not self.is_finite:
            raise ValueError("Q is infinite")
        return self.characteristic

    def __call__(self, x):
        q = self.characteristic
        if q:
            if isinstance(x, Fraction):
                return (x.numerator * pow(x.denominator, -1, q)) % q
            return int(x) % q
        if isinstance(x, Fraction):
            return x
        if isinstance(x, str):
            return Fraction(x)
        if isinstance(x, flint.fmpq):
            return Fraction(int(x.p), int(x.q))
        return Fraction(int(x))

    def zero(self):
        return self(0)

    def one(self):
        return self(1)

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.characteristic:
            return pow(int(x), -1, self.characteristic)
        return 1 / Fraction(x)

    def elements(self) -> list:
        return list(range(self.order))

    def primitive_root(self) -> int:
        q = self.order
        if q == 2:
            return 1
        factors = [d for d in range(2, q) if (q - 1) % d == 0 and _is_prime(d)]
        for g in range(2, q):
            if all(pow(g, (q - 1) // d, q) != 1 for d in factors):
                return g
        raise AssertionError("no primitive root")

    def __str__(self):
        return "Q" if self.characteristic == 0 else f"GF({self.characteristic})"

    __repr__ = __str__

    @classmethod
    def parse(cls, s: str) -> "FieldTag":
        s = s.strip()
        if s in ("Q", "QQ"):
            return QQ
        if s.startswith("GF(") and s.endswith(")"):
            return GF(int(s[3:-1]))
        raise ValueError(f"unknown field {s!r}")

    def scalar_to_json(self, x):
        if self.characteristic:
            return int(x)
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    def scalar_from_json(self, v):
        return self(Fraction(v) if isinstance(v, str) else v)


QQ = FieldTag(0)


@lru_cache(maxsize=None)
def GF(q: int) -> FieldTag:
    return FieldTag(q)


def _to_fmpq(x: Fraction):
    return flint.fmpq(x.numerator, x.denominator)


class ExactMatrix:
    """Immutable dense matrix over a FieldTag."""

    __slots__ = ("field", "rows", "cols", "_e", "_fl", "_hash")

    def __init__(self, field: FieldTag, rows: int, cols: int, entries: Iterable, _normalized=False):
        self.field = field
        self.rows = rows
        self.cols = cols
        e = tuple(entries) if _normalized else tuple(field(x) for x in entries)
        if len(e) != rows * cols:
            raise SizeMismatch(f"{len(e)} entries for a {rows}x{cols} matrix")
        self._e = e
        self._fl = None
        self._hash = None

    # construction
    @classmethod
    def from_rows(cls, field: FieldTag, rows: Sequence[Sequence], cols: int | None = None) -> "ExactMatrix":
        rows = [list(r) for r in rows]
        c = cols if cols is not None else (len(rows[0]) if rows else 0)
        if any(len(r) != c for r in rows):
            raise SizeMismatch("ragged rows")
        return cls(field, len(rows), c, [x for r in rows for x in r])

    @classmethod
    def from_columns(cls, field: FieldTag, columns: Sequence[Sequence], rows: int | None = None) -> "ExactMatrix":
        r = rows if rows is not None else (len(columns[0]) if columns else 0)
        return cls.from_rows(field, [[c[i] for c in columns] for i in range(r)], len(columns))

    @classmethod
    def zero(cls, field: FieldTag, rows: int, cols: int | None = None) -> "ExactMatrix":
        cols = rows if cols is None else cols
        z = field(0)
        return cls(field, rows, cols, [z] * (rows * cols), _normalized=True)

    @classmethod
    def identity(cls, field: FieldTag, n: int) -> "ExactMatrix":
        z, o = field(0), field(1)
        return cls(field, n, n, [o if i == j else z for i in range(n) for j in range(n)], _normalized=True)

    @classmethod
    def unit(cls, field: FieldTag, rows: int, cols: int, i: int, j: int) -> "ExactMatrix":
        """Matrix unit E_ij (0-based indices)."""
        e = [field(0)] * (rows * cols)
        e[i * cols + j] = field(1)
        return cls(field, rows, cols, e, _normalized=True)

    @classmethod
    def _from_flint(cls, field: FieldTag, m) -> "ExactMatrix":
        r, c = m.nrows(), m.ncols()
        if field.characteristic:
            ent = [int(x) for x in m.entries()]
        else:
            ent = [Fraction(int(x.p), int(x.q)) for x in m.entries()]
        out = cls(field, r, c, ent, _normalized=True)
        out._fl = m
        return out

    def _flint(self):
        if self._fl is None:
            q = self.field.characteristic
            if q:
                self._fl = flint.nmod_mat(self.rows, self.cols, list(self._e), q)
            else:
                self._fl = flint.fmpq_mat(self.rows, self.cols, [_to_fmpq(x) for x in self._e])
        return self._fl

    # access
    def __getitem__(self, ij):
        i, j = ij
        return self._e[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self._e[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple:
        return self._e[j::self.cols] if self.cols else ()

    def to_rows(self) -> list[list]:
        return [list(self.row(i)) for i in range(self.rows)]

    def entries(self) -> tuple:
        return self._e

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return not any(self._e)

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return (self.field == other.field and self.rows == other.rows
                and self.cols == other.cols and self._e == other._e)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, self.rows, self.cols, self._e))
        return self._hash

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in self.row(i)) for i in range(self.rows))
        return f"ExactMatrix[{self.field}]({self.rows}x{self.cols}: {body})"

    # arithmetic
    def _check_same(self, other: "ExactMatrix"):
        if self.field != other.field:
            raise SizeMismatch(f"field mismatch {self.field} vs {other.field}")
        if self.shape != other.shape:
            raise SizeMismatch(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_same(other)
        f = self.field
        return ExactMatrix(f, self.rows, self.cols, (f(a + b) for a, b in zip(self._e, other._e)), _normalized=True)

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_same(other)
        f = self.field
        return ExactMatrix(f, self.rows, self.cols, (f(a - b) for a, b in zip(self._e, other._e)), _normalized=True)

    def __neg__(self) -> "ExactMatrix":
        f = self.field
        return ExactMatrix(f, self.rows, self.cols, (f(-a) for a in self._e), _normalized=True)

    def scale(self, c) -> "ExactMatrix":
        f = self.field
        c = f(c)
        return ExactMatrix(f, self.rows, self.cols, (f(c * a) for a in self._e), _normalized=True)

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.field != other.field:
            raise SizeMismatch("field mismatch")
        if self.cols != other.rows:
            raise SizeMismatch(f"cannot multiply {self.shape} by {other.shape}")
        if self.rows == 0 or other.cols == 0 or self.cols == 0:
            return ExactMatrix.zero(self.field, self.rows, other.cols)
        return ExactMatrix._from_flint(self.field, self._flint() * other._flint())

    def __mul__(self, other):
        if isinstance(other, ExactMatrix):
            return self @ other
        return self.scale(other)

    __rmul__ = scale

    def __pow__(self, k: int) -> "ExactMatrix":
        if not self.is_square():
            raise SizeMismatch("power of a non-square matrix")
        result = ExactMatrix.identity(self.field, self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def apply(self, v: Sequence) -> tuple:
        """Matrix times column vector given as a sequence."""
        f = self.field
        if len(v) != self.cols:
            raise SizeMismatch("vector length")
        return tuple(f(sum(a * b for a, b in zip(self.row(i), v))) for i in range(self.rows))

    @property
    def T(self) -> "ExactMatrix":
        return ExactMatrix(self.field, self.cols, self.rows,
                           (self._e[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)),
                           _normalized=True)

    def transpose(self) -> "ExactMatrix":
        return self.T

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "ExactMatrix":
        return ExactMatrix(self.field, len(rows), len(cols),
                           (self._e[i * self.cols + j] for i in rows for j in cols), _normalized=True)

    def leading(self, d: int) -> "ExactMatrix":
        return self.submatrix(range(d), range(d))

    def trace(self):
        return self.field(sum(self[i, i] for i in range(min(self.rows, self.cols))))

    # elimination
    def rank(self) -> int:
        if self.rows == 0 or self.cols == 0:
            return 0
        return self._flint().rank()

    def det(self):
        if not self.is_square():
            raise SizeMismatch("det of a non-square matrix")
        if self.rows == 0:
            return self.field(1)
        return self.field(self._flint().det())

    def is_invertible(self) -> bool:
        return self.is_square() and self.rank() == self.rows

    def inverse(self) -> "ExactMatrix":
        if not self.is_invertible():
            raise ZeroDivisionError("matrix is singular")
        if self.rows == 0:
            return self
        return ExactMatrix._from_flint(self.field, self._flint().inv())

    def solve_right(self, b: "ExactMatrix") -> "ExactMatrix | None":
        """Some X with self @ X == b, or None when inconsistent."""
        aug = hstack([self, b])
        r, rank = rref(aug)
        pivots = _pivots(r)
        if any(p >= self.cols for p in pivots):
            return None
        f = self.field
        x = [[f(0)] * b.cols for _ in range(self.cols)]
        for i, p in enumerate(pivots):
            for c in range(b.cols):
                x[p][c] = r[i, self.cols + c]
        return ExactMatrix.from_rows(f, x, b.cols)

    # serialization
    def to_json(self) -> dict:
        f = self.field
        return {"field": str(f), "rows": self.rows, "cols": self.cols,
                "entries": [[f.scalar_to_json(x) for x in self.row(i)] for i in range(self.rows)]}

    @classmethod
    def from_json(cls, obj: dict) -> "ExactMatrix":
        f = FieldTag.parse(obj["field"])
        r, c = int(obj["rows"]), int(obj["cols"])
        ent = [f.scalar_from_json(x) for row in obj["entries"] for x in row]
        return cls(f, r, c, ent)


def hstack(ms: Sequence[ExactMatrix]) -> ExactMatrix:
    ms = list(ms)
    f = ms[0].field
    r = ms[0].rows
    if any(m.rows != r for m in ms):
        raise SizeMismatch("hstack row mismatch")
    return ExactMatrix(f, r, sum(m.cols for m in ms),
                       (x for i in range(r) for m in ms for x in m.row(i)), _normalized=True)


def vstack(ms: Sequence[ExactMatrix]) -> ExactMatrix:
    ms = list(ms)
    f = ms[0].field
    c = ms[0].cols
    if any(m.cols != c for m in ms):
        raise SizeMismatch("vstack column mismatch")
    return ExactMatrix(f, sum(m.rows for m in ms), c, (x for m in ms for x in m.entries()), _normalized=True)


def block_diag(ms: Sequence[ExactMatrix], field: FieldTag | None = None) -> ExactMatrix:
    ms = list(ms)
    f = field if field is not None else ms[0].field
    R = sum(m.rows for m in ms)
    C = sum(m.cols for m in ms)
    out = [[f(0)] * C for _ in range(R)]
    r0 = c0 = 0
    for m in ms:
        for i in range(m.rows):
            for j in range(m.cols):
                out[r0 + i][c0 + j] = m[i, j]
        r0 += m.rows
        c0 += m.cols
    return ExactMatrix.from_rows(f, out, C)


def block_matrix(blocks: Sequence[Sequence[ExactMatrix]]) -> ExactMatrix:
    return vstack([hstack(row) for row in blocks])


def jordan_block(field: FieldTag, k: int) -> ExactMatrix:
    """Nilpotent Jordan block with ones on the superdiagonal."""
    return ExactMatrix.from_rows(field, [[1 if j == i + 1 else 0 for j in range(k)] for i in range(k)], k)


def jordan_matrix(field: FieldTag, partition: Sequence[int]) -> ExactMatrix:
    if not partition:
        return ExactMatrix.zero(field, 0)
    return block_diag([jordan_block(field, k) for k in partition], field)


def _pivots(r: ExactMatrix) -> list[int]:
    piv = []
    for i in range(r.rows):
        row = r.row(i)
        for j, x in enumerate(row):
            if x:
                piv.append(j)
                break
    return piv


def rref(m: ExactMatrix) -> tuple[ExactMatrix, int]:
    """Reduced row echelon form and rank."""
    if m.rows == 0 or m.cols == 0:
        return m, 0
    r, rank = m._flint().rref()
    return ExactMatrix._from_flint(m.field, r), int(rank)


class Subspace:
    """Subspace of K^n stored as the nonzero rows of its reduced echelon form."""

    __slots__ = ("field", "ambient_dim", "basis")

    def __init__(self, field: FieldTag, ambient_dim: int, vectors: Iterable[Sequence] = ()):
        self.field = field
        self.ambient_dim = ambient_dim
        vecs = [list(v) for v in vectors]
        if vecs:
            r, rank = rref(ExactMatrix.from_rows(field, vecs, ambient_dim))
            self.basis = tuple(r.row(i) for i in range(rank))
        else:
            self.basis = ()

    @classmethod
    def full(cls, field: FieldTag, n: int) -> "Subspace":
        return cls(field, n, ExactMatrix.identity(field, n).to_rows())

    @property
    def dim(self) -> int:
        return len(self.basis)

    def matrix(self) -> ExactMatrix:
        """Basis vectors as rows."""
        return ExactMatrix.from_rows(self.field, self.basis, self.ambient_dim) if self.basis \
            else ExactMatrix.zero(self.field, 0, self.ambient_dim)

    def columns(self) -> ExactMatrix:
        return self.matrix().T

    def contains(self, v: Sequence) -> bool:
        if not any(self.field(x) for x in v):
            return True
        return Subspace(self.field, self.ambient_dim, list(self.basis) + [list(v)]).dim == self.dim

    def __contains__(self, v):
        return self.contains(v)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace(self.field, self.ambient_dim, list(self.basis) + list(other.basis))

    def intersect(self, other: "Subspace") -> "Subspace":
        if self.dim == 0 or other.dim == 0:
            return Subspace(self.field, self.ambient_dim)
        # x A = y B  <=>  [x, -y] [A; B] = 0
        stacked = vstack([self.matrix(), -other.matrix()])
        k = kernel(stacked.T)
        vecs = [ExactMatrix.from_rows(self.field, [v[:self.dim]], self.dim) @ self.matrix() for v in k.basis]
        return Subspace(self.field, self.ambient_dim, [v.row(0) for v in vecs])

    def is_subspace_of(self, other: "Subspace") -> bool:
        return (self + other).dim == other.dim

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.field == other.field
                and self.ambient_dim == other.ambient_dim and self.basis == other.basis)

    def __hash__(self):
        return hash((self.field, self.ambient_dim, self.basis))

    def __repr__(self):
        return f"Subspace[{self.field}](dim {self.dim} in {self.ambient_dim})"

    def complement_units(self) -> list[int]:
        """Indices of unit vectors completing this subspace to the whole space (non-pivot columns)."""
        piv = {next(j for j, x in enumerate(v) if x) for v in self.basis}
        return [j for j in range(self.ambient_dim) if j not in piv]


def kernel(m: ExactMatrix) -> Subspace:
    """Right kernel {v : m v = 0}."""
    f = m.field
    if m.rows == 0:
        return Subspace.full(f, m.cols)
    r, rank = rref(m)
    piv = _pivots(r)[:rank]
    free = [j for j in range(m.cols) if j not in set(piv)]
    vecs = []
    for j in free:
        v = [f(0)] * m.cols
        v[j] = f(1)
        for i, p in enumerate(piv):
            v[p] = f(-r[i, j])
        vecs.append(v)
    return Subspace(f, m.cols, vecs)


def column_space(m: ExactMatrix) -> Subspace:
    return Subspace(m.field, m.rows, m.T.to_rows())


def nilpotent_jordan_basis(m: ExactMatrix) -> tuple[ExactMatrix, list[int]]:
    """Jordan basis of a nilpotent matrix.

    Columns of the returned basis are v_{1,1}, ..., v_{1,λ_1}, v_{2,1}, ... with
    m v_{i,j} = v_{i,j-1} and m v_{i,1} = 0, so that basis⁻¹ m basis is the
    block-diagonal matrix of upper Jordan blocks of sizes λ (non-increasing).
    """
    if not m.is_square():
        raise SizeMismatch("Jordan basis of a non-square matrix")
    n = m.rows
    f = m.field
    if n == 0:
        return ExactMatrix.zero(f, 0), []
    if not (m ** n).is_zero():
        raise NotNilpotent("matrix is not nilpotent")
    kers = [Subspace(f, n)]
    power = ExactMatrix.identity(f, n)
    while kers[-1].dim < n:
        power = power @ m
        kers.append(kernel(power))
    height = len(kers) - 1
    tops: list[tuple[int, tuple]] = []
    for s in range(height, 0, -1):
        # level-s vectors already supplied by longer chains
        span = [list(v) for v in kers[s - 1].basis]
        for h, t in tops:
            span.append(list(_apply_power(m, t, h - s)))
        current = Subspace(f, n, span)
        for v in kers[s].basis:
            if not current.contains(v):
                tops.append((s, tuple(v)))
                current = Subspace(f, n, list(current.basis) + [list(v)])
    cols = []
    partition = []
    for h, t in tops:
        chain = [t]
        for _ in range(h - 1):
            chain.append(m.apply(chain[-1]))
        cols.extend(reversed(chain))
        partition.append(h)
    return ExactMatrix.from_columns(f, cols, n), partition


def _apply_power(m: ExactMatrix, v: Sequence, k: int) -> tuple:
    v = tuple(v)
    for _ in range(k):
        v = m.apply(v)
    return v


def jordan_type(m: ExactMatrix) -> list[int]:
    """Jordan type of a nilpotent matrix from the rank sequence alone."""
    n = m.rows
    if n == 0:
        return []
    ranks = [n]
    p = ExactMatrix.identity(m.field, n)
    while ranks[-1] > 0:
        p = p @ m
        r = p.rank()
        if r == ranks[-1]:
            raise NotNilpotent("matrix is not nilpotent")
        ranks.append(r)
    # number of blocks of size >= s is rank(m^{s-1}) - rank(m^s)
    ge = [ranks[s - 1] - ranks[s] for s in range(1, len(ranks))]
    return conjugate_partition(ge)


def conjugate_partition(p: Sequence[int]) -> list[int]:
    p = [x for x in p if x > 0]
    if not p:
        return []
    return [sum(1 for x in p if x >= i) for i in range(1, max(p) + 1)]


def _mpoly_context(field: FieldTag, nvars: int):
    if field.characteristic:
        return flint.nmod_mpoly_ctx.get(("x", nvars), modulus=field.characteristic)
    return flint.fmpq_mpoly_ctx.get(("x", nvars), "lex")


def generic_charpoly(matrices: Sequence[ExactMatrix], budget: int = 200_000) -> list:
    """Characteristic polynomial coefficients of Σ x_k M_k with indeterminate x_k.

    Uses the division-free Berkowitz recursion.  Returns polynomials
    [c_0 = 1, c_1, ..., c_n] with det(t·I − X) = Σ c_i t^{n−i}.  Raises
    DimensionTooLarge when any intermediate polynomial exceeds ``budget`` terms.
    """
    ms = list(matrices)
    if not ms:
        raise ValueError("need at least one matrix")
    f = ms[0].field
    n = ms[0].rows
    d = len(ms)
    ctx = _mpoly_context(f, d)
    gens = ctx.gens()
    zero = ctx.from_dict({})
    one = ctx.from_dict({(0,) * d: 1})

    def coef(x):
        if f.characteristic:
            return int(x)
        return flint.fmpq(x.numerator, x.denominator)

    A = [[zero for _ in range(n)] for _ in range(n)]
    for k, mk in enumerate(ms):
        for i in range(n):
            for j in range(n):
                c = mk[i, j]
                if c:
                    A[i][j] = A[i][j] + gens[k] * coef(c)

    def guard(p):
        if len(p) > budget:
            raise DimensionTooLarge(f"intermediate polynomial with {len(p)} terms exceeds budget {budget}")
        return p

    poly = [one]  # char poly of the leading 0x0 block
    for k in range(1, n + 1):
        a = A[k - 1][k - 1]
        R = A[k - 1][:k - 1]
        C = [A[i][k - 1] for i in range(k - 1)]
        vec = [one, -a]
        w = C
        for _ in range(k - 1):
            s = zero
            for r, c in zip(R, w):
                if not r.is_zero() and not c.is_zero():
                    s = s + r * c
            vec.append(guard(-s))
            w = [guard(sum((A[i][j] * w[j] for j in range(k - 1) if not A[i][j].is_zero() and not w[j].is_zero()), zero))
                 for i in range(k - 1)]
        new = []
        for i in range(k + 1):
            s = zero
            for j in range(min(i, k - 1) + 1):
                if not vec[i - j].is_zero() and not poly[j].is_zero():
                    s = s + vec[i - j] * poly[j]
            new.append(guard(s))
        poly = new
    return poly


def is_nilpotent_subspace(basis: "Subspace | Sequence[ExactMatrix]", n: int | None = None,
                          budget: int = 200_000) -> bool:
    """True iff every element of span(basis) is nilpotent (over any field extension).

    ``basis`` is either a list of n×n matrices or a Subspace of K^{n²} (then pass n).
    Decided symbolically: the generic element's characteristic polynomial must be
    t^n identically.
    """
    if isinstance(basis, Subspace):
        if n is None:
            n = int(round(basis.ambient_dim ** 0.5))
        ms = subspace_matrices(basis, n, n)
    else:
        ms = list(basis)
    if not ms:
        return True
    nn = ms[0].rows if n is None else n
    if any(m.shape != (nn, nn) for m in ms):
        raise SizeMismatch("subspace elements must be n x n")
    coeffs = generic_charpoly(ms, budget=budget)
    return all(c.is_zero() for c in coeffs[1:])


def matrix_space_subspace(ms: Sequence[ExactMatrix]) -> Subspace:
    """Flatten n×n matrices into K^{n²} and take their span."""
    if not ms:
        raise ValueError("empty list")
    f = ms[0].field
    return Subspace(f, ms[0].rows * ms[0].cols, [m.entries() for m in ms])


def subspace_matrices(s: Subspace, rows: int, cols: int) -> list[ExactMatrix]:
    return [ExactMatrix(s.field, rows, cols, v, _normalized=True) for v in s.basis]
