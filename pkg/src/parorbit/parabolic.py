"""Standard (upper-block) parabolic subalgebras of gl_n and their block vectors."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import accumulate
from typing import Iterable

from .exact import ExactMatrix, SizeMismatch


@dataclass(frozen=True)
class BlockVector:
    blocks: tuple[int, ...]

    def __init__(self, blocks: Iterable[int]):
        b = tuple(int(x) for x in blocks)
        if not b or any(x < 1 for x in b):
            raise ValueError(f"invalid block vector {b}")
        object.__setattr__(self, "blocks", b)

    @classmethod
    def parse(cls, s: str) -> "BlockVector":
        return cls(int(x) for x in s.replace(" ", "").strip("()").split(",") if x)

    @property
    def p(self) -> int:
        return len(self.blocks)

    @property
    def n(self) -> int:
        return sum(self.blocks)

    def reversed(self) -> "BlockVector":
        return BlockVector(self.blocks[::-1])

    def __iter__(self):
        return iter(self.blocks)

    def __len__(self):
        return len(self.blocks)

    def __getitem__(self, i):
        return self.blocks[i]

    def __str__(self):
        return "(" + ",".join(map(str, self.blocks)) + ")"

    def __repr__(self):
        return f"BlockVector{self}"


def as_bv(bv) -> BlockVector:
    if isinstance(bv, BlockVector):
        return bv
    if isinstance(bv, str):
        return BlockVector.parse(bv)
    return BlockVector(bv)


@dataclass(frozen=True)
class ParabolicShape:
    bv: BlockVector
    n: int
    dims: tuple[int, ...]

    def block_of(self, i: int) -> int:
        """0-based block index of 0-based coordinate i."""
        for b, d in enumerate(self.dims):
            if i < d:
                return b
        raise IndexError(i)

    def block_range(self, b: int) -> range:
        start = self.dims[b - 1] if b else 0
        return range(start, self.dims[b])

    def labels(self) -> list[int]:
        return [self.block_of(i) for i in range(self.n)]

    def dim_p(self) -> int:
        bs = self.bv.blocks
        return sum(bs[i] * bs[j] for i in range(len(bs)) for j in range(i, len(bs)))

    def dim_nilradical(self) -> int:
        bs = self.bv.blocks
        return sum(bs[i] * bs[j] for i in range(len(bs)) for j in range(i + 1, len(bs)))

    def positions(self, which: str = "parabolic") -> list[tuple[int, int]]:
        """Coordinates (i, j) allowed to be nonzero in the given subalgebra."""
        lab = self.labels()
        out = []
        for i in range(self.n):
            for j in range(self.n):
                if _allowed(lab[i], lab[j], which):
                    out.append((i, j))
        return out


def _allowed(bi: int, bj: int, which: str) -> bool:
    if which == "parabolic":
        return bi <= bj
    if which == "nilradical":
        return bi < bj
    if which == "levi":
        return bi == bj
    raise ValueError(f"unknown subalgebra {which!r}")


def dims_of(bv) -> ParabolicShape:
    bv = as_bv(bv)
    dims = tuple(accumulate(bv.blocks))
    return ParabolicShape(bv, dims[-1], dims)


def shape_of(bv) -> ParabolicShape:
    return bv if isinstance(bv, ParabolicShape) else dims_of(bv)


def _check_size(shape: ParabolicShape, m: ExactMatrix):
    if m.shape != (shape.n, shape.n):
        raise SizeMismatch(f"expected {shape.n}x{shape.n}, got {m.rows}x{m.cols}")


def contains(shape, m: ExactMatrix, which: str = "parabolic") -> bool:
    shape = shape_of(shape)
    _check_size(shape, m)
    lab = shape.labels()
    for i in range(shape.n):
        row = m.row(i)
        for j in range(shape.n):
            if row[j] and not _allowed(lab[i], lab[j], which):
                return False
    return True


def in_nilpotent_cone(shape, m: ExactMatrix, x: int | None = None) -> bool:
    shape = shape_of(shape)
    x = shape.n if x is None else x
    return contains(shape, m, "parabolic") and (m ** x).is_zero()


def _antidiagonal(field, n: int) -> ExactMatrix:
    return ExactMatrix.from_rows(field, [[1 if i + j == n - 1 else 0 for j in range(n)] for i in range(n)], n)


def transpose_shape(bv) -> BlockVector:
    return as_bv(bv).reversed()


def transpose_element(shape, m: ExactMatrix) -> ExactMatrix:
    """The anti-involution m ↦ w mᵀ w with w the antidiagonal permutation."""
    shape = shape_of(shape)
    _check_size(shape, m)
    n = shape.n
    return ExactMatrix(m.field, n, n, (m[n - 1 - j, n - 1 - i] for i in range(n) for j in range(n)),
                       _normalized=True)


def leq_c(a, b) -> bool:
    """a ≤_c b: an increasing embedding i_1 < ... < i_p with a_j ≤ b_{i_j}.

    Greedy: matching each a_j to the earliest admissible remaining position is
    optimal, since any embedding can be shifted left onto the greedy one.
    """
    a, b = as_bv(a).blocks, as_bv(b).blocks
    pos = 0
    for x in a:
        while pos < len(b) and b[pos] < x:
            pos += 1
        if pos == len(b):
            return False
        pos += 1
    return True


def leq_c_embedding(a, b) -> list[int] | None:
    """The greedy embedding (0-based indices into b) witnessing a ≤_c b."""
    a, b = as_bv(a).blocks, as_bv(b).blocks
    out = []
    pos = 0
    for x in a:
        while pos < len(b) and b[pos] < x:
            pos += 1
        if pos == len(b):
            return None
        out.append(pos)
        pos += 1
    return out


def compositions(n: int) -> list[BlockVector]:
    """All block vectors of total size n, in lexicographic order."""
    out: list[tuple[int, ...]] = []

    def rec(rest: int, prefix: tuple[int, ...]):
        if rest == 0:
            out.append(prefix)
            return
        for first in range(1, rest + 1):
            rec(rest - first, prefix + (first,))

    rec(n, ())
    return [BlockVector(c) for c in out]


def coarsenings(bv) -> list[BlockVector]:
    """All block vectors obtained by merging adjacent blocks (bv itself included)."""
    b = as_bv(bv).blocks
    out = []
    p = len(b)
    for mask in range(1 << (p - 1)):
        cur = [b[0]]
        for i in range(1, p):
            if mask >> (i - 1) & 1:
                cur[-1] += b[i]
            else:
                cur.append(b[i])
        out.append(BlockVector(cur))
    return out


def merge_pattern(fine, coarse) -> list[int] | None:
    """Cut points showing ``coarse`` arises from ``fine`` by merging adjacent blocks."""
    f, c = as_bv(fine).blocks, as_bv(coarse).blocks
    if sum(f) != sum(c):
        return None
    fd = set(accumulate(f))
    cd = list(accumulate(c))
    if not set(cd) <= fd:
        return None
    return cd


def refinements(bv) -> Iterable[BlockVector]:
    """All block vectors that merge down to bv."""
    parts = [compositions(x) for x in as_bv(bv).blocks]

    def rec(i, prefix):
        if i == len(parts):
            yield BlockVector(prefix)
            return
        for c in parts[i]:
            yield from rec(i + 1, prefix + c.blocks)

    return rec(0, ())


def standard_basis(shape, field, which: str = "parabolic") -> list[ExactMatrix]:
    shape = shape_of(shape)
    n = shape.n
    return [ExactMatrix.unit(field, n, n, i, j) for i, j in shape.positions(which)]
