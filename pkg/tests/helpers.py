"""Shared test helpers (independent oracles live here, not in the package)."""

import json
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"


def load_table():
    return json.loads((FIXTURES / "classifier_table.json").read_text())


def _match_pattern(pattern, bv):
    if len(pattern) != len(bv):
        return False
    env = {}
    for p, b in zip(pattern, bv):
        if isinstance(p, int):
            if p != b:
                return False
            continue
        if b < p.get("min", 1) or b > p.get("max", 10**9):
            return False
        name = p["var"]
        if name in env and env[name] != b:
            return False
        env[name] = b
    return True


def _match_predicate(node, bv):
    name = node["predicate"]
    if name == "blocks_at_least":
        return len(bv) >= node["value"]
    if name == "blocks_of_size_at_least_2":
        return sum(1 for b in bv if b >= 2) >= node["value"]
    if name == "five_blocks_two_of_size_at_least_2":
        return len(bv) == 5 and sum(1 for b in bv if b >= 2) >= 2
    raise KeyError(name)


def node_matches(node, bv):
    bv = tuple(bv)
    for cand in (bv, bv[::-1]):
        if "pattern" in node and _match_pattern(node["pattern"], cand):
            return True
        if "predicate" in node and _match_predicate(node, cand):
            return True
    return False


def table_sides(bv, table=None):
    table = table or load_table()
    fin = any(node_matches(n, bv) for n in table["finite"])
    inf = any(node_matches(n, bv) for n in table["infinite"])
    return fin, inf


# ---------------------------------------------------------------------------
# independent linear algebra over Q or GF(q) on plain lists (no package code)


def naive_rank(rows, q=None):
    from fractions import Fraction

    a = [[(Fraction(x) if q is None else int(x) % q) for x in r] for r in rows]
    if not a:
        return 0
    n, m = len(a), len(a[0])
    rank = 0
    for c in range(m):
        piv = next((r for r in range(rank, n) if a[r][c] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = (1 / a[rank][c]) if q is None else pow(a[rank][c], -1, q)
        for r in range(n):
            if r != rank and a[r][c] != 0:
                f = a[r][c] * inv
                a[r] = [(x - f * y) if q is None else (x - f * y) % q for x, y in zip(a[r], a[rank])]
        rank += 1
    return rank


def naive_matmul(a, b, q=None):
    out = [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]
    return out if q is None else [[x % q for x in r] for r in out]


def naive_det(rows, q=None):
    from fractions import Fraction
    from itertools import permutations

    n = len(rows)
    total = 0
    for perm in permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        term = Fraction(sign)
        for i in range(n):
            term *= Fraction(rows[i][perm[i]])
        total += term
    return total if q is None else int(total) % q
