"""Cochain complexes of a weighted differential algebra with coefficients
in a differential bimodule: the Hochschild complex of the underlying
algebra, the operator complex (Hochschild with the weight-shifted actions
a |- x = (a + L d(a)) x), the comparison map Phi between them, the total
complex, and exact cohomology ranks over Q.

A level-n cochain in the total complex is a pair (f, g): f is an n-linear
map A^n -> M, g an (n-1)-linear map (absent at level 0).  Tables are sparse
dicts on basis tuples with rational coordinate vectors as values.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .algebras import (
    DifAlgebraData,
    DifBimoduleData,
    Vec,
    add_vec,
    bimodule_defects,
    regular_bimodule,
    scale_vec,
    vec_is_zero,
    zero_vec,
)

Table = dict[tuple, Vec]


def table_add(a: Table, b: Table, dim: int) -> Table:
    out = dict(a)
    for k, v in b.items():
        w = add_vec(out.get(k, zero_vec(dim)), v)
        if vec_is_zero(w):
            out.pop(k, None)
        else:
            out[k] = w
    return out


def table_scale(c, a: Table) -> Table:
    c = Fraction(c)
    if c == 0:
        return {}
    return {k: scale_vec(c, v) for k, v in a.items()}


def table_eq(a: Table, b: Table) -> bool:
    return {k: v for k, v in a.items() if not vec_is_zero(v)} == \
        {k: v for k, v in b.items() if not vec_is_zero(v)}


@dataclass
class DaCochain:
    level: int
    f: Table                 # arity = level
    g: Optional[Table]       # arity = level - 1; None at level 0

    def is_zero(self) -> bool:
        return not self.f and not self.g


def eval_table(table: Table, args: Sequence[Vec], dim_m: int) -> Vec:
    """Multilinear evaluation of a basis-tuple table at coordinate vectors."""
    if not table:
        return zero_vec(dim_m)
    out = zero_vec(dim_m)
    for key, val in table.items():
        c = Fraction(1)
        for pos, i in enumerate(key):
            c *= args[pos][i]
            if c == 0:
                break
        if c != 0:
            out = add_vec(out, scale_vec(c, val))
    return out


class CochainComplexes:
    """All three differentials for a fixed algebra and bimodule.

    Bimodule axioms are validated eagerly; every theorem below presupposes
    them and silent bad data is the main failure mode.
    """

    def __init__(self, alg: DifAlgebraData, bim: Optional[DifBimoduleData] = None,
                 validate: bool = True):
        self.alg = alg
        self.bim = bim if bim is not None else regular_bimodule(alg)
        if validate:
            from .algebras import associativity_defects, leibniz_defects

            problems = [f"algebra: {d}" for d in associativity_defects(alg)]
            problems += [f"algebra leibniz: {d}" for d in leibniz_defects(alg)]
            problems += bimodule_defects(alg, self.bim)
            if problems:
                raise ValueError("invalid input data:\n  " +
                                 "\n  ".join(map(str, problems[:10])))
        self.vdash_bim = self._shifted_bimodule()

    def _shifted_bimodule(self) -> DifBimoduleData:
        """The actions a |- x = (a + L d_A(a)) x and x -| a."""
        alg, bim = self.alg, self.bim
        shifted = [add_vec(alg.unit_vec(i), scale_vec(alg.lam, alg.d[i]))
                   for i in range(alg.dim)]
        left = [[bim.act_left(shifted[i], bim.unit_vec(x))
                 for x in range(bim.dim)] for i in range(alg.dim)]
        right = [[bim.act_right(bim.unit_vec(x), shifted[i])
                  for i in range(alg.dim)] for x in range(bim.dim)]
        return DifBimoduleData.build(left, right, list(bim.d), basis=bim.basis)

    # -- the three differentials -------------------------------------------

    def _hochschild(self, n: int, f: Table, bim: DifBimoduleData) -> Table:
        alg = self.alg
        dim_a, dim_m = alg.dim, bim.dim
        out: Table = {}
        for key in itertools.product(range(dim_a), repeat=n + 1):
            args = [alg.unit_vec(i) for i in key]
            acc = zero_vec(dim_m)
            v = eval_table(f, args[1:], dim_m)
            sign = -1 if (n + 1) % 2 else 1
            acc = add_vec(acc, scale_vec(sign, bim.act_left(args[0], v)))
            for i in range(1, n + 1):
                inner = args[: i - 1] + [alg.product(args[i - 1], args[i])] + \
                    args[i + 1:]
                v = eval_table(f, inner, dim_m)
                sign = -1 if (n + 1 - i) % 2 else 1
                acc = add_vec(acc, scale_vec(sign, v))
            v = eval_table(f, args[:-1], dim_m)
            acc = add_vec(acc, bim.act_right(v, args[-1]))
            if not vec_is_zero(acc):
                out[key] = acc
        return out

    def hochschild_diff(self, n: int, f: Table) -> Table:
        return self._hochschild(n, f, self.bim)

    def do_diff(self, n: int, g: Table) -> Table:
        return self._hochschild(n, g, self.vdash_bim)

    def phi(self, n: int, f: Table) -> Table:
        """Phi(f)(a_1..a_n) = sum_k L^{k-1} sum_{i_1<..<i_k}
        f(.. d(a_{i_t}) ..) - d_M(f(a_1..a_n))."""
        alg, bim = self.alg, self.bim
        dim_a, dim_m = alg.dim, bim.dim
        lam = alg.lam
        out: Table = {}
        for key in itertools.product(range(dim_a), repeat=n):
            args = [alg.unit_vec(i) for i in key]
            acc = scale_vec(-1, bim.apply_d(eval_table(f, args, dim_m)))
            for k in range(1, n + 1):
                lam_pow = lam ** (k - 1)
                if lam_pow == 0 and k > 1:
                    continue
                for subset in itertools.combinations(range(n), k):
                    inner = list(args)
                    for pos in subset:
                        inner[pos] = alg.apply_d(inner[pos])
                    v = eval_table(f, inner, dim_m)
                    acc = add_vec(acc, scale_vec(lam_pow, v))
            if not vec_is_zero(acc):
                out[key] = acc
        return out

    def da_diff(self, x: DaCochain) -> DaCochain:
        n = x.level
        new_f = self.hochschild_diff(n, x.f)
        new_g = table_scale(-1, self.phi(n, x.f))
        if x.g is not None:
            new_g = table_add(new_g,
                              table_scale(-1, self.do_diff(n - 1, x.g)),
                              self.bim.dim)
        return DaCochain(n + 1, new_f, new_g)

    # -- dimensions and ranks ------------------------------------------------

    def alg_dim(self, n: int) -> int:
        return self.bim.dim * self.alg.dim ** n

    def da_dim(self, n: int) -> int:
        if n == 0:
            return self.bim.dim
        return self.alg_dim(n) + self.bim.dim * self.alg.dim ** (n - 1)

    def _da_basis(self, n: int):
        """Basis cochains of the level-n total complex, in a fixed order."""
        dim_a, dim_m = self.alg.dim, self.bim.dim
        out = []
        for key in itertools.product(range(dim_a), repeat=n):
            for x in range(dim_m):
                vec = tuple(Fraction(1 if t == x else 0) for t in range(dim_m))
                out.append(DaCochain(n, {key: vec}, {} if n >= 1 else None))
        if n >= 1:
            for key in itertools.product(range(dim_a), repeat=n - 1):
                for x in range(dim_m):
                    vec = tuple(Fraction(1 if t == x else 0)
                                for t in range(dim_m))
                    out.append(DaCochain(n, {}, {key: vec}))
        return out

    def _coords(self, x: DaCochain) -> list[Fraction]:
        dim_a, dim_m = self.alg.dim, self.bim.dim
        n = x.level
        coords: list[Fraction] = []
        for key in itertools.product(range(dim_a), repeat=n):
            v = x.f.get(key, zero_vec(dim_m))
            coords.extend(v)
        if n >= 1:
            for key in itertools.product(range(dim_a), repeat=n - 1):
                v = (x.g or {}).get(key, zero_vec(dim_m))
                coords.extend(v)
        return coords

    def da_matrix(self, n: int) -> list[list[Fraction]]:
        """Matrix of the level-n total differential, columns = basis."""
        cols = [self._coords(self.da_diff(b)) for b in self._da_basis(n)]
        rows = self.da_dim(n + 1)
        return [[cols[j][i] for j in range(len(cols))] for i in range(rows)]

    def cohomology_ranks(self, max_level: int,
                         rank_fn=None) -> list[int]:
        """Dimensions of the total cohomology H^0..H^max_level over Q."""
        if rank_fn is None:
            rank_fn = rank_fraction_free
        ranks = [rank_fn(self.da_matrix(n)) for n in range(max_level + 1)]
        dims = []
        for n in range(max_level + 1):
            below = ranks[n - 1] if n >= 1 else 0
            dims.append(self.da_dim(n) - ranks[n] - below)
        return dims


# ---------------------------------------------------------------------------
# Exact ranks
# ---------------------------------------------------------------------------

def rank_fraction_free(matrix: Sequence[Sequence[Fraction]]) -> int:
    """Bareiss fraction-free elimination on the denominator-cleared integer
    matrix; deterministic first-nonzero pivoting."""
    if not matrix or not matrix[0]:
        return 0
    rows = []
    for row in matrix:
        denom = 1
        for x in row:
            denom = denom * x.denominator // _gcd(denom, x.denominator)
        rows.append([int(x * denom) for x in row])
    m, n = len(rows), len(rows[0])
    rank = 0
    prev = 1
    for col in range(n):
        pivot_row = None
        for r in range(rank, m):
            if rows[r][col]:
                pivot_row = r
                break
        if pivot_row is None:
            continue
        rows[rank], rows[pivot_row] = rows[pivot_row], rows[rank]
        p = rows[rank][col]
        for r in range(rank + 1, m):
            factor = rows[r][col]
            for c in range(n):
                rows[r][c] = (rows[r][c] * p - factor * rows[rank][c]) // prev
        prev = p
        rank += 1
        if rank == m:
            break
    return rank


def rank_dense_oracle(matrix: Sequence[Sequence[Fraction]]) -> int:
    """Independent plain Gaussian elimination over Q."""
    if not matrix or not matrix[0]:
        return 0
    rows = [list(map(Fraction, row)) for row in matrix]
    m, n = len(rows), len(rows[0])
    rank = 0
    for col in range(n):
        pivot = None
        for r in range(rank, m):
            if rows[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pv = rows[rank][col]
        rows[rank] = [x / pv for x in rows[rank]]
        for r in range(m):
            if r != rank and rows[r][col] != 0:
                factor = rows[r][col]
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
        if rank == m:
            break
    return rank


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a) if a else 1
