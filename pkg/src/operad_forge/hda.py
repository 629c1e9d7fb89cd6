"""Homotopy differential algebras of weight L on finite graded spaces.

A structure is a pair of table families m_n: V^n -> V (degree n-2) and
d_n: V^n -> V (degree n-1) up to an arity bound.  Its defining identities,
per output arity n:

  stasheff:   sum_{i+j+k=n} (-1)^(i+jk) m_{i+1+k} o (1^i, m_j, 1^k) = 0

  weighted Leibniz:
    sum_{i+j+k=n} (-1)^(i+jk) d_{i+1+k} o (1^i, m_j, 1^k)
      = sum (-1)^eta L^(q-1) m_p o (1^{j_1}, d_{l_1}, ..., d_{l_q}, 1^{j_{q+1}})

with eta = sum_k (l_k-1)(q-k+sum_{r>k} j_r), summed over j_r >= 0,
l_t >= 1, l_1+..+l_q+j_1+..+j_{q+1} = n, j_1+..+j_{q+1}+q = p,
n >= p >= q >= 1.  Identities are arity-graded, so truncation at the bound
is exact per arity.

The suspended picture (b_n, R_n), both of degree -1, and the Maurer-Cartan
formulation in the reduced deformation space are provided for the
equivalence checks.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional

from .coeffs import Coefficient, LAMBDA
from .hom_complex import (
    GradedSpace,
    MultiMap,
    compose_full,
    hom_brace,
    iso1_down,
    iso1_up,
    iso2_down,
    iso2_up,
    suspend_target,
)
from .linf import ALG, DO, CdaElement, mc_residual


@dataclass
class HdaStructure:
    space: GradedSpace
    lam: Coefficient
    bound: int
    m: dict[int, MultiMap] = field(default_factory=dict)
    d: dict[int, MultiMap] = field(default_factory=dict)

    def __post_init__(self):
        for n, mm in self.m.items():
            if mm.arity != n or (mm.table and mm.degree != n - 2):
                raise ValueError(f"m_{n} must have arity {n}, degree {n - 2}")
        for n, mm in self.d.items():
            if mm.arity != n or (mm.table and mm.degree != n - 1):
                raise ValueError(f"d_{n} must have arity {n}, degree {n - 1}")

    def m_at(self, n: int) -> Optional[MultiMap]:
        mm = self.m.get(n)
        return mm if mm is not None and not mm.is_zero() else None

    def d_at(self, n: int) -> Optional[MultiMap]:
        mm = self.d.get(n)
        return mm if mm is not None and not mm.is_zero() else None


def stasheff_residual(s: HdaStructure, n: int) -> MultiMap:
    v = s.space
    acc = MultiMap.zero(v, v, n, n - 3)
    for j in range(1, n + 1):
        inner = s.m_at(j)
        if inner is None:
            continue
        outer_arity = n - j + 1
        outer = s.m_at(outer_arity)
        if outer is None:
            continue
        for i in range(0, n - j + 1):
            k = n - j - i
            slots: list[Optional[MultiMap]] = [None] * outer_arity
            slots[i] = inner
            term = compose_full(outer, slots)
            if (i + j * k) % 2:
                term = -term
            acc = acc + term
    return acc


def _leibniz_rhs_terms(n: int) -> Iterator[tuple[int, int, tuple, tuple]]:
    """(q, p, ls, js) with the constraints of the weighted Leibniz identity."""
    for q in range(1, n + 1):
        for p in range(q, n + 1):
            free = p - q          # j_1 + ... + j_{q+1}
            l_total = n - free
            if l_total < q:
                continue
            for js in _weak_compositions(free, q + 1):
                for ls in _positive_compositions(l_total, q):
                    yield q, p, ls, js


def _weak_compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _weak_compositions(total - first, parts - 1):
            yield (first,) + rest


def _positive_compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _positive_compositions(total - first, parts - 1):
            yield (first,) + rest


def eta_sign_exponent(ls: tuple[int, ...], js: tuple[int, ...]) -> int:
    """The simplified eta: sum_k (l_k-1)(q-k+sum_{r=k+1}^{q+1} j_r)."""
    q = len(ls)
    return sum((ls[k] - 1) * (q - (k + 1) + sum(js[k + 1:]))
               for k in range(q))


def eta_sign_exponent_long(n: int, p: int, ls: tuple[int, ...],
                           js: tuple[int, ...]) -> int:
    """The unsimplified eta, kept as an independent cross-check."""
    q = len(ls)
    out = n * (n - 1) // 2 + p * (p - 1) // 2
    out += sum(l * (l - 1) // 2 for l in ls)
    out += sum((ls[k] - 1) * (sum(js[: k + 1]) + sum(ls[:k]))
               for k in range(q))
    return out


def weighted_leibniz_residual(s: HdaStructure, n: int) -> MultiMap:
    v = s.space
    acc = MultiMap.zero(v, v, n, n - 2)
    for j in range(1, n + 1):
        inner = s.m_at(j)
        if inner is None:
            continue
        outer = s.d_at(n - j + 1)
        if outer is None:
            continue
        for i in range(0, n - j + 1):
            k = n - j - i
            slots: list[Optional[MultiMap]] = [None] * (n - j + 1)
            slots[i] = inner
            term = compose_full(outer, slots)
            if (i + j * k) % 2:
                term = -term
            acc = acc + term
    lam_pows = [Coefficient.one()]
    for _ in range(n):
        lam_pows.append(lam_pows[-1] * s.lam)
    for q, p, ls, js in _leibniz_rhs_terms(n):
        outer = s.m_at(p)
        if outer is None:
            continue
        inners = [s.d_at(l) for l in ls]
        if any(x is None for x in inners):
            continue
        slots: list[Optional[MultiMap]] = [None] * p
        pos = 0
        for t in range(q):
            pos += js[t]
            slots[pos] = inners[t]
            pos += 1
        term = compose_full(outer, slots)
        coeff = lam_pows[q - 1]
        if eta_sign_exponent(ls, js) % 2:
            coeff = -coeff
        acc = acc - term.scale(coeff)
    return acc


def check_identities(s: HdaStructure, max_arity: Optional[int] = None
                     ) -> list[tuple[str, int]]:
    """Names and arities of failing identities up to the bound."""
    bound = s.bound if max_arity is None else max_arity
    bad = []
    for n in range(1, bound + 1):
        if not stasheff_residual(s, n).is_zero():
            bad.append(("stasheff", n))
        if not weighted_leibniz_residual(s, n).is_zero():
            bad.append(("weighted_leibniz", n))
    return bad


# ---------------------------------------------------------------------------
# Suspended picture and Maurer-Cartan formulation
# ---------------------------------------------------------------------------

def to_br(s: HdaStructure) -> tuple[dict[int, MultiMap], dict[int, MultiMap]]:
    """(b_n, R_n): both families of degree -1 on the suspension."""
    bs = {n: iso1_up(mm) for n, mm in s.m.items() if not mm.is_zero()}
    rs = {n: iso2_up(mm) for n, mm in s.d.items() if not mm.is_zero()}
    return bs, rs


def from_br(space: GradedSpace, lam: Coefficient, bound: int,
            bs: dict[int, MultiMap], rs: dict[int, MultiMap]) -> HdaStructure:
    m = {n: iso1_down(mm) for n, mm in bs.items() if not mm.is_zero()}
    d = {n: iso2_down(mm) for n, mm in rs.items() if not mm.is_zero()}
    return HdaStructure(space, lam, bound, m, d)


def br_b_residual(space: GradedSpace, bs: dict[int, MultiMap], n: int
                  ) -> MultiMap:
    """sum_{i+j-1=n} b_i{b_j}."""
    sv = space.shift(1)
    acc = MultiMap.zero(sv, sv, n, -2)
    for i, bi in bs.items():
        j = n - i + 1
        bj = bs.get(j)
        if bj is None or j < 1:
            continue
        acc = acc + hom_brace(bi, [bj])
    return acc


def br_r_residual(space: GradedSpace, lam: Coefficient,
                  bs: dict[int, MultiMap], rs: dict[int, MultiMap], n: int
                  ) -> MultiMap:
    """sum_{u+j-1=n} sR_u{b_j} - sum L^(q-1) b_p{sR_{l_1},..,sR_{l_q}}."""
    sv = space.shift(1)
    acc = MultiMap.zero(sv, sv, n, -2)
    for u, ru in rs.items():
        j = n - u + 1
        bj = bs.get(j)
        if bj is None or j < 1:
            continue
        acc = acc + hom_brace(suspend_target(ru), [bj])
    lam_pows = [Coefficient.one()]
    for _ in range(n):
        lam_pows.append(lam_pows[-1] * lam)
    for q in range(1, n + 1):
        for p in range(q, n + 1):
            if n - p + q < q:
                continue
            bp = bs.get(p)
            if bp is None:
                continue
            for ls in _positive_compositions(n - p + q, q):
                srs = [rs.get(l) for l in ls]
                if any(x is None for x in srs):
                    continue
                term = hom_brace(bp, [suspend_target(x) for x in srs])
                acc = acc - term.scale(lam_pows[q - 1])
    return acc


def mc_element(s: HdaStructure) -> CdaElement:
    bs, rs = to_br(s)
    parts = {}
    for n, mm in bs.items():
        parts[(n, ALG)] = mm
    for n, mm in rs.items():
        parts[(n, DO)] = mm
    return CdaElement(s.space, parts)


def mc_equivalence_report(s: HdaStructure) -> list[dict]:
    """Per arity: do the two residual families vanish exactly when the
    Maurer-Cartan components do?"""
    alpha = mc_element(s)
    residual = mc_residual(s.space, s.lam, alpha) if not alpha.is_zero() \
        else CdaElement.zero(s.space)
    report = []
    for n in range(1, s.bound + 1):
        st = stasheff_residual(s, n).is_zero()
        lb = weighted_leibniz_residual(s, n).is_zero()
        mc_alg = (n, ALG) not in residual.parts
        mc_do = (n, DO) not in residual.parts
        report.append({
            "arity": n,
            "stasheff_zero": st,
            "leibniz_zero": lb,
            "mc_alg_zero": mc_alg,
            "mc_do_zero": mc_do,
            "match": (st == mc_alg) and (lb == mc_do),
        })
    return report


# ---------------------------------------------------------------------------
# Sampling and file interchange
# ---------------------------------------------------------------------------

def random_structure(rng, dims: dict[int, int], bound: int,
                     lam: Coefficient, density: float = 0.5,
                     values=(-1, 1)) -> HdaStructure:
    """Seeded random tables with exact degree bookkeeping."""
    space = GradedSpace(dims)
    m: dict[int, MultiMap] = {}
    d: dict[int, MultiMap] = {}
    for n in range(1, bound + 1):
        for store, degree in ((m, n - 2), (d, n - 1)):
            table = {}
            for key in itertools.product(space.basis(), repeat=n):
                in_deg = sum(space.degree_of(i) for i in key)
                row = {}
                for b in space.basis():
                    if space.degree_of(b) == in_deg + degree and \
                            rng.random() < density:
                        row[b] = Coefficient.rational(rng.choice(values))
                if row:
                    table[key] = row
            if table:
                store[n] = MultiMap(space, space, n, degree, table,
                                    check=False)
    return HdaStructure(space, lam, bound, m, d)


def embed_algebra(mult_table, d_table, lam, bound: int = 4) -> HdaStructure:
    """A plain differential algebra seen as a structure with m_2, d_1 only."""
    dim = len(mult_table)
    space = GradedSpace({0: dim})
    m2 = {}
    for i in range(dim):
        for j in range(dim):
            row = {k: Coefficient.rational(c)
                   for k, c in enumerate(mult_table[i][j]) if c}
            if row:
                m2[(i, j)] = row
    d1 = {}
    for i in range(dim):
        row = {k: Coefficient.rational(c) for k, c in enumerate(d_table[i])
               if c}
        if row:
            d1[(i,)] = row
    m = {2: MultiMap(space, space, 2, 0, m2)} if m2 else {}
    d = {1: MultiMap(space, space, 1, 0, d1)} if d1 else {}
    return HdaStructure(space, lam, bound, m, d)


def load_structure(obj) -> HdaStructure:
    """JSON schema: {"dims": {"0": 1}, "lambda": "generic"|rational,
    "bound": 4, "m": {"2": [{"args": [label..], "out": [[label, coeff]..]}]},
    "d": {...}} with basis labels "<degree>:<index>"."""
    import json

    from .coeffs import parse_coefficient, parse_rational

    if isinstance(obj, (str, bytes)):
        obj = json.loads(obj)
    space = GradedSpace({int(k): v for k, v in obj["dims"].items()})
    lam_spec = obj.get("lambda", "generic")
    lam = LAMBDA if lam_spec == "generic" else \
        Coefficient.rational(parse_rational(lam_spec))
    bound = int(obj.get("bound", 4))

    def load_maps(block, degree_of_n):
        out = {}
        for n_str, records in (block or {}).items():
            n = int(n_str)
            table: dict[tuple, dict[int, Coefficient]] = {}
            for rec in records:
                key = tuple(space.id_of_label(a) for a in rec["args"])
                row = table.setdefault(key, {})
                for label, coeff in rec["out"]:
                    row[space.id_of_label(label)] = parse_coefficient(coeff)
            out[n] = MultiMap(space, space, n, degree_of_n(n), table)
        return out

    m = load_maps(obj.get("m"), lambda n: n - 2)
    d = load_maps(obj.get("d"), lambda n: n - 1)
    return HdaStructure(space, lam, bound, m, d)


def dump_structure(s: HdaStructure) -> str:
    import json

    from .coeffs import format_coefficient

    def dump_maps(block):
        out = {}
        for n, mm in sorted(block.items()):
            records = []
            for key in sorted(mm.table):
                records.append({
                    "args": [s.space.label(i) for i in key],
                    "out": [[s.space.label(b), format_coefficient(c)]
                            for b, c in sorted(mm.table[key].items())],
                })
            out[str(n)] = records
        return out

    lam_c = s.lam.coeffs
    if lam_c == {1: 1}:
        lam_str = "generic"
    else:
        lam_str = str(s.lam.constant_term())
    return json.dumps({
        "dims": {str(k): v for k, v in s.space.dims.items()},
        "lambda": lam_str,
        "bound": s.bound,
        "m": dump_maps(s.m),
        "d": dump_maps(s.d),
    }, indent=1)


# ---------------------------------------------------------------------------
# Homology of (V, m_1) and descent of d_1
# ---------------------------------------------------------------------------

def homology_descent(s: HdaStructure) -> dict:
    """For a structure with differential m_1, check that d_1 preserves
    cycles and boundaries degreewise, so it descends to homology.  Requires
    weight-free (constant) tables for m_1 and d_1."""
    from fractions import Fraction as F

    v = s.space
    m1 = s.m_at(1)
    d1 = s.d_at(1)

    def as_matrix(mm: Optional[MultiMap]) -> dict:
        cols: dict[int, dict[int, Fraction]] = {}
        if mm is None:
            return cols
        for (i,), out in mm.table.items():
            col = cols.setdefault(i, {})
            for b, c in out.items():
                cc = c.coeffs
                if set(cc) - {0}:
                    raise ValueError("homology descent needs constant tables")
                col[b] = F(cc.get(0, 0))
        return cols

    m1_cols = as_matrix(m1)
    d1_cols = as_matrix(d1)

    def apply_cols(cols, vec: dict[int, Fraction]) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for i, c in vec.items():
            for b, w in cols.get(i, {}).items():
                out[b] = out.get(b, F(0)) + c * w
        return {b: c for b, c in out.items() if c}

    # cycles and boundaries per degree, as spans over the flat basis
    def span_reduce(vectors):
        basis = []
        for vec in vectors:
            vec = dict(vec)
            for lead, bvec in basis:
                if lead in vec:
                    factor = vec[lead]
                    for b, c in bvec.items():
                        vec[b] = vec.get(b, F(0)) - factor * c
                    vec = {b: c for b, c in vec.items() if c}
            if vec:
                lead = min(vec)
                scale = vec[lead]
                vec = {b: c / scale for b, c in vec.items()}
                basis.append((lead, vec))
        return basis

    def in_span(vec, basis) -> bool:
        vec = dict(vec)
        for lead, bvec in basis:
            if lead in vec:
                factor = vec[lead]
                for b, c in bvec.items():
                    vec[b] = vec.get(b, F(0)) - factor * c
                vec = {b: c for b, c in vec.items() if c}
        return not vec

    kernel = _kernel_vectors(v, m1_cols)
    boundaries = span_reduce([apply_cols(m1_cols, {i: F(1)})
                              for i in v.basis()])
    kernel_basis = span_reduce(kernel)
    ok_cycles = all(in_span(apply_cols(d1_cols, vec), kernel_basis)
                    for vec in kernel)
    ok_bounds = all(in_span(apply_cols(d1_cols, dict(bvec)), boundaries)
                    for _, bvec in boundaries)
    h_dim = len(kernel_basis) - len(boundaries)
    return {"cycles_preserved": ok_cycles,
            "boundaries_preserved": ok_bounds,
            "homology_dim": h_dim}


def _kernel_vectors(space: GradedSpace, cols) -> list[dict]:
    from fractions import Fraction as F

    n = space.dim()
    rows: dict[int, dict[int, Fraction]] = {}
    for i in range(n):
        for b, c in cols.get(i, {}).items():
            rows.setdefault(b, {})[i] = c
    # gaussian elimination on the row dict
    pivots: list[tuple[int, dict[int, Fraction]]] = []
    for b, row in sorted(rows.items()):
        row = dict(row)
        for pc, prow in pivots:
            if pc in row:
                factor = row[pc]
                for c2, v2 in prow.items():
                    row[c2] = row.get(c2, F(0)) - factor * v2
                row = {c2: v2 for c2, v2 in row.items() if v2}
        if row:
            pc = min(row)
            scale = row[pc]
            row = {c2: v2 / scale for c2, v2 in row.items()}
            pivots.append((pc, row))
    pivot_cols = {pc for pc, _ in pivots}
    free = [i for i in range(n) if i not in pivot_cols]
    out = []
    for fcol in free:
        vec = {fcol: F(1)}
        for pc, prow in reversed(pivots):
            val = -sum(prow.get(c, F(0)) * v for c, v in vec.items() if c != pc)
            if val:
                vec[pc] = val
        out.append({c: v for c, v in vec.items() if v})
    return out
