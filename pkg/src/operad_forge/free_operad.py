"""Free graded nonsymmetric operads on decorated planar trees.

Basis elements are tree monomials; the decoration tensor is canonically
ordered by the planar order of vertices.  Every operation that rearranges
vertices (grafting, substituting a sum of trees for a vertex or a divisor)
pays the Koszul sign of reordering the decoration factors back into planar
order.  That is the only sign convention in this module; everything else is
derived from it.
"""

from __future__ import annotations

import itertools
from typing import Mapping, Optional, Sequence

from .coeffs import Coefficient, koszul_sign
from .trees import (
    Generator,
    Node,
    corolla,
    graft,
    monomial_order_key,
    node_arity,
    replace_at,
    subtree_at,
    vertex_labels,
    vertex_paths,
)


class TreeMonomial:
    """A planar tree with every vertex decorated by a generator."""

    __slots__ = ("node", "arity", "degree", "weight", "gens", "_hash", "_key")

    def __init__(self, node: Node):
        self.node = node
        self.gens = vertex_labels(node)
        self.arity = node_arity(node)
        self.degree = sum(g.degree for g in self.gens)
        self.weight = len(self.gens)
        self._hash = hash(node)
        self._key = None

    @staticmethod
    def corolla(gen: Generator) -> "TreeMonomial":
        return TreeMonomial(corolla(gen))

    def order_key(self):
        if self._key is None:
            self._key = monomial_order_key(self.node, self.arity, self.degree)
        return self._key

    def __eq__(self, other):
        return isinstance(other, TreeMonomial) and self.node == other.node

    def __hash__(self):
        return self._hash

    def __repr__(self):
        from .formats import format_tree

        return format_tree(self.node)


def _provenance_compose(f: Node, leaf_index: int, g: Node):
    """Planar provenance sequence of f with g grafted at the given leaf.

    Entries are ('f', i) or ('g', j) with i, j planar indices in the factors.
    """
    order: list[tuple[str, int]] = []
    counters = {"f": 0, "g": 0, "leaf": 0}

    def walk_g(n: Node):
        order.append(("g", counters["g"]))
        counters["g"] += 1
        for c in n[1]:
            if c is not None:
                walk_g(c)

    def walk_f(n: Node):
        order.append(("f", counters["f"]))
        counters["f"] += 1
        for c in n[1]:
            if c is None:
                counters["leaf"] += 1
                if counters["leaf"] == leaf_index:
                    walk_g(g)
            else:
                walk_f(c)

    walk_f(f)
    return order


def compose_monomials(f: TreeMonomial, i: int, g: TreeMonomial):
    """Graft g into the i-th leaf of f.  Returns (sign, monomial)."""
    if not 1 <= i <= f.arity:
        raise ValueError(f"composition position {i} out of range 1..{f.arity}")
    node = graft(f.node, i, g.node)
    degs = [x.degree for x in f.gens] + [x.degree for x in g.gens]
    if all(d % 2 == 0 for d in degs):
        return 1, TreeMonomial(node)
    order = _provenance_compose(f.node, i, g.node)
    nf = f.weight
    perm = tuple(idx if tag == "f" else nf + idx for tag, idx in order)
    return koszul_sign(degs, perm), TreeMonomial(node)


def replace_region(t: TreeMonomial, region: frozenset[int] | set[int],
                   m: TreeMonomial):
    """Replace a connected region of vertices by the monomial ``m``.

    The region's external branches are grafted onto m's leaves in planar
    order; m's arity must match the region's arity.  Returns
    (sign, monomial) where the sign reorders the decoration tensor read as
    (prefix, m's vertices, remaining old vertices) into the planar order of
    the result.
    """
    region = set(region)
    root = min(region)
    paths = vertex_paths(t.node)
    index_of = {p: k for k, p in enumerate(paths)}
    root_path = paths[root]
    region_root_node = subtree_at(t.node, root_path)

    # External branches of the region in planar (leaf) order, tagged with the
    # planar index of each branch's root in t (None for bare leaves).
    externals: list[Optional[Node]] = []
    ext_bases: list[Optional[int]] = []

    def collect(n: Node, path):
        for s, c in enumerate(n[1]):
            child_path = path + (s,)
            if c is not None and index_of[child_path] in region:
                collect(c, child_path)
            else:
                externals.append(c)
                ext_bases.append(None if c is None else index_of[child_path])

    collect(region_root_node, root_path)
    if len(externals) != m.arity:
        raise ValueError("replacement arity mismatch")

    leaf_no = 0

    def fill(n: Node) -> Node:
        nonlocal leaf_no
        children = []
        for c in n[1]:
            if c is None:
                children.append(externals[leaf_no])
                leaf_no += 1
            else:
                children.append(fill(c))
        return (n[0], tuple(children))

    new_node = replace_at(t.node, root_path, fill(m.node))

    old_degs = [g.degree for g in t.gens]
    m_degs = [g.degree for g in m.gens]
    # Inversions only occur between an m-vertex and an old vertex (each
    # source keeps its internal order), so an all-even side forces sign +1.
    if all(d % 2 == 0 for d in old_degs) or all(d % 2 == 0 for d in m_degs):
        return 1, TreeMonomial(new_node)

    # Reference order: old verts before root, m's verts, remaining old verts.
    post = [k for k in range(root + 1, t.weight) if k not in region]
    ref_pos: dict[tuple[str, int], int] = {}
    degs: list[int] = []
    for k in range(root):
        ref_pos[("o", k)] = len(degs)
        degs.append(old_degs[k])
    for j in range(m.weight):
        ref_pos[("m", j)] = len(degs)
        degs.append(m_degs[j])
    for k in post:
        ref_pos[("o", k)] = len(degs)
        degs.append(old_degs[k])

    # Planar order of the result, by provenance.  Old subtrees are contiguous
    # planar blocks of t, so a branch rooted at index b of weight w
    # contributes ("o", b), ..., ("o", b+w-1).
    subtree_weight = {}
    for k, p in enumerate(paths):
        subtree_weight[k] = sum(1 for q in paths if q[: len(p)] == p)
    region_span = {k for k in index_of.values() if paths[k][: len(root_path)] == root_path}
    trailing = [k for k in range(t.weight) if k > root and k not in region_span]

    order: list[tuple[str, int]] = [("o", k) for k in range(root)]
    leaf_no = 0
    j_counter = [0]

    def walk_fill(n: Node):
        nonlocal leaf_no
        order.append(("m", j_counter[0]))
        j_counter[0] += 1
        for c in n[1]:
            if c is None:
                base = ext_bases[leaf_no]
                leaf_no += 1
                if base is not None:
                    order.extend(("o", base + r) for r in range(subtree_weight[base]))
            else:
                walk_fill(c)

    walk_fill(m.node)
    order.extend(("o", k) for k in trailing)
    perm = tuple(ref_pos[p] for p in order)
    return koszul_sign(degs, perm), TreeMonomial(new_node)


# ---------------------------------------------------------------------------
# Linear combinations
# ---------------------------------------------------------------------------

class HomogeneityError(ValueError):
    pass


class OperadElement:
    """Finite linear combination of tree monomials, homogeneous in
    (arity, degree)."""

    __slots__ = ("terms", "arity", "degree")

    def __init__(self, terms: Mapping[TreeMonomial, Coefficient] | None = None):
        self.terms: dict[TreeMonomial, Coefficient] = {}
        self.arity: Optional[int] = None
        self.degree: Optional[int] = None
        if terms:
            for t, c in terms.items():
                if c.is_zero():
                    continue
                self._admit(t)
                prev = self.terms.get(t)
                tot = prev + c if prev is not None else c
                if tot.is_zero():
                    self.terms.pop(t, None)
                else:
                    self.terms[t] = tot

    def _admit(self, t: TreeMonomial):
        if self.arity is None:
            self.arity, self.degree = t.arity, t.degree
        elif (t.arity, t.degree) != (self.arity, self.degree):
            raise HomogeneityError(
                f"mixed (arity, degree): ({self.arity},{self.degree}) vs "
                f"({t.arity},{t.degree})"
            )

    @staticmethod
    def zero() -> "OperadElement":
        return OperadElement()

    @staticmethod
    def single(t: TreeMonomial, c: Coefficient | int = 1) -> "OperadElement":
        if isinstance(c, int):
            c = Coefficient.rational(c)
        return OperadElement({t: c})

    @staticmethod
    def generator(gen: Generator, c: Coefficient | int = 1) -> "OperadElement":
        return OperadElement.single(TreeMonomial.corolla(gen), c)

    def is_zero(self) -> bool:
        return not self.terms

    def __iter__(self):
        return iter(self.terms.items())

    def __add__(self, other: "OperadElement") -> "OperadElement":
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        out = OperadElement()
        out.arity, out.degree = self.arity, self.degree
        out.terms = dict(self.terms)
        for t, c in other.terms.items():
            out._admit(t)
            tot = out.terms.get(t)
            tot = tot + c if tot is not None else c
            if tot.is_zero():
                out.terms.pop(t, None)
            else:
                out.terms[t] = tot
        if not out.terms:
            return OperadElement()
        return out

    def __neg__(self) -> "OperadElement":
        out = OperadElement()
        out.arity, out.degree = self.arity, self.degree
        out.terms = {t: -c for t, c in self.terms.items()}
        return out

    def __sub__(self, other: "OperadElement") -> "OperadElement":
        return self + (-other)

    def scale(self, c) -> "OperadElement":
        if not isinstance(c, Coefficient):
            c = Coefficient.rational(c)
        if c.is_zero() or self.is_zero():
            return OperadElement()
        out = OperadElement()
        out.arity, out.degree = self.arity, self.degree
        out.terms = {t: w * c for t, w in self.terms.items()}
        return out

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, OperadElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        raise TypeError("OperadElement is not hashable")

    def __repr__(self):
        if self.is_zero():
            return "0"
        from .formats import format_tree

        bits = []
        for t, c in sorted(self.terms.items(), key=lambda kv: format_tree(kv[0].node)):
            bits.append(f"({c})*{format_tree(t.node)}")
        return " + ".join(bits)

    def leading(self):
        """(monomial, coefficient) maximal for the path-lexicographic order."""
        if self.is_zero():
            raise ValueError("zero element has no leading monomial")
        t = max(self.terms, key=TreeMonomial.order_key)
        return t, self.terms[t]


def partial_compose(f: OperadElement, i: int, g: OperadElement) -> OperadElement:
    """Bilinear extension of grafting g into the i-th input of f."""
    if f.is_zero() or g.is_zero():
        return OperadElement.zero()
    if not 1 <= i <= f.arity:
        raise ValueError(f"position {i} out of range for arity {f.arity}")
    acc: dict[TreeMonomial, Coefficient] = {}
    for tf, cf in f.terms.items():
        for tg, cg in g.terms.items():
            sign, t = compose_monomials(tf, i, tg)
            c = cf * cg
            if sign < 0:
                c = -c
            prev = acc.get(t)
            tot = prev + c if prev is not None else c
            if tot.is_zero():
                acc.pop(t, None)
            else:
                acc[t] = tot
    return OperadElement(acc)


def _brace_positions(m_arity: int, arities: Sequence[int]):
    """Insertion index tuples for the brace sum (strictly left to right)."""
    k = len(arities)
    for slots in itertools.combinations(range(1, m_arity + 1), k):
        shift = 0
        idx = []
        for a, l in zip(slots, arities):
            idx.append(a + shift)
            shift += l - 1
        yield tuple(idx)


def brace_lenient(f: OperadElement, gs: Sequence[OperadElement]) -> OperadElement:
    """f{g_1,...,g_k}; empty sum (zero) when k exceeds the arity of f."""
    if not gs:
        return f
    if f.is_zero() or any(g.is_zero() for g in gs):
        return OperadElement.zero()
    out = OperadElement.zero()
    for idx in _brace_positions(f.arity, [g.arity for g in gs]):
        term = f
        for pos, g in zip(idx, gs):
            term = partial_compose(term, pos, g)
        out = out + term
    return out


def brace(f: OperadElement, gs: Sequence[OperadElement]) -> OperadElement:
    if gs and not f.is_zero() and len(gs) > f.arity:
        raise ValueError(f"brace with {len(gs)} arguments exceeds arity {f.arity}")
    return brace_lenient(f, gs)


def gerstenhaber(f: OperadElement, g: OperadElement) -> OperadElement:
    """[f,g]_G = f{g} - (-1)^{|f||g|} g{f}."""
    if f.is_zero() or g.is_zero():
        return OperadElement.zero()
    second = brace_lenient(g, [f])
    if (f.degree * g.degree) % 2:
        return brace_lenient(f, [g]) + second
    return brace_lenient(f, [g]) - second


def _interleavings(m: int, n: int):
    """Index tuples 0 <= i_1 <= j_1 <= ... <= i_m <= j_m <= n."""

    def rec(k: int, lo: int):
        if k == m:
            yield ()
            return
        for i in range(lo, n + 1):
            for j in range(i, n + 1):
                for rest in rec(k + 1, j):
                    yield ((i, j),) + rest

    yield from rec(0, 0)


def pre_jacobi_check(f: OperadElement, gs: Sequence[OperadElement],
                     hs: Sequence[OperadElement]) -> bool:
    """Exact check of the brace pre-Jacobi identity for the given arguments."""
    m, n = len(gs), len(hs)
    lhs = brace_lenient(brace_lenient(f, gs), hs)
    rhs = OperadElement.zero()
    gdeg = [g.degree for g in gs]
    hdeg = [h.degree for h in hs]
    for pairs in _interleavings(m, n):
        exp = 0
        args: list[OperadElement] = []
        prev_j = 0
        for k, (i, j) in enumerate(pairs):
            exp += gdeg[k] * sum(hdeg[:i])
            args.extend(hs[prev_j:i])
            args.append(brace_lenient(gs[k], hs[i:j]))
            prev_j = j
        args.extend(hs[prev_j:])
        term = brace_lenient(f, args)
        rhs = rhs + (term if exp % 2 == 0 else -term)
    return lhs == rhs


def extend_derivation(images: Mapping[Generator, OperadElement],
                      x: OperadElement) -> OperadElement:
    """Degree -1 derivation determined by generator images.

    Acts on a monomial as the signed sum over vertices, the sign being
    (-1)**(total degree of vertices preceding the vertex in planar order),
    followed by the Koszul reordering of the substituted decoration tensor.
    """
    if x.is_zero():
        return OperadElement.zero()
    acc: dict[TreeMonomial, Coefficient] = {}
    for t, c in x.terms.items():
        prefix = 0
        for v, gen in enumerate(t.gens):
            try:
                img = images[gen]
            except KeyError:
                raise KeyError(f"no derivation image for generator {gen.symbol}")
            if not img.is_zero():
                for m_mono, m_coeff in img.terms.items():
                    sign, new_t = replace_region(t, {v}, m_mono)
                    if prefix % 2:
                        sign = -sign
                    w = c * m_coeff
                    if sign < 0:
                        w = -w
                    prev = acc.get(new_t)
                    tot = prev + w if prev is not None else w
                    if tot.is_zero():
                        acc.pop(new_t, None)
                    else:
                        acc[new_t] = tot
            prefix += gen.degree
    return OperadElement(acc)
