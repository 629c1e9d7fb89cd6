"""Planar rooted trees with decorated vertices.

A tree node is the pair ``(gen, children)`` where ``gen`` is a
:class:`Generator` (or ``None`` for bare shapes) and ``children`` is a tuple
whose entries are nodes or ``None`` for leaves.  Trees are reduced: every
vertex has arity >= 1.  The planar order on vertices is root-first
depth-first, children left to right; vertices are addressed by their 0-based
position in that order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from .coeffs import koszul_sign

Node = tuple  # (label, tuple_of_children); child is Node or None


class ForeignGeneratorError(ValueError):
    """Raised when ordering monomials decorated outside the m_n/d_n alphabet."""


@dataclass(frozen=True)
class Generator:
    symbol: str
    arity: int
    degree: int

    def __post_init__(self):
        if self.arity < 1:
            raise ValueError("generator arity must be >= 1")

    def __repr__(self):
        return self.symbol


def corolla(gen) -> Node:
    return (gen, (None,) * gen.arity)


def node_weight(node: Node) -> int:
    return 1 + sum(node_weight(c) for c in node[1] if c is not None)


def node_arity(node: Node) -> int:
    return sum(1 if c is None else node_arity(c) for c in node[1])


def iter_vertices(node: Node) -> Iterator[Node]:
    """Vertices in planar order."""
    yield node
    for c in node[1]:
        if c is not None:
            yield from iter_vertices(c)


def vertex_labels(node: Node) -> list:
    return [v[0] for v in iter_vertices(node)]


def vertex_paths(node: Node) -> list[tuple[int, ...]]:
    """Path (sequence of child slots) to each vertex, in planar order."""
    out: list[tuple[int, ...]] = []

    def walk(n: Node, path: tuple[int, ...]):
        out.append(path)
        for i, c in enumerate(n[1]):
            if c is not None:
                walk(c, path + (i,))

    walk(node, ())
    return out


def subtree_at(node: Node, path: Sequence[int]) -> Node:
    for i in path:
        node = node[1][i]
    return node


def replace_at(node: Node, path: Sequence[int], new: Optional[Node]) -> Node:
    if not path:
        return new
    i = path[0]
    children = list(node[1])
    children[i] = replace_at(children[i], path[1:], new)
    return (node[0], tuple(children))


def graft(node: Node, leaf_index: int, sub: Node) -> Node:
    """Graft ``sub`` into the ``leaf_index``-th leaf (1-based, left to right)."""
    count = 0

    def walk(n: Node):
        nonlocal count
        children = list(n[1])
        for i, c in enumerate(children):
            if c is None:
                count += 1
                if count == leaf_index:
                    children[i] = sub
                    return (n[0], tuple(children)), True
            else:
                nc, done = walk(c)
                if done:
                    children[i] = nc
                    return (n[0], tuple(children)), True
        return n, False

    out, done = walk(node)
    if not done:
        raise ValueError(f"leaf index {leaf_index} out of range")
    return out


def leaf_owners(node: Node) -> list[tuple[int, int]]:
    """For each leaf (left to right): (planar index of owning vertex, slot)."""
    owners: list[tuple[int, int]] = []
    counter = [0]

    def walk(n: Node):
        idx = counter[0]
        counter[0] += 1
        for slot, c in enumerate(n[1]):
            if c is None:
                owners.append((idx, slot))
            else:
                walk(c)

    walk(node)
    return owners


# ---------------------------------------------------------------------------
# Divisors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Divisor:
    """A connected set of vertices of a tree, named by planar index."""

    root: int
    vertices: frozenset[int]

    def __post_init__(self):
        if self.root not in self.vertices:
            raise ValueError("divisor root must belong to the vertex set")


def _parents(node: Node) -> list[Optional[int]]:
    parents: list[Optional[int]] = []
    counter = [0]

    def walk(n: Node, parent: Optional[int]):
        idx = counter[0]
        parents.append(parent)
        counter[0] += 1
        for c in n[1]:
            if c is not None:
                walk(c, idx)

    walk(node, None)
    return parents


def check_divisor(node: Node, d: Divisor) -> None:
    n = node_weight(node)
    parents = _parents(node)
    for v in d.vertices:
        if not 0 <= v < n:
            raise ValueError(f"vertex {v} out of range")
        if v == d.root:
            continue
        p = parents[v]
        if p is None or p not in d.vertices:
            raise ValueError(f"divisor not connected at vertex {v}")
    if parents[d.root] in d.vertices:
        raise ValueError("divisor root has its parent inside the divisor")


def divisor_subtree(node: Node, d: Divisor) -> Node:
    """The divisor as a standalone tree (external branches become leaves)."""
    check_divisor(node, d)
    paths = vertex_paths(node)
    index_of = {p: i for i, p in enumerate(paths)}

    def build(n: Node, path: tuple[int, ...]) -> Node:
        children = []
        for i, c in enumerate(n[1]):
            if c is not None and index_of[path + (i,)] in d.vertices:
                children.append(build(c, path + (i,)))
            else:
                children.append(None)
        return (n[0], tuple(children))

    root_path = paths[d.root]
    return build(subtree_at(node, root_path), root_path)


def contract(node: Node, d: Divisor, label=None) -> Node:
    """T/T': replace the divisor by a corolla of the divisor's arity."""
    check_divisor(node, d)
    paths = vertex_paths(node)
    index_of = {p: i for i, p in enumerate(paths)}

    def externals(n: Node, path: tuple[int, ...]) -> list[Optional[Node]]:
        out: list[Optional[Node]] = []
        for i, c in enumerate(n[1]):
            if c is not None and index_of[path + (i,)] in d.vertices:
                out.extend(externals(c, path + (i,)))
            else:
                out.append(c)
        return out

    root_path = paths[d.root]
    ext = externals(subtree_at(node, root_path), root_path)
    return replace_at(node, root_path, (label, tuple(ext)))


def sigma_permutation(node: Node, d: Divisor) -> tuple[int, ...]:
    """The permutation sigma(T, T') in one-line 0-based form.

    The reordered vertex list reads: the vertices before the divisor's root,
    then the divisor's vertices in planar order, then the remaining vertices
    in planar order (which is also their order in T/T').
    """
    check_divisor(node, d)
    n = node_weight(node)
    r = d.root
    head = [i for i in range(r)]
    block = sorted(d.vertices)
    tail = [i for i in range(r, n) if i not in d.vertices]
    perm = tuple(head + block + tail)
    assert sorted(perm) == list(range(n))
    return perm


def sigma_koszul_sign(node: Node, d: Divisor, degrees: Sequence[int]) -> int:
    return koszul_sign(degrees, sigma_permutation(node, d))


# ---------------------------------------------------------------------------
# Path sequences and the graded path-lexicographic order
# ---------------------------------------------------------------------------

def path_sequence(node: Node) -> tuple[tuple, ...]:
    """For each leaf, left to right, the word of generators from the root."""
    words: list[tuple] = []

    def walk(n: Node, prefix: tuple):
        word = prefix + (n[0],)
        for c in n[1]:
            if c is None:
                words.append(word)
            else:
                walk(c, word)

    walk(node, ())
    return tuple(words)


def generator_rank(gen: Generator) -> int:
    """Position in the order m_2 < d_1 < m_3 < d_2 < ... < m_{n+1} < d_n < ..."""
    sym = gen.symbol
    if sym.startswith("m") and sym[1:].isdigit():
        n = int(sym[1:])
        if n >= 2:
            return 2 * (n - 2)
    elif sym.startswith("d") and sym[1:].isdigit():
        n = int(sym[1:])
        if n >= 1:
            return 2 * n - 1
    raise ForeignGeneratorError(f"generator {sym!r} is not ordered")


def monomial_order_key(node: Node, arity: int | None = None, degree: int | None = None):
    """Sort key realizing the graded path-lexicographic order.

    Compares by arity, then total degree, then path sequences left to right,
    each word by length then generator ranks.
    """
    if arity is None:
        arity = node_arity(node)
    if degree is None:
        degree = sum(g.degree for g in vertex_labels(node))
    words = tuple(
        (len(w), tuple(generator_rank(g) for g in w)) for w in path_sequence(node)
    )
    return (arity, degree, words)
