"""Bipartite-graph view of grid cell patterns.

A pattern is a set of cells (i, j) of an m x n grid, read as edges of a
bipartite graph with left vertices the m rows and right vertices the n
columns.  This module provides circuit rank, regularity, spanning-tree
enumeration and sampling, fundamental cycles, and a canonical simple-cycle
representation.

Vertices are numbered 0..m-1 for rows and m..m+n-1 for columns internally;
cells are 1-based (i, j) pairs everywhere in the public interface.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Iterable, Iterator, Sequence

from .errors import CapExceededError

Cell = tuple[int, int]

DEFAULT_TREE_CAP = 10_000_000


@dataclass(frozen=True)
class Pattern:
    """An immutable cell subset of an m x n grid."""

    m: int
    n: int
    cells: frozenset[Cell]

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError("grid dimensions must be positive")
        for i, j in self.cells:
            if not (1 <= i <= self.m and 1 <= j <= self.n):
                raise ValueError(f"cell ({i}, {j}) outside the {self.m}x{self.n} grid")

    @classmethod
    def of(cls, m: int, n: int, cells: Iterable[Cell]) -> "Pattern":
        return cls(m, n, frozenset((int(i), int(j)) for i, j in cells))

    def sorted_cells(self) -> list[Cell]:
        return sorted(self.cells)

    def __len__(self) -> int:
        return len(self.cells)

    def __contains__(self, cell: Cell) -> bool:
        return cell in self.cells


class _DSU:
    __slots__ = ("parent",)

    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


def _vertex_ids(m: int, cells: Iterable[Cell]) -> list[tuple[int, int]]:
    return [(i - 1, m + j - 1) for i, j in cells]


def circuit_rank(pattern: Pattern) -> int:
    """|E| - |V(E)| + components(E), over non-isolated vertices only.

    Equals the minimum number of edge deletions that make the pattern
    acyclic; zero exactly for forests.
    """
    if not pattern.cells:
        return 0
    dsu = _DSU(pattern.m + pattern.n)
    touched: set[int] = set()
    merges = 0
    for a, b in _vertex_ids(pattern.m, pattern.cells):
        touched.add(a)
        touched.add(b)
        if dsu.union(a, b):
            merges += 1
    components = len(touched) - merges
    return len(pattern.cells) - len(touched) + components


def is_regular(pattern: Pattern, h: int) -> bool:
    """Whether the pattern becomes acyclic after deleting at most h cells."""
    if h < 0:
        raise ValueError("h must be >= 0")
    return circuit_rank(pattern) <= h


def is_spanning_tree(pattern: Pattern) -> bool:
    return len(pattern.cells) == pattern.m + pattern.n - 1 and circuit_rank(pattern) == 0


@dataclass(frozen=True)
class CycleRep:
    """An oriented simple cycle as an alternating cell sequence.

    ``cells`` lists 2k distinct cells; consecutive cells alternately share a
    column (even to odd position) and a row (odd to even, wrapping around).
    Odd 1-based positions carry sign +1 and even positions -1 in alternating
    sums.  The canonical orientation starts at the lexicographically smallest
    cell, whose successor is its unique column-neighbour.
    """

    cells: tuple[Cell, ...]

    def __post_init__(self):
        cs = self.cells
        if len(cs) < 4 or len(cs) % 2 != 0:
            raise ValueError("a simple cycle has 2k >= 4 cells")
        if len(set(cs)) != len(cs):
            raise ValueError("cycle cells must be distinct")
        k = len(cs) // 2
        for t in range(len(cs)):
            a = cs[t]
            b = cs[(t + 1) % len(cs)]
            if t % 2 == 0:
                if a[1] != b[1]:
                    raise ValueError(f"cells {a} and {b} must share a column")
            else:
                if a[0] != b[0]:
                    raise ValueError(f"cells {a} and {b} must share a row")
        if len({c[0] for c in cs}) != k or len({c[1] for c in cs}) != k:
            raise ValueError("cycle must visit k distinct rows and k distinct columns")

    @property
    def k(self) -> int:
        return len(self.cells) // 2

    @property
    def cell_set(self) -> frozenset[Cell]:
        return frozenset(self.cells)

    def signed_cells(self) -> Iterator[tuple[Cell, int]]:
        for t, cell in enumerate(self.cells):
            yield cell, (1 if t % 2 == 0 else -1)

    def reversed_(self) -> "CycleRep":
        """The opposite orientation, still a valid alternating sequence."""
        cs = self.cells
        L = len(cs)
        t = 1  # reversal read from any odd position keeps the format
        return CycleRep(tuple(cs[(t - s) % L] for s in range(L)))

    def canonical(self) -> "CycleRep":
        cs = self.cells
        L = len(cs)
        t = cs.index(min(cs))
        if t % 2 == 0:
            return CycleRep(tuple(cs[(t + s) % L] for s in range(L)))
        return CycleRep(tuple(cs[(t - s) % L] for s in range(L)))

    @classmethod
    def from_cell_set(cls, cells: Iterable[Cell]) -> "CycleRep":
        """Reconstruct the canonical cycle from an unordered cell set.

        Raises ValueError unless the cells form exactly one simple cycle.
        """
        cells = set(cells)
        by_row: dict[int, list[Cell]] = {}
        by_col: dict[int, list[Cell]] = {}
        for c in cells:
            by_row.setdefault(c[0], []).append(c)
            by_col.setdefault(c[1], []).append(c)
        if any(len(v) != 2 for v in by_row.values()) or any(len(v) != 2 for v in by_col.values()):
            raise ValueError("cell set is not a single simple cycle")
        start = min(cells)
        seq = [start]
        use_col = True
        cur = start
        while True:
            group = by_col[cur[1]] if use_col else by_row[cur[0]]
            nxt = group[0] if group[1] == cur else group[1]
            if nxt == start:
                break
            seq.append(nxt)
            cur = nxt
            use_col = not use_col
            if len(seq) > 2 * len(cells):
                raise ValueError("cell set is not a single simple cycle")
        if len(seq) != len(cells):
            raise ValueError("cell set is not a single simple cycle")
        return cls(tuple(seq))


def _tree_adjacency(tree: Pattern) -> dict[int, list[int]]:
    adj: dict[int, list[int]] = {}
    for a, b in _vertex_ids(tree.m, tree.cells):
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    return adj


def fundamental_cycle(tree: Pattern, extra: Cell) -> CycleRep:
    """The unique simple cycle in tree + extra, canonically oriented.

    ``tree`` must be acyclic, must not contain ``extra``, and must connect
    the row and column endpoints of ``extra``.
    """
    i, j = extra
    if not (1 <= i <= tree.m and 1 <= j <= tree.n):
        raise ValueError(f"cell ({i}, {j}) outside the grid")
    if extra in tree.cells:
        raise ValueError(f"cell ({i}, {j}) already belongs to the tree")
    if circuit_rank(tree) != 0:
        raise ValueError("tree pattern contains a cycle")
    adj = _tree_adjacency(tree)
    src = i - 1
    dst = tree.m + j - 1
    parent: dict[int, int] = {src: src}
    queue = [src]
    while queue and dst not in parent:
        nxt: list[int] = []
        for v in queue:
            for w in adj.get(v, ()):
                if w not in parent:
                    parent[w] = v
                    nxt.append(w)
        queue = nxt
    if dst not in parent:
        raise ValueError(f"endpoints of ({i}, {j}) are not connected in the tree")
    path = [dst]
    while path[-1] != src:
        path.append(parent[path[-1]])
    path.reverse()  # row i, col, row, ..., col j
    m = tree.m
    cells: list[Cell] = []
    for t in range(len(path) - 1):
        a, b = path[t], path[t + 1]
        if a < m:
            cells.append((a + 1, b - m + 1))
        else:
            cells.append((b + 1, a - m + 1))
    cells.append(extra)
    return CycleRep(tuple(cells)).canonical()


def cycle_union_size(tree: Pattern, extras: Sequence[Cell]) -> int:
    """Size of the union of the fundamental cycles of the given extra cells."""
    if not is_spanning_tree(tree):
        raise ValueError("pattern is not a spanning tree")
    if len(set(extras)) != len(extras):
        raise ValueError("extra cells must be distinct")
    if any(e in tree.cells for e in extras):
        raise ValueError("extra cells must avoid the tree")
    union: set[Cell] = set()
    for e in extras:
        union |= fundamental_cycle(tree, e).cell_set
    return len(union)


def spanning_tree_count(m: int, n: int) -> int:
    """Number of spanning trees of the complete bipartite graph K(m, n)."""
    return m ** (n - 1) * n ** (m - 1)


def _connected_all(m: int, n: int, edges: set[Cell]) -> bool:
    dsu = _DSU(m + n)
    comp = m + n
    for a, b in _vertex_ids(m, edges):
        if dsu.union(a, b):
            comp -= 1
    return comp == 1


def _bridges(m: int, n: int, edges: set[Cell]) -> set[Cell]:
    """Bridges via DFS lowpoints on the bipartite graph."""
    adj: dict[int, list[tuple[int, Cell]]] = {}
    for cell in edges:
        a, b = cell[0] - 1, m + cell[1] - 1
        adj.setdefault(a, []).append((b, cell))
        adj.setdefault(b, []).append((a, cell))
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    out: set[Cell] = set()
    counter = 0
    for root in adj:
        if root in index:
            continue
        # iterative DFS, tracking the edge used to enter each vertex
        stack: list[tuple[int, Cell | None, int]] = [(root, None, 0)]
        index[root] = low[root] = counter
        counter += 1
        while stack:
            v, via, ptr = stack[-1]
            if ptr < len(adj[v]):
                stack[-1] = (v, via, ptr + 1)
                w, cell = adj[v][ptr]
                if cell == via:
                    continue
                if w in index:
                    low[v] = min(low[v], index[w])
                else:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append((w, cell, 0))
            else:
                stack.pop()
                if stack:
                    u = stack[-1][0]
                    low[u] = min(low[u], low[v])
                    if low[v] > index[u]:
                        out.add(via)  # type: ignore[arg-type]
    return out


def enumerate_spanning_trees(m: int, n: int, cap: int = DEFAULT_TREE_CAP) -> Iterator[Pattern]:
    """Stream every spanning tree of K(m, n) exactly once.

    Recursive growth with bridge detection: a partial tree is extended by the
    smallest undecided edge, and edges that would close a cycle or that become
    bridges are pruned or forced.  Refuses upfront when the tree count
    m^(n-1) * n^(m-1) exceeds ``cap``.
    """
    if m < 1 or n < 1:
        raise ValueError("grid dimensions must be positive")
    total = spanning_tree_count(m, n)
    if total > cap:
        raise CapExceededError(f"K({m},{n}) has {total} spanning trees, above the cap of {cap}")
    target = m + n - 1
    graph: set[Cell] = {(i, j) for i in range(1, m + 1) for j in range(1, n + 1)}
    part: set[Cell] = _bridges(m, n, graph)

    def joins_connected(candidates: set[Cell], tree_edges: set[Cell]) -> set[Cell]:
        dsu = _DSU(m + n)
        for a, b in _vertex_ids(m, tree_edges):
            dsu.union(a, b)
        return {c for c in candidates if dsu.find(c[0] - 1) == dsu.find(m + c[1] - 1)}

    def rec(part: set[Cell], graph: set[Cell]) -> Iterator[Pattern]:
        if len(part) == target:
            yield Pattern(m, n, frozenset(part))
            return
        if not _connected_all(m, n, graph):
            return
        e = min(graph - part)
        # include e
        part.add(e)
        purged = joins_connected(graph - part, part)
        graph -= purged
        yield from rec(part, graph)
        graph |= purged
        part.remove(e)
        # exclude e
        graph.remove(e)
        if _connected_all(m, n, graph):
            forced = _bridges(m, n, graph) - part
            part |= forced
            purged2 = joins_connected(graph - part, part)
            graph -= purged2
            yield from rec(part, graph)
            graph |= purged2
            part -= forced
        graph.add(e)

    yield from rec(part, graph)


def random_spanning_tree(m: int, n: int, rng: random.Random) -> Pattern:
    """A random spanning tree of K(m, n) by Kruskal on shuffled edges."""
    edges = [(i, j) for i in range(1, m + 1) for j in range(1, n + 1)]
    rng.shuffle(edges)
    dsu = _DSU(m + n)
    chosen: list[Cell] = []
    for i, j in edges:
        if dsu.union(i - 1, m + j - 1):
            chosen.append((i, j))
            if len(chosen) == m + n - 1:
                break
    return Pattern(m, n, frozenset(chosen))


def enumerate_simple_cycles(m: int, n: int) -> Iterator[CycleRep]:
    """All simple cycles of the full m x n grid graph, canonically oriented.

    For each choice of k rows and k columns the k! (k-1)! / 2 distinct
    traversals are emitted once, with reflections deduplicated.
    """
    for k in range(2, min(m, n) + 1):
        for rows in combinations(range(1, m + 1), k):
            for cols in combinations(range(1, n + 1), k):
                for rperm in permutations(rows[1:]):
                    rseq = (rows[0],) + rperm
                    for cperm in permutations(cols):
                        if cperm[0] > cperm[-1]:
                            continue  # reflection already emitted
                        cells = []
                        for t in range(k):
                            cells.append((rseq[t], cperm[t]))
                            cells.append((rseq[(t + 1) % k], cperm[t]))
                        yield CycleRep(tuple(cells)).canonical()
