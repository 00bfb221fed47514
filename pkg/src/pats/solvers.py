"""Exact pattern-synthesis solvers.

``dp_verify`` checks one directed tile set against a pattern column by
column: every feasible predecessor column extends under each candidate
seed glue, deterministic growth fills the column, and mismatching or
stalling columns drop out. ``solve_nonuniform`` searches canonical tile
sets for the minimum size, ``solve_uniform_h1`` solves height-1 uniform
instances through the longest repeated suffix, and ``brute_force_min``
(module ``brute``) is the independent oracle for both.

The canonical search identifies tiles up to glue renaming: cells are
partitioned into tile classes, glue slots are unified exactly where
adjacency forces equality, and a class assignment is feasible when no
two classes are forced to share both west and south glues. Assigning a
distinct glue to every class then yields a directed witness, so minima
over partitions equal minima over tile sets. Enumerating glue values
directly, as a literal reading would have it, is hopeless even at desk
scale (set partitions of 4k glue slots).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import BudgetExhausted, NotDirected, ValidationError
from .pattern import Pattern
from .tiles import Rtas, Seed, TileType, is_directed

_W, _N, _E, _S = 0, 1, 2, 3


@dataclass(frozen=True)
class SolveResult:
    """Minimum size, a witness system reaching it, and search counters."""

    min_size: int
    witness: Optional[Rtas]
    stats: dict = field(default_factory=dict)


def dp_verify(
    tiles: Iterable[TileType],
    pattern: Pattern,
    seed: Optional[Seed] = None,
    return_seed: bool = False,
):
    """Does the tile set deterministically assemble the pattern?

    ``seed=None`` quantifies over seeds, choosing the north seed glue
    per column and the left-arm glues freely (the realizing seed is
    returned when ``return_seed`` is set). A fixed seed pins both arms.
    Candidate seed glues range over the south glues present in the tile
    set: any other glue admits no attachment at all, so one missing
    glue stands in for every absent one.
    """
    tile_set = frozenset(tiles)
    if not is_directed(tile_set):
        raise NotDirected("dp verification requires a directed tile set")
    index = {(t.west, t.south): t for t in tile_set}
    h = pattern.height
    free = seed is None

    def grow_column(x: int, wests: tuple, bottom: str):
        col = []
        south = bottom
        for y in range(1, h + 1):
            t = index.get((wests[y - 1], south))
            if t is None or t.color != pattern.glyph_at(x, y):
                return None
            col.append(t)
            south = t.north
        return tuple(col)

    souths = sorted({t.south for t in tile_set})
    layers: list[dict] = []
    first: dict = {}
    if free:
        ordered = sorted(tile_set)

        def rec(y: int, stack: list) -> None:
            if y > h:
                col = tuple(stack)
                first.setdefault(col, (None, tuple(t.west for t in stack)))
                return
            for t in ordered:
                if t.color != pattern.glyph_at(1, y):
                    continue
                if y > 1 and t.south != stack[-1].north:
                    continue
                stack.append(t)
                rec(y + 1, stack)
                stack.pop()

        rec(1, [])
    else:
        wests = tuple(seed.west_glue(y) for y in range(1, h + 1))
        col = grow_column(1, wests, seed.below_glue(1))
        if col is not None:
            first[col] = (None, wests)
    layers.append(first)

    for x in range(2, pattern.width + 1):
        nxt: dict = {}
        for prev in layers[-1]:
            wests = tuple(t.east for t in prev)
            bottoms = souths if free else [seed.below_glue(x)]
            for b in bottoms:
                col = grow_column(x, wests, b)
                if col is not None:
                    nxt.setdefault(col, (prev, b))
        layers.append(nxt)
        if not nxt:
            break

    ok = len(layers) == pattern.width and bool(layers[-1])
    if not return_seed:
        return ok
    if not ok:
        return False, None
    seq = sorted(layers[-1])[0]
    bottoms_rev: list[str] = []
    left: tuple = ()
    for x in range(pattern.width, 0, -1):
        prev, info = layers[x - 1][seq]
        if x == 1:
            left = info
            bottoms_rev.append(seq[0].south)
        else:
            bottoms_rev.append(info)
        seq = prev
    realized = Seed.nonuniform(tuple(reversed(bottoms_rev)), left)
    return True, realized


class _UnionFind:
    """Union by rank with an undo trail; no path compression."""

    def __init__(self) -> None:
        self.parent: list[int] = []
        self.rank: list[int] = []
        self.trail: list[tuple[int, int]] = []

    def add(self) -> int:
        self.parent.append(len(self.parent))
        self.rank.append(0)
        return len(self.parent) - 1

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            i = self.parent[i]
        return i

    def union(self, i: int, j: int) -> None:
        ri, rj = self.find(i), self.find(j)
        if ri == rj:
            self.trail.append((-1, -1))
            return
        if self.rank[ri] < self.rank[rj]:
            ri, rj = rj, ri
        self.parent[rj] = ri
        if self.rank[ri] == self.rank[rj]:
            self.rank[ri] += 1
            self.trail.append((rj, ri))
        else:
            self.trail.append((rj, -1))

    def mark(self) -> int:
        return len(self.trail)

    def undo(self, mark: int) -> None:
        while len(self.trail) > mark:
            child, bumped = self.trail.pop()
            if child >= 0:
                self.parent[child] = child
            if bumped >= 0:
                self.rank[bumped] -= 1

    def shrink(self, size: int) -> None:
        del self.parent[size:], self.rank[size:]


class _CanonicalSearch:
    """Column-major search over canonical tile classes for one pattern.

    Block ids are assigned in first-use order, so each set partition of
    the cells is visited once. ``prefix`` replays a partial assignment
    (used by the parallel frontier split); ``stop_depth`` collects the
    viable partial assignments at a fixed depth instead of recursing.
    """

    def __init__(self, pattern: Pattern, uniform: bool):
        self.p = pattern
        self.uniform = uniform
        self.cells = [
            (x, y)
            for x in range(1, pattern.width + 1)
            for y in range(1, pattern.height + 1)
        ]
        self.colors = [pattern.cell(x, y) for x, y in self.cells]
        # distinct colors among cells i.. for the new-block lower bound
        self.suffix_colors: list[frozenset[int]] = []
        acc: frozenset[int] = frozenset()
        for c in reversed(self.colors):
            acc = acc | {c}
            self.suffix_colors.append(acc)
        self.suffix_colors.reverse()
        self.suffix_colors.append(frozenset())

    def search(
        self,
        k: int,
        nodes: list[int],
        prefix: tuple[int, ...] = (),
        stop_depth: Optional[int] = None,
        frontier: Optional[list[tuple[int, ...]]] = None,
    ) -> Optional[list[int]]:
        uf = _UnionFind()
        assign: list[int] = []
        block_color: list[int] = []
        slots: list[list[int]] = []
        ell = [-1, -1]  # uniform seed slot anchors: bottom arm, left arm

        def directed_all_ok() -> bool:
            seen: dict[tuple[int, int], int] = {}
            for b in range(len(slots)):
                key = (uf.find(slots[b][_W]), uf.find(slots[b][_S]))
                if key in seen:
                    return False
                seen[key] = b
            return True

        def apply(i: int, b: int) -> bool:
            """Assign cell i to block b (creating it if needed) and merge."""
            x, y = self.cells[i]
            if b == len(block_color):
                block_color.append(self.colors[i])
                slots.append([uf.add() for _ in range(4)])
            assign.append(b)
            if x > 1:
                left = assign[i - self.p.height]
                uf.union(slots[left][_E], slots[b][_W])
            if y > 1:
                below = assign[i - 1]
                uf.union(slots[below][_N], slots[b][_S])
            if self.uniform:
                if y == 1:
                    if ell[0] < 0:
                        ell[0] = slots[b][_S]
                    else:
                        uf.union(ell[0], slots[b][_S])
                if x == 1:
                    if ell[1] < 0:
                        ell[1] = slots[b][_W]
                    else:
                        uf.union(ell[1], slots[b][_W])
            return directed_all_ok()

        for i, b in enumerate(prefix):
            if b > len(block_color):
                return None
            if b < len(block_color) and block_color[b] != self.colors[i]:
                return None
            if not apply(i, b):
                return None

        def place(i: int) -> Optional[list[int]]:
            if i == len(self.cells):
                return list(assign)
            if frontier is not None and i == stop_depth:
                frontier.append(tuple(assign))
                return None
            nodes[0] += 1
            color = self.colors[i]
            have = set(block_color)
            missing = sum(1 for c in self.suffix_colors[i] if c not in have)
            if len(block_color) + missing > k:
                return None
            options = [b for b in range(len(block_color)) if block_color[b] == color]
            if len(block_color) < k:
                options.append(len(block_color))
            for b in options:
                mark = uf.mark()
                saved_ell = (ell[0], ell[1])
                new = b == len(block_color)
                if apply(i, b):
                    found = place(i + 1)
                    if found is not None:
                        return found
                assign.pop()
                uf.undo(mark)
                ell[0], ell[1] = saved_ell
                if new:
                    block_color.pop()
                    slots.pop()
                    uf.shrink(len(uf.parent) - 4)
            return None

        return place(len(prefix))

    def witness(self, k: int, nodes: list[int]) -> Optional[Rtas]:
        """Run the search and convert a found assignment to a system."""
        assignment = self.search(k, nodes)
        if assignment is None:
            return None
        return _witness_from_assignment(self.p, self.uniform, assignment)


def _witness_from_assignment(
    pattern: Pattern, uniform: bool, assignment: list[int]
) -> Rtas:
    """Distinct glue per forced-equality class; seed from boundary classes."""
    cells = [
        (x, y)
        for x in range(1, pattern.width + 1)
        for y in range(1, pattern.height + 1)
    ]
    blocks = sorted(set(assignment))
    uf = _UnionFind()
    slots = {b: [uf.add() for _ in range(4)] for b in blocks}
    pos: dict[tuple[int, int], int] = {}
    for (x, y), b in zip(cells, assignment):
        pos[(x, y)] = b
        if x > 1:
            uf.union(slots[pos[(x - 1, y)]][_E], slots[b][_W])
        if y > 1:
            uf.union(slots[pos[(x, y - 1)]][_N], slots[b][_S])
        if uniform:
            if y == 1:
                uf.union(slots[pos[(1, 1)]][_S], slots[b][_S])
            if x == 1:
                uf.union(slots[pos[(1, 1)]][_W], slots[b][_W])

    def glue(slot: int) -> str:
        return f"g{uf.find(slot)}"

    color_of = {b: None for b in blocks}
    for (x, y), b in zip(cells, assignment):
        color_of[b] = pattern.glyph_at(x, y)
    tiles = frozenset(
        TileType(
            color_of[b],
            glue(slots[b][_N]),
            glue(slots[b][_E]),
            glue(slots[b][_S]),
            glue(slots[b][_W]),
        )
        for b in blocks
    )
    if uniform:
        seed = Seed.uniform(
            east=glue(slots[pos[(1, 1)]][_S]), north=glue(slots[pos[(1, 1)]][_W])
        )
    else:
        seed = Seed.nonuniform(
            tuple(glue(slots[pos[(x, 1)]][_S]) for x in range(1, pattern.width + 1)),
            tuple(glue(slots[pos[(1, y)]][_W]) for y in range(1, pattern.height + 1)),
        )
    return Rtas(tiles, seed, pattern.width, pattern.height)


def _probe_prefix(args) -> Optional[list[int]]:
    """Worker for the parallel frontier split: finish one subtree."""
    pattern, uniform, k, prefix = args
    return _CanonicalSearch(pattern, uniform).search(k, [0], prefix=prefix)


def _search_size(
    searcher: _CanonicalSearch, k: int, nodes: list[int], threads: int
) -> Optional[list[int]]:
    if threads <= 1:
        return searcher.search(k, nodes)
    depth = min(len(searcher.cells), 4)
    frontier: list[tuple[int, ...]] = []
    searcher.search(k, nodes, stop_depth=depth, frontier=frontier)
    if len(frontier) <= 1:
        return searcher.search(k, nodes)
    import concurrent.futures

    jobs = [(searcher.p, searcher.uniform, k, pre) for pre in frontier]
    with concurrent.futures.ProcessPoolExecutor(max_workers=threads) as pool:
        for result in pool.map(_probe_prefix, jobs):
            if result is not None:
                return result
    return None


def solve_nonuniform(
    pattern: Pattern,
    budget_cap: Optional[int] = None,
    threads: int = 1,
) -> SolveResult:
    """Minimum directed tile-set size assembling the pattern, any seed.

    Iterative deepening from the color count up to min(w*h, h*c^h),
    both of which always admit a solution; ``budget_cap`` cuts the
    deepening short and raises BudgetExhausted when no solution fits.
    Every size below the answer is exhausted, so the result is exact.
    ``threads`` > 1 splits the search frontier over worker processes.
    """
    c = pattern.color_count
    upper = min(pattern.width * pattern.height, pattern.height * c**pattern.height)
    limit = upper if budget_cap is None else min(upper, budget_cap)
    start = time.perf_counter()
    nodes = [0]
    searcher = _CanonicalSearch(pattern, uniform=False)
    for k in range(c, limit + 1):
        assignment = _search_size(searcher, k, nodes, threads)
        if assignment is not None:
            witness = _witness_from_assignment(pattern, False, assignment)
            if not dp_verify(witness.tiles, pattern, seed=witness.seed):
                raise AssertionError("canonical search produced a bad witness")
            return SolveResult(
                k,
                witness,
                {"nodes": nodes[0], "seconds": time.perf_counter() - start},
            )
    raise BudgetExhausted(f"no tile set of size <= {limit} assembles the pattern")


def _longest_repeated_suffix(word: tuple[int, ...]) -> int:
    """Length of the longest proper suffix occurring at least twice.

    A suffix repeats iff the reversed word's same-length prefix occurs
    at a positive offset; that predicate is monotone in the length, so
    binary search over C-speed substring search decides it. Falls back
    to the classic prefix-function scan when colors exceed one byte.
    """
    n = len(word)
    if n <= 1:
        return 0
    rev = word[::-1]
    if max(rev) < 256:
        data = bytes(rev)
        lo, hi = 0, n - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if data.find(data[:mid], 1) != -1:
                lo = mid
            else:
                hi = mid - 1
        return lo
    pi = [0] * n
    best = 0
    j = 0
    for i in range(1, n):
        while j and rev[i] != rev[j]:
            j = pi[j - 1]
        if rev[i] == rev[j]:
            j += 1
        pi[i] = j
        if j > best:
            best = j
    return best


def solve_uniform_h1(pattern: Pattern, build_witness: bool = True) -> SolveResult:
    """Uniform-seed minimum for height-1 patterns via suffix structure.

    With y the longest repeated suffix, m = n - |y| types are necessary
    (pigeonhole: fewer types repeat a tile, producing a longer repeated
    suffix) and sufficient: hardcode the prefix before x = zy and tile
    the periodic tail with a cycle of |z| types, z the primitive period.
    """
    if pattern.height != 1:
        raise ValidationError("suffix solver only applies to height-1 patterns")
    start = time.perf_counter()
    word = pattern.rows[0]
    n = len(word)
    y_len = _longest_repeated_suffix(word)
    m = n - y_len
    witness = None
    if build_witness:
        glyph = pattern.glyphs
        tiles: list[TileType] = []
        if y_len == 0:
            for x in range(n):
                west = "0" if x == 0 else f"g{x}"
                east = f"g{x + 1}"
                tiles.append(TileType(glyph[word[x]], "0", east, "0", west))
            seed = Seed.uniform("0", "0")
        else:
            if max(word) < 256:
                data = bytes(word)
                i_star = data.rfind(data[n - y_len :], 0, n - 1)
            else:
                suffix = word[n - y_len :]
                i_star = next(
                    i
                    for i in range(n - y_len - 1, -1, -1)
                    if word[i : i + y_len] == suffix
                )
            z_len = (n - y_len) - i_star
            for x in range(i_star):
                west = "0" if x == 0 else f"g{x}"
                east = f"g{x + 1}" if x < i_star - 1 else "c0"
                tiles.append(TileType(glyph[word[x]], "0", east, "0", west))
            for j in range(z_len):
                tiles.append(
                    TileType(
                        glyph[word[i_star + j]],
                        "0",
                        f"c{(j + 1) % z_len}",
                        "0",
                        f"c{j}",
                    )
                )
            seed = Seed.uniform("0", "c0" if i_star == 0 else "0")
        witness = Rtas(frozenset(tiles), seed, n, 1)
    return SolveResult(m, witness, {"seconds": time.perf_counter() - start})
