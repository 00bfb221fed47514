"""Independent exact minimum oracle for pattern synthesis.

Deliberately separate from the solvers module: cells are walked
row-major instead of column-major, the minimum is found by branch and
bound instead of iterative deepening, forced glue equalities are
recomputed from scratch at every node instead of kept incrementally,
and the winning tile set is confirmed through the assembly simulator
(``uniquely_assembles``), never through the column DP.
"""

from __future__ import annotations

from typing import Optional

from .errors import CapExceeded
from .pattern import Pattern
from .tiles import Rtas, Seed, TileType, uniquely_assembles

NONUNIFORM = "nonuniform"
UNIFORM = "uniform"

_MAX_CELLS = 24


def _roots(slot_count: int, merges: list[tuple[int, int]]) -> list[int]:
    """Plain union-find rebuilt from the merge list."""
    parent = list(range(slot_count))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a, b in merges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    return [find(i) for i in range(slot_count)]


def _directed_classes_ok(blocks: int, roots: list[int]) -> bool:
    seen = set()
    for b in range(blocks):
        key = (roots[4 * b], roots[4 * b + 3])
        if key in seen:
            return False
        seen.add(key)
    return True


def _merges_for(
    pattern: Pattern, assign: list[int], uniform: bool
) -> list[tuple[int, int]]:
    """Forced glue equalities of a (partial) row-major assignment.

    Block b owns slots 4b..4b+3 in order west, north, east, south.
    """
    w = pattern.width
    merges: list[tuple[int, int]] = []
    for i, b in enumerate(assign):
        x, y = i % w + 1, i // w + 1
        if x > 1:
            merges.append((4 * assign[i - 1] + 2, 4 * b))
        if y > 1:
            merges.append((4 * assign[i - w] + 1, 4 * b + 3))
        if uniform:
            if y == 1 and i > 0:
                merges.append((4 * assign[0] + 3, 4 * b + 3))
            if x == 1 and i > 0:
                merges.append((4 * assign[0], 4 * b))
    return merges


def _witness(pattern: Pattern, assign: list[int], uniform: bool) -> Rtas:
    w = pattern.width
    blocks = max(assign) + 1
    roots = _roots(4 * blocks, _merges_for(pattern, assign, uniform))
    color: dict[int, str] = {}
    for i, b in enumerate(assign):
        color[b] = pattern.glyph_at(i % w + 1, i // w + 1)
    tiles = frozenset(
        TileType(
            color[b],
            f"h{roots[4 * b + 1]}",
            f"h{roots[4 * b + 2]}",
            f"h{roots[4 * b + 3]}",
            f"h{roots[4 * b]}",
        )
        for b in range(blocks)
    )
    cell_block = {(i % w + 1, i // w + 1): b for i, b in enumerate(assign)}
    if uniform:
        seed = Seed.uniform(
            east=f"h{roots[4 * cell_block[(1, 1)] + 3]}",
            north=f"h{roots[4 * cell_block[(1, 1)]]}",
        )
    else:
        seed = Seed.nonuniform(
            tuple(f"h{roots[4 * cell_block[(x, 1)] + 3]}" for x in range(1, w + 1)),
            tuple(
                f"h{roots[4 * cell_block[(1, y)]]}" for y in range(1, pattern.height + 1)
            ),
        )
    return Rtas(tiles, seed, w, pattern.height)


def brute_force_min(
    pattern: Pattern, variant: str = NONUNIFORM, node_cap: int = 5_000_000
) -> int:
    """Exact minimum tile-set size by exhaustive canonical enumeration.

    Enumerates every partition of the cells into same-colored tile
    classes (class ids in first-use order, so each partition once),
    keeps the partitions whose forced glue identifications leave all
    (west, south) class pairs distinct, and returns the least class
    count. The corresponding witness must pass ``uniquely_assembles``
    or the oracle aborts. Intended for tiny patterns only.
    """
    if variant not in (NONUNIFORM, UNIFORM):
        raise ValueError(f"unknown variant {variant!r}")
    uniform = variant == UNIFORM
    w, h = pattern.width, pattern.height
    if w * h > _MAX_CELLS:
        raise CapExceeded(f"pattern has more than {_MAX_CELLS} cells")
    n = w * h
    cell_colors = [pattern.cell(i % w + 1, i // w + 1) for i in range(n)]
    best: list = [n + 1, None]
    nodes = [0]

    def extend(assign: list[int], blocks: list[int]) -> None:
        nodes[0] += 1
        if nodes[0] > node_cap:
            raise CapExceeded(f"brute force exceeded {node_cap} nodes")
        i = len(assign)
        if len(blocks) >= best[0]:
            return
        if i == n:
            best[0] = len(blocks)
            best[1] = list(assign)
            return
        choices = [b for b in range(len(blocks)) if blocks[b] == cell_colors[i]]
        choices.append(len(blocks))
        for b in choices:
            new = b == len(blocks)
            if new and len(blocks) + 1 >= best[0]:
                continue
            assign.append(b)
            if new:
                blocks.append(cell_colors[i])
            roots = _roots(4 * len(blocks), _merges_for(pattern, assign, uniform))
            if _directed_classes_ok(len(blocks), roots):
                extend(assign, blocks)
            assign.pop()
            if new:
                blocks.pop()

    extend([], [])
    if best[1] is None:
        raise AssertionError("no feasible partition found; all-distinct must work")
    witness = _witness(pattern, best[1], uniform)
    if not uniquely_assembles(witness, pattern):
        raise AssertionError("oracle witness failed simulation check")
    return best[0]
