"""Tile types, seeds, and rectilinear self-assembly.

A tile of type t attaches at (x, y) when both (x-1, y) and (x, y-1) are
already present and the east glue of the west neighbor equals t's west
glue while the north glue of the south neighbor equals t's south glue.
Growth therefore proceeds from the southwest corner and the filled
region is always downward-closed in both axes.

Glues are opaque strings; equality is their only meaning. Seeds store
only the inward-facing glues (north glues of the bottom arm, east glues
of the left arm) since nothing else about the seed affects assembly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import CapExceeded, NotDirected, ValidationError
from .pattern import Pattern

Glue = str


@dataclass(frozen=True, order=True)
class TileType:
    """A colored unit square; identity is the full color + glue 5-tuple."""

    color: str
    north: Glue
    east: Glue
    south: Glue
    west: Glue


@dataclass(frozen=True)
class Seed:
    """L-shaped seed, reduced to the glues it exposes inward.

    Non-uniform seeds carry one glue per bottom-arm and left-arm
    position. Uniform seeds expose a single glue along each arm; the
    field names ``east`` and ``north`` follow the seed record format
    (``seed uniform east=<g> north=<g>``): ``east`` faces up from the
    bottom arm, ``north`` faces right from the left arm.
    """

    bottom: Optional[tuple[Glue, ...]] = None
    left: Optional[tuple[Glue, ...]] = None
    east: Optional[Glue] = None
    north: Optional[Glue] = None

    @classmethod
    def uniform(cls, east: Glue = "0", north: Glue = "0") -> "Seed":
        return cls(east=east, north=north)

    @classmethod
    def nonuniform(cls, bottom: Iterable[Glue], left: Iterable[Glue]) -> "Seed":
        return cls(bottom=tuple(bottom), left=tuple(left))

    @property
    def is_uniform(self) -> bool:
        return self.bottom is None

    def below_glue(self, x: int) -> Glue:
        """Glue exposed upward beneath column x."""
        return self.east if self.bottom is None else self.bottom[x - 1]

    def west_glue(self, y: int) -> Glue:
        """Glue exposed eastward left of row y."""
        return self.north if self.left is None else self.left[y - 1]


@dataclass(frozen=True)
class Rtas:
    """A rectilinear tile assembly system confined to a w x h rectangle."""

    tiles: frozenset[TileType]
    seed: Seed
    width: int
    height: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "tiles", frozenset(self.tiles))
        if self.width < 1 or self.height < 1:
            raise ValidationError("system must be at least 1x1")
        if not self.seed.is_uniform:
            if len(self.seed.bottom) != self.width:
                raise ValidationError("seed bottom arm length != width")
            if len(self.seed.left) != self.height:
                raise ValidationError("seed left arm length != height")


@dataclass(frozen=True)
class Assembly:
    """A partial placement of tiles, stored as sorted (x, y, tile) triples."""

    cells: tuple[tuple[int, int, TileType], ...]

    @classmethod
    def from_dict(cls, placements: dict[tuple[int, int], TileType]) -> "Assembly":
        return cls(tuple(sorted((x, y, t) for (x, y), t in placements.items())))

    def get(self, x: int, y: int) -> Optional[TileType]:
        return self.as_dict().get((x, y))

    def as_dict(self) -> dict[tuple[int, int], TileType]:
        d = self.__dict__.get("_as_dict")
        if d is None:
            d = {(x, y): t for x, y, t in self.cells}
            self.__dict__["_as_dict"] = d
        return d

    def __len__(self) -> int:
        return len(self.cells)

    def is_total(self, width: int, height: int) -> bool:
        return len(self.cells) == width * height

    def matches_pattern(self, p: Pattern) -> bool:
        """Total on the pattern rectangle and color-identical to it."""
        if not self.is_total(p.width, p.height):
            return False
        return all(t.color == p.glyph_at(x, y) for x, y, t in self.cells)


def is_directed(tiles: Iterable[TileType]) -> bool:
    """True iff no two distinct types share both west and south glues."""
    seen: set[tuple[Glue, Glue]] = set()
    for t in set(tiles):
        key = (t.west, t.south)
        if key in seen:
            return False
        seen.add(key)
    return True


def _attach_index(tiles: Iterable[TileType]) -> dict[tuple[Glue, Glue], TileType]:
    return {(t.west, t.south): t for t in tiles}


def simulate(rtas: Rtas, order: str = "column") -> Assembly:
    """Grow the unique terminal assembly of a directed system.

    ``order`` selects the internal fill order (``column`` or ``row``);
    confluence of directed systems makes the result identical either
    way, which the test suite checks.
    """
    if not is_directed(rtas.tiles):
        raise NotDirected("simulate requires a directed tile set")
    index = _attach_index(rtas.tiles)
    seed = rtas.seed
    placed: dict[tuple[int, int], TileType] = {}
    if order == "column":
        prev_height = rtas.height
        for x in range(1, rtas.width + 1):
            h = 0
            for y in range(1, prev_height + 1):
                west = seed.west_glue(y) if x == 1 else placed[(x - 1, y)].east
                south = seed.below_glue(x) if y == 1 else placed[(x, y - 1)].north
                t = index.get((west, south))
                if t is None:
                    break
                placed[(x, y)] = t
                h = y
            prev_height = h
            if h == 0:
                break
    elif order == "row":
        prev_width = rtas.width
        for y in range(1, rtas.height + 1):
            w = 0
            for x in range(1, prev_width + 1):
                west = seed.west_glue(y) if x == 1 else placed[(x - 1, y)].east
                south = seed.below_glue(x) if y == 1 else placed[(x, y - 1)].north
                t = index.get((west, south))
                if t is None:
                    break
                placed[(x, y)] = t
                w = x
            prev_width = w
            if w == 0:
                break
    else:
        raise ValueError(f"unknown order {order!r}")
    return Assembly.from_dict(placed)


def brute_force_terminal_assemblies(rtas: Rtas, cap: int = 10_000) -> frozenset[Assembly]:
    """Exact set of terminal assemblies by exhaustive choice enumeration.

    Works for non-directed systems; used as the confluence oracle for
    directed ones. Enumerates column by column, branching over every
    attachable tile per cell, memoized on the (column, west frontier)
    so shared suffixes are computed once. Raises CapExceeded when more
    than ``cap`` terminal assemblies exist.
    """
    seed = rtas.seed
    by_ws: dict[tuple[Glue, Glue], list[TileType]] = {}
    for t in sorted(rtas.tiles):
        by_ws.setdefault((t.west, t.south), []).append(t)

    # memo: (x, east glues of the previous column, usable height) ->
    # tuple of suffix placements, each a tuple of ((x, y), tile) pairs
    memo: dict[tuple, tuple] = {}

    def column_options(x: int, wests: tuple[Glue, ...]) -> list[tuple[TileType, ...]]:
        """All maximal ways to fill column x against the given west glues."""
        results: list[tuple[TileType, ...]] = []

        def grow(y: int, stack: list[TileType]) -> None:
            if y > len(wests):
                results.append(tuple(stack))
                return
            south = seed.below_glue(x) if y == 1 else stack[-1].north
            options = by_ws.get((wests[y - 1], south), [])
            if not options:
                results.append(tuple(stack))
                return
            for t in options:
                stack.append(t)
                grow(y + 1, stack)
                stack.pop()

        grow(1, [])
        return results

    def suffixes(x: int, wests: tuple[Glue, ...]) -> tuple:
        if x > rtas.width or not wests:
            return ((),)
        key = (x, wests)
        hit = memo.get(key)
        if hit is not None:
            return hit
        out = []
        for col in column_options(x, wests):
            head = tuple(((x, y + 1), t) for y, t in enumerate(col))
            for tail in suffixes(x + 1, tuple(t.east for t in col)):
                out.append(head + tail)
                if len(out) > cap:
                    raise CapExceeded(f"more than {cap} terminal assemblies")
        result = tuple(out)
        memo[key] = result
        return result

    initial_wests = tuple(seed.west_glue(y) for y in range(1, rtas.height + 1))
    assemblies = frozenset(
        Assembly.from_dict(dict(s)) for s in suffixes(1, initial_wests)
    )
    if len(assemblies) > cap:
        raise CapExceeded(f"more than {cap} terminal assemblies")
    return assemblies


def uniquely_assembles(rtas: Rtas, p: Pattern, cap: int = 10_000) -> bool:
    """True iff every terminal assembly is total and color-equal to p.

    Directed systems are checked with one simulation; others fall back
    to exhaustive terminal enumeration (CapExceeded propagates).
    """
    if (rtas.width, rtas.height) != (p.width, p.height):
        raise ValidationError("system dimensions do not match pattern")
    if is_directed(rtas.tiles):
        return simulate(rtas).matches_pattern(p)
    terminals = brute_force_terminal_assemblies(rtas, cap)
    return all(a.matches_pattern(p) for a in terminals)
