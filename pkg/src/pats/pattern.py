"""Rectangular color patterns: parsing, rendering, cell access.

A pattern assigns a color to every cell of a w x h grid. Cells are
addressed by (x, y) with x in 1..w, y in 1..h and (1, 1) the bottom-left
cell; the seed of an assembly system occupies row 0 and column 0. Text
files list the top row first because humans read top-down.

Color identity is the dense integer id; glyphs are presentation only.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import FormatError


@dataclass(frozen=True)
class Color:
    """A pattern color: dense id plus single-character display glyph."""

    id: int
    glyph: str


@dataclass(frozen=True)
class Pattern:
    """An immutable w x h grid of dense color ids.

    ``rows`` stores the bottom row first, so ``rows[y-1][x-1]`` is the
    cell at (x, y). Ids are assigned 0..k-1 by first occurrence in
    reading order (top row first, left to right).
    """

    width: int
    height: int
    rows: tuple[tuple[int, ...], ...]
    glyphs: tuple[str, ...]

    def __post_init__(self) -> None:
        if self.width < 1 or self.height < 1:
            raise FormatError("pattern must be at least 1x1")
        if len(self.rows) != self.height:
            raise FormatError("row count does not match height")
        if any(len(r) != self.width for r in self.rows):
            raise FormatError("row width does not match declared width")
        if len(set(self.glyphs)) != len(self.glyphs):
            raise FormatError("glyphs must be pairwise distinct")
        ids = {c for row in self.rows for c in row}
        if ids and (min(ids) < 0 or max(ids) >= len(self.glyphs)):
            raise FormatError("cell color id outside glyph table")

    @classmethod
    def from_glyph_rows(cls, rows_top_first: list[str]) -> "Pattern":
        """Build a pattern from glyph strings, top row first."""
        if not rows_top_first:
            raise FormatError("empty pattern")
        width = len(rows_top_first[0])
        if width == 0:
            raise FormatError("empty pattern row")
        if any(len(r) != width for r in rows_top_first):
            raise FormatError("ragged pattern rows")
        ids: dict[str, int] = {}
        for line in rows_top_first:
            for ch in line:
                if not ch.isprintable() or ch.isspace():
                    raise FormatError(f"glyph {ch!r} is not printable")
                ids.setdefault(ch, len(ids))
        rows = tuple(
            tuple(ids[ch] for ch in line) for line in reversed(rows_top_first)
        )
        glyphs = tuple(sorted(ids, key=ids.get))
        return cls(width, len(rows_top_first), rows, glyphs)

    def cell(self, x: int, y: int) -> int:
        """Color id at (x, y); (1, 1) is the bottom-left cell."""
        if not (1 <= x <= self.width and 1 <= y <= self.height):
            raise IndexError(f"({x}, {y}) outside {self.width}x{self.height} pattern")
        return self.rows[y - 1][x - 1]

    def glyph_at(self, x: int, y: int) -> str:
        return self.glyphs[self.cell(x, y)]

    def column(self, x: int) -> tuple[int, ...]:
        """Color ids of column x, bottom to top."""
        return tuple(self.rows[y][x - 1] for y in range(self.height))

    @property
    def color_count(self) -> int:
        return len(self.glyphs)

    @property
    def colors(self) -> tuple[Color, ...]:
        return tuple(Color(i, g) for i, g in enumerate(self.glyphs))


def parse_pattern(text: str) -> Pattern:
    """Parse multi-line pattern text; the first line is the top row.

    Every line must have the same nonzero length. A single trailing
    newline is tolerated so files round-trip.
    """
    if text.endswith("\n"):
        text = text[:-1]
    if not text:
        raise FormatError("empty pattern text")
    return Pattern.from_glyph_rows(text.split("\n"))


def render_pattern(p: Pattern) -> str:
    """Inverse of parse_pattern: glyph lines, top row first, no trailing newline."""
    return "\n".join(
        "".join(p.glyphs[c] for c in p.rows[y]) for y in range(p.height - 1, -1, -1)
    )
