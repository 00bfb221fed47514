"""Instance generators for the hardness pipeline.

Two stages: 3-partition instances become encoding-by-FST instances
whose only freedom is where n groups of "rods" (runs of free states)
sit inside n state "boxes"; those FST instances then become height-2
pattern-synthesis instances in three flavors (non-uniform two-row,
uniform mirrored, and uniform 3-color).

State positions are 1-based throughout this module, matching the
s_1..s_K naming used in instance text; transducer states are the same
positions minus one.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import (
    MissingOrder,
    PackingError,
    ValidationError,
    VariantError,
)
from .fst import (
    MODIFIED,
    PLAIN,
    PROMISE,
    Fst,
    FstEncodingInstance,
    FstSkeleton,
    ThreePartitionInstance,
    Transition,
    transduce,
)
from .pattern import Pattern
from .tiles import Rtas, Seed, TileType

SEG_INITIAL = "initial"
SEG_ZERO_ONE = "zero-one"
SEG_SINGLETON = "fixed-singleton"
SEG_TRIPLE = "half-fixed-triple"
SEG_INTERVAL = "half-fixed-interval"
SEG_MODIFIED_PREFIX = "modified-prefix"

NONUNIFORM = "nonuniform"
UNIFORM = "uniform"
UNIFORM3 = "uniform3"

CYAN, GRAY, ORANGE, PINK, RED, WHITE, BLACK = "c", "g", "o", "p", "r", "w", "b"

_RESERVED_GLYPHS = set("cgoprwb")


@dataclass(frozen=True)
class Segment:
    """Paired input/output substrings that pin transducer structure."""

    kind: str
    s_in: str
    s_out: str

    def __post_init__(self) -> None:
        if len(self.s_in) != len(self.s_out):
            raise ValidationError("segment halves must have equal length")


@dataclass(frozen=True)
class ReductionLayout:
    """State geography of one generated instance.

    ``pairs[i]`` lists the (first, second) positions of interval i's
    fixed pairs; ``boxes[j]`` lists the p free positions of box j;
    ``ref_slots[i]`` is the reference placement used only to label the
    traversal order (rods laid out left to right over the box slots).
    """

    a: tuple[int, ...]
    n: int
    p: int
    k: int
    modified: bool
    singletons: tuple[int, ...]
    pairs: tuple[tuple[tuple[int, int], ...], ...]
    boxes: tuple[tuple[int, ...], ...]
    ref_slots: tuple[tuple[int, ...], ...]
    segments: tuple[Segment, ...]


@dataclass(frozen=True)
class PatsInstance:
    """A pattern plus tile budget; ``kind`` names the construction."""

    pattern: Pattern
    budget: int
    variant: str
    kind: str
    source: Optional[FstEncodingInstance] = None

    def __post_init__(self) -> None:
        if self.budget < self.pattern.color_count:
            raise ValidationError("budget below the pattern's color count")
        if self.variant not in (NONUNIFORM, UNIFORM):
            raise ValidationError(f"unknown variant {self.variant!r}")


def _positions(inst: ThreePartitionInstance, offset: int) -> tuple:
    """Singletons, fixed pairs, boxes, and reference slots, shifted by offset."""
    a, n, p = inst.a, inst.n, inst.p
    base = 2 * p * n
    singletons = [base + 1 + j * (p + 1) + offset for j in range(n + 1)]
    pairs = []
    pos = 1 + offset
    for size in a:
        pairs.append(tuple((pos + 2 * t, pos + 2 * t + 1) for t in range(size)))
        pos += 2 * size
    boxes = [
        tuple(range(s + 1, s + 1 + p)) for s in singletons[:-1]
    ]
    slot_list = [q for box in boxes for q in box]
    ref_slots = []
    cursor = 0
    for size in a:
        ref_slots.append(tuple(slot_list[cursor : cursor + size]))
        cursor += size
    return tuple(singletons), tuple(pairs), tuple(boxes), tuple(ref_slots)


class _Emitter:
    """Accumulates segments and the structural id of every step.

    Step ids: ("Z", j) is the 0-transition leaving position j (the one
    leaving position K emits 1), ("1", j) the 1-transition leaving
    position j. Free states are labeled with their reference slots.
    """

    def __init__(self) -> None:
        self.segments: list[Segment] = []
        self.ids: list[tuple[str, int]] = []

    def add(self, kind: str, s_in: str, s_out: str, ids: list[tuple[str, int]]) -> None:
        if len(ids) != len(s_in):
            raise AssertionError("id stream out of sync with segment")
        self.segments.append(Segment(kind, s_in, s_out))
        self.ids.extend(ids)

    def canonical_order(self) -> tuple[int, ...]:
        table: dict[tuple[str, int], int] = {}
        out = []
        for step in self.ids:
            out.append(table.setdefault(step, len(table) + 1))
        return tuple(out)


def _z_run(lo: int, hi: int) -> list[tuple[str, int]]:
    """Ids of 0-steps leaving positions lo..hi."""
    return [("Z", j) for j in range(lo, hi + 1)]


def _emit_plain(inst: ThreePartitionInstance) -> tuple[_Emitter, ReductionLayout]:
    a, n, p = inst.a, inst.n, inst.p
    k = 3 * p * n + n + 1
    singletons, pairs, boxes, ref_slots = _positions(inst, offset=0)
    em = _Emitter()

    em.add(
        SEG_INITIAL,
        "0" * (2 * k - 1),
        "0" * (k - 1) + "1" + "0" * (k - 1),
        _z_run(1, k) + _z_run(1, k - 1),
    )
    # The literal first segment above stops one step short of closing the
    # cycle, so the remaining segments could not start from position 1.
    # One bridging step restores that alignment.
    em.add(SEG_ZERO_ONE, "0", "1", [("Z", k)])

    for m in sorted(singletons):
        em.add(
            SEG_SINGLETON,
            "0" * (m - 1) + "1" + "0" * (k - m) + "0",
            "0" * (m - 1) + "1" + "0" * (k - m) + "1",
            _z_run(1, m - 1) + [("1", m)] + _z_run(m, k - 1) + [("Z", k)],
        )

    for idx in range(len(a)):
        for t, (i, _) in enumerate(pairs[idx]):
            em.add(
                SEG_TRIPLE,
                "0" * (i - 1) + "1" + "0" * (k - i - 1) + "0",
                "0" * (i - 1) + "1" + "0" * (k - i - 1) + "1",
                _z_run(1, i - 1) + [("1", i)] + _z_run(i + 1, k - 1) + [("Z", k)],
            )
            em.add(
                SEG_TRIPLE,
                "0" * i + "11" + "0" * (k - i) + "0",
                "0" * i + "11" + "0" * (k - i) + "1",
                _z_run(1, i)
                + [("1", i + 1), ("1", ref_slots[idx][t])]
                + _z_run(i, k - 1)
                + [("Z", k)],
            )
        for t in range(len(pairs[idx]) - 1):
            i = pairs[idx][t][0]
            em.add(
                SEG_INTERVAL,
                "0" * (i - 1) + "1101" + "0" * (k - i - 2) + "0",
                "0" * (i - 1) + "1101" + "0" * (k - i - 2) + "1",
                _z_run(1, i - 1)
                + [
                    ("1", i),
                    ("1", i + 1),
                    ("Z", ref_slots[idx][t]),
                    ("1", ref_slots[idx][t + 1]),
                ]
                + _z_run(i + 2, k - 1)
                + [("Z", k)],
            )

    layout = ReductionLayout(
        a, n, p, k, False, singletons, pairs, boxes, ref_slots, tuple(em.segments)
    )
    return em, layout


def _emit_modified(inst: ThreePartitionInstance) -> tuple[_Emitter, ReductionLayout]:
    a, n, p = inst.a, inst.n, inst.p
    base_k = 3 * p * n + n + 1
    k = base_k + 1
    pad = k % 3 == 0
    if pad:
        k += 1
    singletons, pairs, boxes, ref_slots = _positions(inst, offset=1)
    if pad:
        singletons = singletons + (k,)
    em = _Emitter()

    def boundary() -> None:
        em.add(
            SEG_MODIFIED_PREFIX,
            "1" + "0" * k + "1",
            "2" + "0" * (k - 1) + "12",
            [("1", 1)] + _z_run(1, k) + [("1", 1)],
        )

    boundary()
    for m in sorted(singletons):
        em.add(
            SEG_SINGLETON,
            "0" * (m - 1) + "1" + "0" * (k - m) + "01",
            "0" * (m - 1) + "1" + "0" * (k - m) + "12",
            _z_run(1, m - 1) + [("1", m)] + _z_run(m, k - 1) + [("Z", k), ("1", 1)],
        )
    for idx in range(len(a)):
        for t, (i, _) in enumerate(pairs[idx]):
            em.add(
                SEG_TRIPLE,
                "0" * (i - 1) + "1" + "0" * (k - i - 1) + "01",
                "0" * (i - 1) + "1" + "0" * (k - i - 1) + "12",
                _z_run(1, i - 1)
                + [("1", i)]
                + _z_run(i + 1, k - 1)
                + [("Z", k), ("1", 1)],
            )
            em.add(
                SEG_TRIPLE,
                "0" * i + "11" + "0" * (k - i) + "01",
                "0" * i + "11" + "0" * (k - i) + "12",
                _z_run(1, i)
                + [("1", i + 1), ("1", ref_slots[idx][t])]
                + _z_run(i, k - 1)
                + [("Z", k), ("1", 1)],
            )
        for t in range(len(pairs[idx]) - 1):
            i = pairs[idx][t][0]
            em.add(
                SEG_INTERVAL,
                "0" * (i - 1) + "1101" + "0" * (k - i - 2) + "01",
                "0" * (i - 1) + "1101" + "0" * (k - i - 2) + "12",
                _z_run(1, i - 1)
                + [
                    ("1", i),
                    ("1", i + 1),
                    ("Z", ref_slots[idx][t]),
                    ("1", ref_slots[idx][t + 1]),
                ]
                + _z_run(i + 2, k - 1)
                + [("Z", k), ("1", 1)],
            )
    boundary()

    layout = ReductionLayout(
        a, n, p, k, True, singletons, pairs, boxes, ref_slots, tuple(em.segments)
    )
    return em, layout


def _skeleton_from_layout(layout: ReductionLayout) -> FstSkeleton:
    """Fix the 0-cycle, singleton loops, and first pair edges; free the rest."""
    k = layout.k
    fixed: list[Transition] = []
    for q in range(k - 1):
        fixed.append((q, "0", q + 1, "0"))
    fixed.append((k - 1, "0", 0, "1"))
    if layout.modified:
        fixed.append((0, "1", 0, "2"))
    for m in layout.singletons:
        fixed.append((m - 1, "1", m - 1, "1"))
    free: set[int] = set()
    for interval in layout.pairs:
        for first, second in interval:
            fixed.append((first - 1, "1", second - 1, "1"))
            free.add(second - 1)
    for box in layout.boxes:
        free.update(q - 1 for q in box)
    return FstSkeleton(k, 0, tuple(fixed), frozenset(free), meta=layout)


def _assemble_instance(
    em: _Emitter, layout: ReductionLayout, variant: str
) -> tuple[FstEncodingInstance, FstSkeleton]:
    s_in = "".join(seg.s_in for seg in layout.segments)
    s_out = "".join(seg.s_out for seg in layout.segments)
    inst = FstEncodingInstance(s_in, s_out, layout.k, em.canonical_order(), variant)
    return inst, _skeleton_from_layout(layout)


def reduce_3partition_to_fst(
    inst: ThreePartitionInstance,
) -> tuple[FstEncodingInstance, FstSkeleton]:
    """Encode a 3-partition instance as a promise encoding instance.

    K = 3pn + n + 1. Positions 1..2pn hold the fixed halves of the
    half-fixed intervals; n+1 equally spaced singletons split the rest
    into n boxes of p consecutive free states each. The emitted strings
    concatenate the initial segment, a bridging 0 -> 1 step, the
    singleton segments, and per interval its triples then its
    consecutiveness checks.
    """
    em, layout = _emit_plain(inst)
    return _assemble_instance(em, layout, PROMISE)


def reduce_3partition_to_modified_fst(
    inst: ThreePartitionInstance,
) -> tuple[FstEncodingInstance, FstSkeleton]:
    """Variant with a dedicated boundary state carrying a (1,2)-loop.

    The boundary state becomes position 1 and every original position
    shifts up by one; a padding singleton keeps the state count off
    multiples of three. Segments close with 01 -> 12 instead of 0 -> 1
    and the boundary segment 1 0^K 1 -> 2 0^(K-1) 1 2 brackets the
    strings on both ends.
    """
    em, layout = _emit_modified(inst)
    return _assemble_instance(em, layout, MODIFIED)


def build_intended_fst(
    skeleton: FstSkeleton, parts: Sequence[Sequence[int]]
) -> Fst:
    """Complete a reduction skeleton from a partition of the integers.

    ``parts[j]`` lists 1-based indices into the instance's integer
    tuple; each part's rods are packed left to right into box j in the
    order given. Raises PackingError when part sums differ from p or
    an index is reused or missing.
    """
    layout: ReductionLayout = skeleton.meta
    if layout is None:
        raise ValidationError("skeleton carries no reduction layout")
    used = [i for part in parts for i in part]
    if sorted(used) != list(range(1, len(layout.a) + 1)):
        raise PackingError("parts must use each integer index exactly once")
    if len(parts) != layout.n:
        raise PackingError(f"need exactly {layout.n} parts")
    one_edges: dict[int, tuple[int, str]] = {}
    for j, part in enumerate(parts):
        total = sum(layout.a[i - 1] for i in part)
        if total != layout.p:
            raise PackingError(f"part {j + 1} sums to {total}, not {layout.p}")
        cursor = 0
        for i in part:
            slots = layout.boxes[j][cursor : cursor + layout.a[i - 1]]
            cursor += layout.a[i - 1]
            for (first, second), slot in zip(layout.pairs[i - 1], slots):
                one_edges[second - 1] = (slot - 1, "1")
                one_edges[slot - 1] = (first - 1, "1")
    return skeleton.complete(one_edges)


def transition_glyphs(count: int) -> tuple[str, ...]:
    """Deterministic single-character palette for transition colors."""
    pool = [
        ch
        for ch in string.digits + string.ascii_uppercase + string.ascii_lowercase
        + "!#$%&*+/:;<=>?@^_~"
        if ch not in _RESERVED_GLYPHS
    ]
    if count > len(pool):
        raise ValidationError(f"palette exhausted: {count} > {len(pool)} glyphs")
    return tuple(pool[:count])


def _require_order(inst: FstEncodingInstance) -> tuple[int, ...]:
    if inst.order is None:
        raise MissingOrder("instance carries no traversal order")
    return inst.order


def reduce_fst_to_pats_nonuniform(inst: FstEncodingInstance) -> PatsInstance:
    """Two-row pattern: bottom row spells S, top row the traversal order.

    Budget 2K + 2: one tile type per color.
    """
    if inst.variant != PROMISE:
        raise VariantError("non-uniform pattern generator needs the promise variant")
    order = _require_order(inst)
    glyphs = transition_glyphs(2 * inst.k)
    top = "".join(glyphs[t - 1] for t in order)
    bottom = "".join(PINK if ch == "0" else RED for ch in inst.s_in)
    pattern = Pattern.from_glyph_rows([top, bottom])
    return PatsInstance(pattern, 2 * inst.k + 2, NONUNIFORM, NONUNIFORM, inst)


def reduce_fst_to_pats_uniform(inst: FstEncodingInstance) -> PatsInstance:
    """Mirrored pattern for uniform seeds: input half, separator, transduction half.

    Budget |S| + 2K + 4: |S| orange chain types, the two S-colors, the
    2K transition colors, white and black.
    """
    if inst.variant != PROMISE:
        raise VariantError("uniform pattern generator needs the promise variant")
    order = _require_order(inst)
    glyphs = transition_glyphs(2 * inst.k)
    s_colors = "".join(PINK if ch == "0" else RED for ch in inst.s_in)
    trans_colors = "".join(glyphs[t - 1] for t in order)
    top = s_colors + WHITE + trans_colors
    bottom = ORANGE * len(inst.s_in) + BLACK + ORANGE * len(inst.s_in)
    pattern = Pattern.from_glyph_rows([top, bottom])
    return PatsInstance(
        pattern, len(inst.s_in) + 2 * inst.k + 4, UNIFORM, UNIFORM, inst
    )


def _phi(ch: str) -> str:
    return {"0": CYAN, "1": GRAY, "2": ORANGE}[ch]


def constructor_block_word(i: int, k: int) -> str:
    """Top-row word of width K-3 ahead of block i+1's three gray cells.

    The singleton gray cell sits at position 3i mod K when that lands
    inside the word; the two values of i pushing it into the trailing
    three positions yield all-cyan words.
    """
    r = (3 * i) % k
    if 1 <= r <= k - 3:
        return CYAN * (r - 1) + GRAY + CYAN * (k - 3 - r)
    return CYAN * (k - 3)


def reduce_modified_fst_to_3pats(inst: FstEncodingInstance) -> PatsInstance:
    """Three-color pattern for uniform seeds, width 1 + |S'| + K^2.

    Left of the gap: a cyan/orange corner column and the transduction
    gadget (phi(S') over an orange run). Right: K width-K constructor
    blocks whose bottom rows repeat cyan^(K-1) gray and whose top rows
    walk the gray singleton through every position, ending in a block
    capped by three orange cells. Budget |S'| + 2K + 2.
    """
    if inst.variant != MODIFIED:
        raise VariantError("3-color pattern generator needs the modified variant")
    k = inst.k
    top = CYAN + "".join(_phi(ch) for ch in inst.s_out)
    bottom = ORANGE + ORANGE * len(inst.s_out)
    for block in range(1, k + 1):
        if block == 1:
            word = CYAN * (k - 3)
        else:
            word = constructor_block_word(block - 1, k)
        tail = GRAY * 3 if block < k else ORANGE * 3
        top += word + tail
        bottom += CYAN * (k - 1) + GRAY
    pattern = Pattern.from_glyph_rows([top, bottom])
    return PatsInstance(
        pattern, len(inst.s_out) + 2 * inst.k + 2, UNIFORM, UNIFORM3, inst
    )


def _state_glue(q: int) -> str:
    return f"s{q + 1}"


def _witness_uniform3(fst: Fst, inst: FstEncodingInstance, p: Pattern) -> Rtas:
    """Intended solution tile set for the 3-color construction.

    Transition tiles read their input letter on the south side, carry
    source and target states as west/east glues, and show the output
    symbol as their color; the seed glue doubles as the letter 0.
    """
    k = inst.k
    delta = fst.delta()
    if fst.n_states != k:
        raise ValidationError("transducer size differs from instance bound")
    for q in range(k - 1):
        if delta[(q, "0")] != (q + 1, "0"):
            raise ValidationError("transducer lacks the fixed 0-cycle")
    if delta[(k - 1, "0")] != (0, "1") or delta[(0, "1")] != (0, "2"):
        raise ValidationError("transducer lacks the closing (0,1) and (1,2) edges")

    s = inst.s_in
    m = len(inst.s_out)
    tiles: list[TileType] = []
    # orange chain below the transduction gadget, then the (1,2)-loop tile
    for j in range(1, m + 2):
        west = "0" if j == 1 else f"e{j - 1}"
        east = _state_glue(0) if j == m + 1 else f"e{j}"
        north = "1" if j == 1 else s[j - 2]
        tiles.append(TileType(ORANGE, north, east, "0", west))
    tiles.append(TileType(ORANGE, "0", _state_glue(0), "1", _state_glue(0)))
    # cyan 0-cycle tiles and the corner tile
    for i in range(2, k + 1):
        north = "0" if i <= k - 2 else "1"
        tiles.append(
            TileType(CYAN, north, _state_glue(i - 1), "0", _state_glue(i - 2))
        )
    tiles.append(TileType(CYAN, "0", _state_glue(0), "1", "0"))
    # gray tiles: the (0,1) edge plus one per incoming (1,1) edge
    tiles.append(TileType(GRAY, "1", _state_glue(0), "0", _state_glue(k - 1)))
    for q in range(k):
        q2, b = delta[(q, "1")]
        if b == "1":
            tiles.append(TileType(GRAY, "0", _state_glue(q2), "1", _state_glue(q)))
    return Rtas(frozenset(tiles), Seed.uniform("0", "0"), p.width, p.height)


def _witness_nonuniform(fst: Fst, inst: FstEncodingInstance, p: Pattern) -> Rtas:
    """Intended tile set for the two-row construction: one type per color."""
    trace = transduce(fst, inst.s_in).trace
    ids: dict[tuple[int, str], int] = {}
    for q, a, _, _ in trace:
        ids.setdefault((q, a), len(ids) + 1)
    glyphs = transition_glyphs(2 * inst.k)
    tiles = [
        TileType(PINK, "0", "x", "0", "x"),
        TileType(RED, "1", "x", "1", "x"),
    ]
    for (q, a), t in ids.items():
        q2, _ = fst.delta()[(q, a)]
        tiles.append(TileType(glyphs[t - 1], "0", _state_glue(q2), a, _state_glue(q)))
    seed = Seed.nonuniform(tuple(inst.s_in), ("x", _state_glue(fst.start)))
    return Rtas(frozenset(tiles), seed, p.width, p.height)


def _witness_uniform(fst: Fst, inst: FstEncodingInstance, p: Pattern) -> Rtas:
    """Intended tile set for the mirrored uniform construction."""
    trace = transduce(fst, inst.s_in).trace
    ids: dict[tuple[int, str], int] = {}
    for q, a, _, _ in trace:
        ids.setdefault((q, a), len(ids) + 1)
    glyphs = transition_glyphs(2 * inst.k)
    s = inst.s_in
    m = len(s)
    tiles: list[TileType] = []
    for x in range(1, m + 1):
        west = "0" if x == 1 else f"f{x - 1}"
        tiles.append(TileType(ORANGE, "L" + s[x - 1], f"f{x}", "0", west))
    tiles.append(TileType(PINK, "0", "0", "L0", "0"))
    tiles.append(TileType(RED, "0", "0", "L1", "0"))
    tiles.append(TileType(BLACK, "nb", "0", "0", f"f{m}"))
    tiles.append(TileType(WHITE, "0", _state_glue(fst.start), "nb", "0"))
    for (q, a), t in ids.items():
        q2, _ = fst.delta()[(q, a)]
        tiles.append(
            TileType(glyphs[t - 1], "0", _state_glue(q2), "L" + a, _state_glue(q))
        )
    return Rtas(frozenset(tiles), Seed.uniform("0", "0"), p.width, p.height)


def witness_tileset_from_fst(
    fst: Fst, inst: PatsInstance, kind: Optional[str] = None
) -> Rtas:
    """Build the intended solution system for a generated pattern.

    ``fst`` must solve the instance the pattern was generated from
    (``inst.source``); the returned system is directed, matches the
    instance budget exactly, and uniquely assembles the pattern.
    """
    kind = kind or inst.kind
    if inst.source is None:
        raise ValidationError("pattern instance carries no source encoding instance")
    if kind == UNIFORM3:
        return _witness_uniform3(fst, inst.source, inst.pattern)
    if kind == NONUNIFORM:
        return _witness_nonuniform(fst, inst.source, inst.pattern)
    if kind == UNIFORM:
        return _witness_uniform(fst, inst.source, inst.pattern)
    raise VariantError(f"unknown construction kind {kind!r}")
