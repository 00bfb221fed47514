"""Tile self-assembly pattern synthesis: simulation, solvers, reductions."""

from .brute import brute_force_min
from .errors import (
    AlphabetError,
    BudgetExhausted,
    CapExceeded,
    FormatError,
    MissingOrder,
    NotDirected,
    PackingError,
    PatsError,
    SearchBudgetExceeded,
    ValidationError,
    VariantError,
)
from .fst import (
    Fst,
    FstEncodingInstance,
    FstSkeleton,
    PromiseReport,
    ThreePartitionInstance,
    TransduceResult,
    order_matches,
    solve_encoding_by_search,
    transduce,
    verify_promises,
)
from .pattern import Color, Pattern, parse_pattern, render_pattern
from .reductions import (
    PatsInstance,
    ReductionLayout,
    Segment,
    build_intended_fst,
    reduce_3partition_to_fst,
    reduce_3partition_to_modified_fst,
    reduce_fst_to_pats_nonuniform,
    reduce_fst_to_pats_uniform,
    reduce_modified_fst_to_3pats,
    transition_glyphs,
    witness_tileset_from_fst,
)
from .solvers import SolveResult, dp_verify, solve_nonuniform, solve_uniform_h1
from .tiles import (
    Assembly,
    Rtas,
    Seed,
    TileType,
    brute_force_terminal_assemblies,
    is_directed,
    simulate,
    uniquely_assembles,
)

__all__ = [name for name in dir() if not name.startswith("_")]
