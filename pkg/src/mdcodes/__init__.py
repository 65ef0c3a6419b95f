"""Constrained codes for multidimensional arrays.

Three single-redundancy-symbol encoders (zero cubes free, squares unique,
zero boxes free), the minimal-box machinery they rely on, definition-level
checkers and exhaustive counters, and the bounds used to pick parameters.
"""
from .core import (
    Box,
    CubeMinusCorner,
    NdArray,
    SemiSquare,
    coord_cmp,
    cr_complete,
    format_array,
    index_decode,
    index_encode,
    md,
    parse_array,
    read_sub,
    sd,
    semi_concat,
    write_sub,
)
from .boxes import BoxShape, MinimalBoxFamily, enumerate_minimal, f_d
from .errors import BudgetExceededError, CodingError, CorruptionError, DomainError, UnsupportedSizeError
from .oracles import (
    ConstraintParams,
    ViolationReport,
    check,
    exhaustive_count,
    find_identical_boxes,
    find_identical_cubes,
    find_zero_boxes,
    find_zero_cubes,
    redundancy,
)
from .squares_unique import SquaresUniqueCodec
from .zero_boxes import ZeroBoxesCodec, param_V
from .zero_cubes import ZeroCubesCodec, param_L

__version__ = "0.1.0"
