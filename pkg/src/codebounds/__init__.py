"""Upper bounds for q-ary codes via pair counting, exhaustive
classification of small optimal codes, and symmetric net conversions."""

__version__ = "0.1.0"

from .codes import (
    Block,
    Code,
    CodeParams,
    ColumnProfile,
    EquivalenceMap,
    Word,
    agreement,
    apply_equivalence,
    column_profile,
    emit_code,
    extract_block,
    hamming_distance,
    min_distance,
    parse_code,
    puncture,
)
from .canonical import canonical_form, is_canonical

__all__ = [
    "__version__",
    "Block",
    "Code",
    "CodeParams",
    "ColumnProfile",
    "EquivalenceMap",
    "Word",
    "agreement",
    "apply_equivalence",
    "canonical_form",
    "column_profile",
    "emit_code",
    "extract_block",
    "hamming_distance",
    "is_canonical",
    "min_distance",
    "parse_code",
    "puncture",
]
