"""Pure-Python reference implementations of the hot row kernels.

The compiled extension (``chefs._kernels``) mirrors these functions
exactly; both must produce byte-identical outputs for any input.
"""

from hashlib import blake2b

IMPLEMENTATION = "python"

#: Cell values (case-insensitive) that normalize to "absent".
MISSING_TOKENS = ("", "na", "n/a", "null")

_MISSING = frozenset(MISSING_TOKENS)
# Common literal spellings, checked first to avoid lowering every cell.
_MISSING_FAST = frozenset(
    {"", "NA", "na", "Na", "nA", "N/A", "n/a", "NULL", "null", "Null"}
)

#: Joined-field separator and absent-field marker used by make_key.
KEY_SEPARATOR = "\x1f"
ABSENT_MARKER = "\x00"


def canon_text(s: str) -> str:
    """Lowercase, trim, and collapse internal whitespace runs to one space."""
    return " ".join(s.split()).lower()


def normalize_row(row: list, counts: list) -> None:
    """Replace missing-value tokens with None in place and tally present cells.

    ``counts`` must be at least as long as ``row``; counts[i] is incremented
    for every cell that remains present after normalization.
    """
    for i in range(len(row)):
        v = row[i]
        if v is None:
            continue
        if v in _MISSING_FAST or (len(v) <= 4 and v.lower() in _MISSING):
            row[i] = None
        else:
            counts[i] += 1


def make_key(parts) -> str:
    """Stable 128-bit hex content key over an ordered tuple of optional strings."""
    joined = KEY_SEPARATOR.join(
        ABSENT_MARKER if p is None else p for p in parts
    )
    return blake2b(joined.encode("utf-8", "surrogatepass"), digest_size=16).hexdigest()
