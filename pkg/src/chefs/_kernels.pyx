# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled row kernels.

Semantics must stay byte-identical to chefs._kernels_py; the test suite
checks equivalence property-wise. ASCII fast paths fall back to the
plain Python expressions for non-ASCII input.
"""

from cpython.list cimport PyList_GET_ITEM, PyList_GET_SIZE
from cpython.unicode cimport PyUnicode_Check

from hashlib import blake2b

IMPLEMENTATION = "cython"

MISSING_TOKENS = ("", "na", "n/a", "null")

cdef frozenset _MISSING = frozenset(MISSING_TOKENS)
cdef frozenset _MISSING_FAST = frozenset(
    {"", "NA", "na", "Na", "nA", "N/A", "n/a", "NULL", "null", "Null"}
)

KEY_SEPARATOR = "\x1f"
ABSENT_MARKER = "\x00"

_blake2b = blake2b


def canon_text(str s) -> str:
    """Lowercase, trim, and collapse internal whitespace runs to one space."""
    cdef Py_ssize_t i, n = len(s)
    cdef int code
    cdef bint pending = False
    for i in range(n):
        if ord(s[i]) > 127:
            return " ".join(s.split()).lower()
    out = []
    for i in range(n):
        code = ord(s[i])
        # ASCII whitespace matching str.split(): space, \t, \n, \v, \f, \r.
        if code == 0x20 or 0x09 <= code <= 0x0D:
            if out:
                pending = True
            continue
        if pending:
            out.append(" ")
            pending = False
        if 0x41 <= code <= 0x5A:
            code += 0x20
        out.append(chr(code))
    return "".join(out)


def normalize_row(list row, list counts) -> None:
    """Replace missing-value tokens with None in place and tally present cells.

    ``counts`` must be at least as long as ``row``; counts[i] is incremented
    for every cell that remains present after normalization.
    """
    cdef Py_ssize_t i, n = PyList_GET_SIZE(row)
    cdef object v
    for i in range(n):
        v = <object>PyList_GET_ITEM(row, i)
        if v is None:
            continue
        if v in _MISSING_FAST or (
            PyUnicode_Check(v) and len(<str>v) <= 4 and (<str>v).lower() in _MISSING
        ):
            row[i] = None
        else:
            counts[i] = <object>PyList_GET_ITEM(counts, i) + 1


def make_key(parts) -> str:
    """Stable 128-bit hex content key over an ordered tuple of optional strings."""
    cdef list buf = []
    cdef object p
    for p in parts:
        buf.append(ABSENT_MARKER if p is None else p)
    joined = KEY_SEPARATOR.join(buf)
    return _blake2b(joined.encode("utf-8", "surrogatepass"), digest_size=16).hexdigest()
