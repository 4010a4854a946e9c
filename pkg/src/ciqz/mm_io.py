"""Matrix Market reader/writer.

Coordinate and array variants, real / integer / complex fields, with
symmetric / hermitian / skew-symmetric storage expanded to explicit entries
at parse time. Pattern files carry no values and are rejected. Duplicate
entries are an error rather than summed: the exchange format forbids them,
and failing loudly catches corrupt files.
"""

import math
from dataclasses import dataclass

import numpy as np

OBJECTS = ("matrix",)
FORMATS = ("coordinate", "array")
FIELDS = ("real", "complex", "integer", "pattern")
SYMMETRIES = ("general", "symmetric", "skew-symmetric", "hermitian")


class MatrixMarketError(ValueError):
    """Malformed or inconsistent Matrix Market input."""


@dataclass(frozen=True)
class MatrixMarketHeader:
    object: str
    format: str
    field: str
    symmetry: str


@dataclass
class SparseTriplets:
    nrows: int
    ncols: int
    entries: list  # (row, col, value), 1-based indices, symmetry expanded


def _decode(source):
    if isinstance(source, bytes):
        return source.decode("ascii")
    if isinstance(source, str):
        return source
    data = source.read()
    if isinstance(data, bytes):
        return data.decode("ascii")
    return data


def _parse_header(line):
    if not line.lower().startswith("%%matrixmarket"):
        raise MatrixMarketError("missing %%MatrixMarket banner line")
    tokens = line.split()
    if len(tokens) < 5:
        raise MatrixMarketError(f"banner has {len(tokens)} tokens, expected 5")
    _, obj, fmt, fld, sym = (t.lower() for t in tokens[:5])
    if obj not in OBJECTS:
        raise MatrixMarketError(f"unsupported object {obj!r}")
    if fmt not in FORMATS:
        raise MatrixMarketError(f"unsupported format {fmt!r}")
    if fld not in FIELDS:
        raise MatrixMarketError(f"unsupported field {fld!r}")
    if fld == "pattern":
        raise MatrixMarketError("pattern files carry no values and are not supported")
    if sym not in SYMMETRIES:
        raise MatrixMarketError(f"unsupported symmetry {sym!r}")
    return MatrixMarketHeader(obj, fmt, fld, sym)


def _parse_value(tokens, field, lineno):
    try:
        if field == "complex":
            if len(tokens) != 2:
                raise ValueError
            value = complex(float(tokens[0]), float(tokens[1]))
        else:
            if len(tokens) != 1:
                raise ValueError
            value = complex(float(tokens[0]), 0.0)
    except ValueError:
        raise MatrixMarketError(
            f"line {lineno}: bad {field} value {' '.join(tokens)!r}"
        ) from None
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise MatrixMarketError(f"line {lineno}: non-finite value")
    return value


def _expand(header, nrows, ncols, raw):
    """Apply the symmetry rule and check for duplicates."""
    seen = set()
    entries = []

    def push(r, c, v):
        if (r, c) in seen:
            raise MatrixMarketError(f"duplicate entry at ({r}, {c})")
        seen.add((r, c))
        entries.append((r, c, v))

    for r, c, v in raw:
        if header.symmetry == "skew-symmetric" and r == c:
            if v != 0:
                raise MatrixMarketError(
                    f"skew-symmetric file has nonzero diagonal at ({r}, {c})"
                )
            push(r, c, v)
            continue
        if header.symmetry == "hermitian" and r == c and v.imag != 0.0:
            raise MatrixMarketError(
                f"hermitian file has complex diagonal at ({r}, {c})"
            )
        push(r, c, v)
        if header.symmetry == "general" or r == c:
            continue
        if header.symmetry == "symmetric":
            push(c, r, v)
        elif header.symmetry == "hermitian":
            push(c, r, v.conjugate())
        elif header.symmetry == "skew-symmetric":
            push(c, r, -v)
    return SparseTriplets(nrows, ncols, entries)


def parse_matrix_market(source):
    """Parse Matrix Market text (str, bytes or file-like) into triplets with
    symmetry fully expanded and values promoted to complex."""
    text = _decode(source)
    lines = text.splitlines()
    if not lines:
        raise MatrixMarketError("empty input")
    header = _parse_header(lines[0])

    body = [
        (i + 1, ln.strip())
        for i, ln in enumerate(lines[1:], start=1)
        if ln.strip() and not ln.lstrip().startswith("%")
    ]
    if not body:
        raise MatrixMarketError("missing size line")
    size_lineno, size_line = body[0]
    size_tokens = size_line.split()
    data = body[1:]

    if header.format == "coordinate":
        if len(size_tokens) != 3:
            raise MatrixMarketError(
                f"line {size_lineno}: coordinate size line needs 3 integers"
            )
        try:
            nrows, ncols, nnz = (int(t) for t in size_tokens)
        except ValueError:
            raise MatrixMarketError(
                f"line {size_lineno}: bad size line {size_line!r}"
            ) from None
        if len(data) != nnz:
            raise MatrixMarketError(
                f"entry count mismatch: size line says {nnz}, found {len(data)}"
            )
        raw = []
        for lineno, line in data:
            tokens = line.split()
            if len(tokens) < 3:
                raise MatrixMarketError(f"line {lineno}: too few tokens")
            try:
                r, c = int(tokens[0]), int(tokens[1])
            except ValueError:
                raise MatrixMarketError(f"line {lineno}: bad indices") from None
            if not (1 <= r <= nrows and 1 <= c <= ncols):
                raise MatrixMarketError(
                    f"line {lineno}: index ({r}, {c}) out of range for "
                    f"{nrows}x{ncols}"
                )
            raw.append((r, c, _parse_value(tokens[2:], header.field, lineno)))
        return _expand(header, nrows, ncols, raw)

    # array format: dense values in column-major order; symmetric variants
    # store the lower triangle only (skew-symmetric without the diagonal)
    if len(size_tokens) != 2:
        raise MatrixMarketError(
            f"line {size_lineno}: array size line needs 2 integers"
        )
    try:
        nrows, ncols = (int(t) for t in size_tokens)
    except ValueError:
        raise MatrixMarketError(
            f"line {size_lineno}: bad size line {size_line!r}"
        ) from None
    if header.symmetry == "general":
        coords = [(r, c) for c in range(1, ncols + 1) for r in range(1, nrows + 1)]
    else:
        if nrows != ncols:
            raise MatrixMarketError("symmetric array storage needs a square matrix")
        skip_diag = header.symmetry == "skew-symmetric"
        coords = [
            (r, c)
            for c in range(1, ncols + 1)
            for r in range(c + 1 if skip_diag else c, nrows + 1)
        ]
    if len(data) != len(coords):
        raise MatrixMarketError(
            f"entry count mismatch: expected {len(coords)} values, found {len(data)}"
        )
    raw = []
    for (r, c), (lineno, line) in zip(coords, data):
        raw.append((r, c, _parse_value(line.split(), header.field, lineno)))
    return _expand(header, nrows, ncols, raw)


def load_matrix_market(path):
    with open(path, "rb") as fh:
        return parse_matrix_market(fh)


def to_dense(triplets):
    """Materialize triplets as a dense complex matrix (square input only)."""
    if triplets.nrows != triplets.ncols:
        raise MatrixMarketError(
            f"solver needs a square matrix, got {triplets.nrows}x{triplets.ncols}"
        )
    out = np.zeros((triplets.nrows, triplets.ncols), dtype=np.complex128, order="F")
    for r, c, v in triplets.entries:
        out[r - 1, c - 1] = v
    return out


def write_coordinate(triplets):
    """Render triplets back as coordinate/complex/general text (17 significant
    digits, enough for an exact double round trip)."""
    lines = ["%%MatrixMarket matrix coordinate complex general"]
    lines.append(f"{triplets.nrows} {triplets.ncols} {len(triplets.entries)}")
    for r, c, v in triplets.entries:
        lines.append(f"{r} {c} {v.real:.17g} {v.imag:.17g}")
    return "\n".join(lines) + "\n"


def write_array(matrix):
    """Render a dense complex matrix as array/complex/general text."""
    matrix = np.asarray(matrix)
    nrows, ncols = matrix.shape
    lines = ["%%MatrixMarket matrix array complex general"]
    lines.append(f"{nrows} {ncols}")
    for c in range(ncols):
        for r in range(nrows):
            v = complex(matrix[r, c])
            lines.append(f"{v.real:.17g} {v.imag:.17g}")
    return "\n".join(lines) + "\n"
