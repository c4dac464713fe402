"""Plain-text matrix and vector files.

Format: the first non-comment line holds "rows cols"; the remaining
non-comment lines hold rows*cols whitespace-separated complex entries in
row-major order. An entry is either a bare real ("1.5", "-2e-3") or a
real+imaginary pair ending in i ("1.5-0.25i", "0+1i"). Lines starting with
'#' are ignored. Writers emit 17 significant digits, which round-trips
IEEE doubles exactly.
"""

import numpy as np

from . import validation
from .exceptions import ParseError


def format_complex(z: complex) -> str:
    """Canonical text form of one entry."""
    z = complex(z)
    if z.imag == 0.0:
        return f"{z.real:.17g}"
    return f"{z.real:.17g}{z.imag:+.17g}i"


def _parse_entry(token: str, path, line_no: int) -> complex:
    try:
        if token.endswith("i"):
            body = token[:-1]
            split = -1
            for k in range(1, len(body)):
                if body[k] in "+-" and body[k - 1] not in "eE":
                    split = k
            if split < 0:
                raise ValueError("missing real part or sign before imaginary part")
            return complex(float(body[:split]), float(body[split:]))
        return complex(float(token), 0.0)
    except ValueError as exc:
        raise ParseError(f"{path}:{line_no}: bad entry {token!r} ({exc})") from exc


def _tokenize(path):
    """Yield (token, line_no) for every whitespace-separated token outside
    comment lines."""
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    for line_no, line in enumerate(lines, start=1):
        if line.lstrip().startswith("#"):
            continue
        for token in line.split():
            yield token, line_no


def _parse_header(tokens, path):
    try:
        rows_tok, line_no = next(tokens)
    except StopIteration:
        raise ParseError(f"{path}: empty file, expected a 'rows cols' header") from None
    try:
        cols_tok, _ = next(tokens)
    except StopIteration:
        raise ParseError(f"{path}:{line_no}: header needs both rows and cols") from None
    try:
        rows, cols = int(rows_tok), int(cols_tok)
    except ValueError:
        raise ParseError(
            f"{path}:{line_no}: header must be two integers, got {rows_tok!r} {cols_tok!r}"
        ) from None
    if rows < 1 or cols < 1:
        raise ParseError(f"{path}:{line_no}: dimensions must be positive, got {rows} {cols}")
    return rows, cols


def parse_matrix_file(path) -> np.ndarray:
    """Read a complex matrix from a text file."""
    tokens = _tokenize(path)
    rows, cols = _parse_header(tokens, path)
    entries = []
    last_line = 0
    for token, line_no in tokens:
        if len(entries) >= rows * cols:
            raise ParseError(
                f"{path}:{line_no}: extra entry {token!r} beyond the declared "
                f"{rows}x{cols} = {rows * cols}"
            )
        entries.append(_parse_entry(token, path, line_no))
        last_line = line_no
    if len(entries) != rows * cols:
        raise ParseError(
            f"{path}:{last_line or 1}: expected {rows * cols} entries for a "
            f"{rows}x{cols} matrix, found {len(entries)}"
        )
    return np.array(entries, dtype=np.complex128).reshape(rows, cols)


def parse_vector_file(path) -> np.ndarray:
    """Read a complex vector; the header must declare a single column."""
    a = parse_matrix_file(path)
    if a.shape[1] != 1:
        raise ParseError(f"{path}: vector file must declare 'n 1', got {a.shape[0]} {a.shape[1]}")
    return a[:, 0].copy()


def write_matrix_file(path, a) -> None:
    """Write a complex matrix in the canonical text form."""
    a = validation.as_complex_matrix(a, "matrix")
    lines = [f"{a.shape[0]} {a.shape[1]}"]
    for row in a:
        lines.append(" ".join(format_complex(z) for z in row))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def write_vector_file(path, v) -> None:
    """Write a complex vector (one entry per line)."""
    v = validation.as_complex_vector(v, "vector")
    lines = [f"{v.shape[0]} 1"]
    lines.extend(format_complex(z) for z in v)
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
