"""Seeded test-matrix generators and Matrix Market file I/O.

Three families with one conditioning knob each: an arrowhead block matrix
with a single dense column (smaller a, worse conditioning), a block
matrix with two heavy rows and no dense column (knob b), and a dense
control with prescribed singular values sigma^(i/(n-1)) (knob sigma,
kappa2 = 1/sigma). The first two are deterministic; the dense family is a
pure function of (m, n, sigma, seed).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np


class Family(enum.Enum):
    ARROWHEAD_T1 = "t1"
    BLOCK_T2 = "t2"
    DENSE_SVD = "dense"


@dataclass(frozen=True)
class GenSpec:
    """One generator request: family, shape, conditioning knob, seed.

    seed is required for the dense family and ignored otherwise.
    """

    family: Family
    m: int
    n: int
    knob: float
    seed: int | None = None


def _check_block_shape(m, n):
    if n < 4 or n % 2:
        raise ValueError(f"n must be even and >= 4, got {n}")
    if m < n or m % n:
        raise ValueError(f"m must be a positive multiple of n, got m={m} n={n}")


def gen_arrowhead_t1(m, n, a):
    """Stacked arrowhead blocks with one dense column.

    Each n x n block is diag(u) with a full first column (-10) and a full
    first row (-5); u holds n/2 copies of 3 followed by a geometric decay
    from 3 down to a. Entries of column 1 never cancel, so its nonzero
    count is m while every other column has 2m/n nonzeros.
    """
    _check_block_shape(m, n)
    if not a > 0.0:
        raise ValueError(f"a must be positive, got {a}")
    half = n // 2
    u = np.empty(n)
    u[:half] = 3.0
    j = np.arange(half, n)
    u[half:] = 3.0 * (a / 3.0) ** ((j - half) / (half - 1))
    f = np.ones(n)
    f[0] = 0.0
    k = np.diag(u)
    k[0, :] += -5.0 * f
    k[:, 0] += -10.0 * f
    return np.tile(k, (m // n, 1))


def gen_block_t2(m, n, b):
    """Stacked blocks with two heavy rows and no dense column."""
    _check_block_shape(m, n)
    if not b > 0.0:
        raise ValueError(f"b must be positive, got {b}")
    half = n // 2
    u = np.empty(n)
    u[:half] = 10.0
    j = np.arange(half, n)
    u[half:] = 10.0 * (b / 10.0) ** ((j - half) / (half - 1))
    f = np.ones(n)
    f[0] = 0.0
    k = np.diag(u)
    k[half - 1, :] += 10.0 * f
    k[half, :] += 10.0 * f
    return np.tile(k, (m // n, 1))


def _haar_factor(rng, rows, cols):
    # economy orthogonal factor with positive-diagonal sign convention
    q, r = np.linalg.qr(rng.standard_normal((rows, cols)))
    d = np.sign(np.diag(r))
    d[d == 0.0] = 1.0
    return q * d


def gen_dense_svd(m, n, sigma, seed):
    """Dense matrix with singular values sigma^(i/(n-1)), i = 0..n-1.

    Built as O diag(d) H^T from two seeded random orthogonal factors, so
    ||X||_2 = 1 and kappa2 = 1/sigma up to orthogonalization rounding.
    Same arguments give a bit-identical matrix.
    """
    if m < n or n < 2:
        raise ValueError(f"need m >= n >= 2, got m={m} n={n}")
    if not 0.0 < sigma < 1.0:
        raise ValueError(f"sigma must be in (0, 1), got {sigma}")
    rng = np.random.default_rng(seed)
    o = _haar_factor(rng, m, n)
    h = _haar_factor(rng, n, n)
    d = sigma ** (np.arange(n) / (n - 1))
    return (o * d) @ h.T


def generate(spec: GenSpec):
    """Materialize a GenSpec."""
    if spec.family is Family.ARROWHEAD_T1:
        return gen_arrowhead_t1(spec.m, spec.n, spec.knob)
    if spec.family is Family.BLOCK_T2:
        return gen_block_t2(spec.m, spec.n, spec.knob)
    seed = 0 if spec.seed is None else spec.seed
    return gen_dense_svd(spec.m, spec.n, spec.knob, seed)


class ParseError(ValueError):
    """Malformed Matrix Market content; .line is the 1-based line number."""

    def __init__(self, message, line):
        self.line = line
        super().__init__(f"line {line}: {message}")


class UnsupportedField(ValueError):
    """Matrix Market field or symmetry this reader does not handle."""


_HEADER = "%%MatrixMarket matrix array real general"


def write_matrix_market(x, path):
    """Write a dense matrix in array format, 17 significant digits.

    Values are serialized column-major per the exchange-format convention;
    17 digits make write -> read round trips value-exact for float64.
    """
    a = np.asarray(x, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError(f"x must be 2-D, got ndim={a.ndim}")
    rows, cols = a.shape
    with open(path, "w") as fh:
        fh.write(_HEADER + "\n")
        fh.write(f"{rows} {cols}\n")
        for j in range(cols):
            for i in range(rows):
                fh.write(format(a[i, j], ".17g") + "\n")


def _parse_header(line):
    tok = line.split()
    if len(tok) != 5 or tok[0] != "%%MatrixMarket" or tok[1].lower() != "matrix":
        raise ParseError("expected '%%MatrixMarket matrix <format> <field> <symmetry>'", 1)
    fmt, field, symmetry = tok[2].lower(), tok[3].lower(), tok[4].lower()
    if fmt not in ("array", "coordinate"):
        raise ParseError(f"unknown format {fmt!r}", 1)
    if field in ("complex", "pattern"):
        raise UnsupportedField(f"field {field!r} is not supported")
    if field not in ("real", "integer"):
        raise ParseError(f"unknown field {field!r}", 1)
    if symmetry != "general":
        raise UnsupportedField(f"symmetry {symmetry!r} is not supported")
    return fmt


def read_matrix_market(path):
    """Read an array or coordinate Matrix Market file as a dense float64 array.

    Coordinate entries are 1-based and duplicates are summed. Raises
    ParseError (with a line attribute) on malformed content and
    UnsupportedField for complex/pattern fields or non-general symmetry.
    """
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise ParseError("empty file", 1)
    fmt = _parse_header(lines[0])
    body = [(no, ln) for no, ln in enumerate(lines[1:], start=2)
            if ln.strip() and not ln.lstrip().startswith("%")]
    if not body:
        raise ParseError("missing size line", len(lines))
    size_no, size_line = body[0]
    tok = size_line.split()
    want = 2 if fmt == "array" else 3
    if len(tok) != want:
        raise ParseError(f"size line needs {want} integers", size_no)
    try:
        dims = [int(t) for t in tok]
    except ValueError:
        raise ParseError(f"size line needs {want} integers", size_no) from None
    if any(d < 1 for d in dims[:2]) or (fmt == "coordinate" and dims[2] < 0):
        raise ParseError("sizes must be positive", size_no)
    rows, cols = dims[0], dims[1]
    a = np.zeros((rows, cols))
    entries = body[1:]
    if fmt == "array":
        if len(entries) != rows * cols:
            raise ParseError(
                f"expected {rows * cols} values, found {len(entries)}",
                entries[-1][0] if entries else size_no)
        pos = 0
        for j in range(cols):
            for i in range(rows):
                no, ln = entries[pos]
                try:
                    a[i, j] = float(ln)
                except ValueError:
                    raise ParseError(f"bad value {ln.strip()!r}", no) from None
                pos += 1
        return a
    nnz = dims[2]
    if len(entries) != nnz:
        raise ParseError(f"expected {nnz} entries, found {len(entries)}",
                         entries[-1][0] if entries else size_no)
    for no, ln in entries:
        tok = ln.split()
        if len(tok) != 3:
            raise ParseError("coordinate entry needs 'i j value'", no)
        try:
            i, j, val = int(tok[0]), int(tok[1]), float(tok[2])
        except ValueError:
            raise ParseError("coordinate entry needs 'i j value'", no) from None
        if not (1 <= i <= rows and 1 <= j <= cols):
            raise ParseError(f"index ({i}, {j}) outside {rows} x {cols}", no)
        a[i - 1, j - 1] += val
    return a
