import io
import logging
import re
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from apps.dense_core.linalg import best_rank_error
from apps.dense_core.structures import as_dense
from utils.exceptions import FormatError, ParameterError, ParseError

logger = logging.getLogger(__name__)

SIGN_VALUES = {"-1": -1.0, "0": 0.0, "1": 1.0, "+1": 1.0}
GENOTYPE_TOKEN = re.compile(r"^[A-Z]{2}$")
MISSING_ALLELE = "N"
PGM_HEADER = re.compile(rb"\A(P[25])" + rb"(?:(?:\s|#[^\r\n]*[\r\n])+(\d+))" * 3)
PGM_MODES = {"L": 255, "I": 65535, "I;16": 65535, "I;16B": 65535}


def _content_lines(path):
    with open(path, encoding="utf-8") as stream:
        for line_number, line in enumerate(stream, start=1):
            stripped = line.strip()
            if stripped and not stripped.startswith("#"):
                yield line_number, stripped.split()


def load_dense_matrix(path):
    """
    Read the dense matrix text format: a header line ``n1 n2`` followed by
    n1 rows of n2 whitespace-separated numbers.

    Raises:
        ParseError: On a malformed header, a row of the wrong length, a value
            that is not a number, or a row count different from n1.
    """

    lines = _content_lines(path)
    header_line, header = next(lines, (1, []))
    if len(header) != 2 or not all(token.isdigit() for token in header):
        raise ParseError("header must be 'n1 n2'", header_line)
    n1, n2 = int(header[0]), int(header[1])

    rows = []
    for line_number, tokens in lines:
        if len(tokens) != n2:
            raise ParseError(f"expected {n2} values, found {len(tokens)}", line_number)
        try:
            rows.append([float(token) for token in tokens])
        except ValueError as error:
            raise ParseError(str(error), line_number) from error
        if len(rows) > n1:
            raise ParseError(f"more than {n1} rows", line_number)
    if len(rows) != n1:
        raise ParseError(f"expected {n1} rows, found {len(rows)}")
    return np.array(rows, dtype=np.float64).reshape(n1, n2)


def save_dense_matrix(matrix, path):
    matrix = as_dense(matrix)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as stream:
        stream.write(f"{matrix.shape[0]} {matrix.shape[1]}\n")
        for row in matrix:
            stream.write(" ".join(f"{value:.17g}" for value in row) + "\n")
    logger.info(f"Wrote {matrix.shape[0]}x{matrix.shape[1]} matrix to {path}")


def load_sign_matrix(path):
    """
    Read a rectangular text matrix whose entries are -1, 0 or +1.

    Raises:
        ParseError: With the line number of the first malformed row.
    """

    rows = []
    width = None
    for line_number, tokens in _content_lines(path):
        if width is None:
            width = len(tokens)
        elif len(tokens) != width:
            raise ParseError(
                f"expected {width} entries, found {len(tokens)}", line_number
            )
        try:
            rows.append([SIGN_VALUES[token] for token in tokens])
        except KeyError as error:
            raise ParseError(
                f"entry {error.args[0]!r} is not -1, 0 or 1", line_number
            ) from error
    if not rows:
        raise ParseError("sign matrix file is empty")
    return np.array(rows, dtype=np.float64)


def _reference_allele(alleles, row_number):
    if len(alleles) > 2:
        raise ParseError(
            f"more than two alleles in one row: {''.join(sorted(alleles))}", row_number
        )
    return min(alleles) if alleles else None


def encode_sign(grid, references=None):
    """
    Encode a genotype grid as a -1/0/+1 matrix.

    Every token is two allele letters. Within a row with alleles B1 (the
    reference) and B2, a B1B1 token becomes -1, B2B2 becomes +1 and anything
    else (heterozygous, or containing the missing allele ``N``) becomes 0.

    Args:
        grid (Sequence[Sequence[str]]): Rows of genotype tokens such as "AG".
        references (Sequence[str] | None): Reference allele per row, defaults to
            the alphabetically smallest allele seen in the row.

    Returns:
        np.ndarray: Matrix of the grid's shape with entries in {-1, 0, +1}.

    Raises:
        ParseError: On an out-of-alphabet token, a row with more than two
            alleles or a ragged grid. The line number is the 1-based row.
    """

    encoded = []
    width = None
    for row_number, row in enumerate(grid, start=1):
        row = [str(token).upper() for token in row]
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ParseError(
                f"expected {width} genotypes, found {len(row)}", row_number
            )
        for token in row:
            if not GENOTYPE_TOKEN.match(token):
                raise ParseError(f"genotype {token!r} is not two letters", row_number)

        alleles = {allele for token in row for allele in token} - {MISSING_ALLELE}
        reference = _reference_allele(alleles, row_number)
        if references is not None:
            reference = references[row_number - 1]
        values = []
        for token in row:
            if MISSING_ALLELE in token or token[0] != token[1]:
                values.append(0.0)
            else:
                values.append(-1.0 if token[0] == reference else 1.0)
        encoded.append(values)

    if not encoded:
        raise ParseError("genotype grid is empty")
    return np.array(encoded, dtype=np.float64)


def load_genotypes(path):
    """Read whitespace-separated genotype tokens and encode them as signs."""
    grid = []
    line_numbers = []
    for line_number, tokens in _content_lines(path):
        grid.append(tokens)
        line_numbers.append(line_number)
    try:
        return encode_sign(grid)
    except ParseError as error:
        if error.line_number is None:
            raise
        raise ParseError(error.detail, line_numbers[error.line_number - 1]) from error


def _window_fits(block, k, eps):
    if block.shape[1] <= k:
        return True
    energy = float(np.sum(block**2))
    if energy == 0.0:
        return True
    return best_rank_error(block, k) ** 2 / energy <= eps


def split_windows(matrix, k, eps):
    """
    Split the columns of M into consecutive windows of near rank k.

    Greedy left to right: a window keeps absorbing the next column while
    ‖W − W_k‖_F²/‖W‖_F² stays at most eps. Windows of width at most k always
    fit, so a column that breaks the bound on its own opens a new window.

    Args:
        matrix (array_like): n1 x n2 matrix M.
        k (int): Target rank per window.
        eps (float): Residual energy ratio bound, 0 < eps < 1.

    Returns:
        list[range]: Disjoint contiguous column ranges covering [0, n2).
    """

    matrix = as_dense(matrix)
    if not 0 < eps < 1:
        raise ParameterError(f"eps must lie in (0, 1), got {eps}")
    if k < 1:
        raise ParameterError(f"k must be at least 1, got {k}")

    n2 = matrix.shape[1]
    windows = []
    start = 0
    while start < n2:
        stop = start + 1
        while stop < n2 and _window_fits(matrix[:, start : stop + 1], k, eps):
            stop += 1
        windows.append(range(start, stop))
        start = stop
    logger.debug(f"Split {n2} columns into {len(windows)} windows (k={k}, eps={eps})")
    return windows


def _pgm_maxval(data):
    header = PGM_HEADER.match(data)
    if header is None:
        raise FormatError(
            f"unsupported PGM header starting {data[:2]!r}, expected P2 or P5"
        )
    maxval = int(header.group(4))
    if not 0 < maxval < 65536:
        raise FormatError(f"PGM maxval {maxval} outside [1, 65535]")
    return maxval


def load_grayscale(path):
    """
    Read a binary (P5) or ASCII (P2) PGM image as a matrix in [0, 1].

    Pillow decodes the raster and rescales it to the full range of its mode
    (255 for 8-bit, 65535 for 16-bit); the pixels are mapped back to the
    file's own levels before dividing by maxval. The result is not
    Frobenius-normalized.

    Raises:
        FormatError: On an unsupported magic number or a truncated raster.
    """

    data = Path(path).read_bytes()
    maxval = _pgm_maxval(data)
    try:
        with Image.open(io.BytesIO(data)) as image:
            image.load()
            mode = image.mode
            pixels = np.asarray(image, dtype=np.float64)
    except (UnidentifiedImageError, OSError, ValueError) as error:
        raise FormatError(f"cannot decode PGM image {path}: {error}") from error

    if mode not in PGM_MODES:
        raise FormatError(f"PGM image decoded to unsupported mode {mode!r}")
    full_range = PGM_MODES[mode]
    if maxval != full_range:
        pixels = np.rint(pixels * maxval / full_range)
    logger.debug(f"Read {pixels.shape[0]}x{pixels.shape[1]} PGM, maxval {maxval}")
    return pixels / maxval
