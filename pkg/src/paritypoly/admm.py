"""ADMM linear-programming decoder for binary linear codes.

The LP relaxation minimises ``llr^T x`` subject to ``T_j x`` lying in the even
parity polytope for every check ``j``, where ``T_j`` picks the variables taking
part in check ``j``. With scaled duals ``u_j`` the iteration is::

    x_i     = (sum_{j in N_i} (z_j - u_j)_i - llr_i / rho) / d_i
    z_j     = Proj(T_j x + u_j)
    u_j    += T_j x - z_j

All per-edge quantities (``z``, ``u``, ``T_j x``) are stored flat, check after
check, so gathering is ``x[edge_cols]`` and scattering is a ``bincount``.

Parity-check matrices are read from and written to the alist format
(``n m``, maximum degrees, column degrees, row degrees, then the 1-based row
index list of every column and the column index list of every row; zero
entries are padding).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import baselines, fix, oracle
from .geometry import ParityKind, as_real_vector


# --------------------------------------------------------------------------
# parity-check matrices and alist I/O


class AlistParseError(ValueError):
    """Base class for alist errors; ``line`` is 1-based, or None."""

    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.line = line
        self.source = source
        if source is not None:
            where = f"{source}:{line}: " if line is not None else f"{source}: "
        else:
            where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)


class MalformedHeaderError(AlistParseError):
    """Missing or non-numeric sizes, degrees or index lines."""


class IndexOutOfRangeError(AlistParseError):
    """A row or column index outside ``1..m`` or ``1..n``."""


class InconsistentDegreeError(AlistParseError):
    """Degree lists disagree with the index lists, or rows and columns disagree."""


@dataclass(frozen=True, eq=False)
class ParityCheckMatrix:
    """Sparse binary parity-check matrix with 0-based index lists.

    ``rows[j]`` holds the variables of check ``j`` and ``cols[i]`` the checks of
    variable ``i``, both strictly increasing.
    """

    m: int
    n: int
    rows: tuple
    cols: tuple

    def __post_init__(self):
        rows = tuple(np.asarray(r, dtype=np.int64) for r in self.rows)
        cols = tuple(np.asarray(c, dtype=np.int64) for c in self.cols)
        if len(rows) != self.m or len(cols) != self.n:
            raise ValueError("row/column list counts do not match m, n")
        for j, r in enumerate(rows):
            if r.size < 2:
                raise ValueError(f"check {j} has degree {r.size}; at least 2 is required")
            if np.any(np.diff(r) <= 0):
                raise ValueError(f"check {j} indices are not strictly increasing")
            if r[0] < 0 or r[-1] >= self.n:
                raise ValueError(f"check {j} has a variable index out of range")
        for i, c in enumerate(cols):
            if c.size and (np.any(np.diff(c) <= 0) or c[0] < 0 or c[-1] >= self.m):
                raise ValueError(f"variable {i} has an invalid check list")
        if _transpose(rows, self.n) != [c.tolist() for c in cols]:
            raise ValueError("row and column lists are not transposes of each other")
        for a in rows + cols:
            a.setflags(write=False)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)

    @classmethod
    def from_rows(cls, n: int, rows) -> "ParityCheckMatrix":
        rows = [sorted(int(i) for i in r) for r in rows]
        if any(not 0 <= i < n for r in rows for i in r):
            raise ValueError(f"variable index outside 0..{n - 1}")
        return cls(len(rows), n, tuple(rows), tuple(_transpose(rows, n)))

    @classmethod
    def from_dense(cls, H) -> "ParityCheckMatrix":
        H = np.asarray(H)
        if H.ndim != 2:
            raise ValueError("H must be a 2-D 0/1 array")
        return cls.from_rows(H.shape[1], [np.flatnonzero(row) for row in H])

    def to_dense(self) -> np.ndarray:
        H = np.zeros((self.m, self.n), dtype=np.uint8)
        for j, r in enumerate(self.rows):
            H[j, r] = 1
        return H

    @property
    def row_degrees(self) -> np.ndarray:
        return np.array([r.size for r in self.rows], dtype=np.int64)

    @property
    def col_degrees(self) -> np.ndarray:
        return np.array([c.size for c in self.cols], dtype=np.int64)

    def syndrome(self, word) -> np.ndarray:
        word = np.asarray(word, dtype=np.int64)
        return np.array([int(word[r].sum()) % 2 for r in self.rows], dtype=np.uint8)

    def is_codeword(self, word) -> bool:
        return not self.syndrome(word).any()

    def __eq__(self, other):
        if not isinstance(other, ParityCheckMatrix):
            return NotImplemented
        return (self.m, self.n) == (other.m, other.n) and all(
            np.array_equal(a, b) for a, b in zip(self.rows, other.rows))

    def __hash__(self):
        return hash((self.m, self.n, tuple(r.tobytes() for r in self.rows)))

    def __repr__(self):
        return f"ParityCheckMatrix(m={self.m}, n={self.n}, max_row_degree={self.row_degrees.max()})"


def _transpose(lists, size) -> list:
    out = [[] for _ in range(size)]
    for j, members in enumerate(lists):
        for i in members:
            out[int(i)].append(j)
    return out


def _int_line(lines, k, source, want=None, what="line"):
    if k >= len(lines):
        last = lines[-1][0] if lines else 0
        raise MalformedHeaderError(f"unexpected end of input, expected {what}", last + 1, source)
    lineno, text = lines[k]
    try:
        values = [int(tok) for tok in text.split()]
    except ValueError:
        raise MalformedHeaderError(f"non-integer entry in {what}: {text.strip()!r}",
                                   lineno, source) from None
    if want is not None and len(values) != want:
        raise MalformedHeaderError(f"{what} should have {want} entries, found {len(values)}",
                                   lineno, source)
    return lineno, values


def parse_alist(text, source: str | None = None) -> ParityCheckMatrix:
    """Parse alist text (``str`` or ``bytes``) into a :class:`ParityCheckMatrix`.

    Blank lines are ignored; trailing zeros on index lines are padding.
    ``source`` (a file name) is only used in error messages.

    Raises
    ------
    MalformedHeaderError, IndexOutOfRangeError, InconsistentDegreeError
    """
    if isinstance(text, (bytes, bytearray)):
        try:
            text = text.decode("ascii")
        except UnicodeDecodeError as exc:
            raise MalformedHeaderError(f"not ASCII text ({exc.reason})", None, source) from None
    lines = [(k + 1, s) for k, s in enumerate(text.splitlines()) if s.strip()]
    if not lines:
        raise MalformedHeaderError("empty input", None, source)

    lineno, (n, m) = _int_line(lines, 0, source, 2, "size line 'n m'")
    if n < 1 or m < 1:
        raise MalformedHeaderError(f"sizes must be positive, got n={n} m={m}", lineno, source)
    lineno, (max_col, max_row) = _int_line(lines, 1, source, 2, "maximum degree line")
    _, col_deg = _int_line(lines, 2, source, n, "column degree line")
    _, row_deg = _int_line(lines, 3, source, m, "row degree line")

    def index_lists(start, count, bound, degrees, what):
        out = []
        for k in range(count):
            lineno, values = _int_line(lines, start + k, source, None, f"{what} {k + 1}")
            idx = [v for v in values if v != 0]
            for v in idx:
                if not 1 <= v <= bound:
                    raise IndexOutOfRangeError(
                        f"{what} {k + 1}: index {v} outside 1..{bound}", lineno, source)
            if len(set(idx)) != len(idx):
                raise InconsistentDegreeError(f"{what} {k + 1} repeats an index", lineno, source)
            if len(idx) != degrees[k]:
                raise InconsistentDegreeError(
                    f"{what} {k + 1} lists {len(idx)} indices but its degree is {degrees[k]}",
                    lineno, source)
            out.append(sorted(v - 1 for v in idx))
        return out

    cols = index_lists(4, n, m, col_deg, "column")
    rows = index_lists(4 + n, m, n, row_deg, "row")
    if max(col_deg) != max_col or max(row_deg) != max_row:
        raise InconsistentDegreeError(
            f"maximum degrees {max_col} {max_row} disagree with the degree lists "
            f"({max(col_deg)} {max(row_deg)})", lines[1][0], source)
    if _transpose(rows, n) != cols:
        raise InconsistentDegreeError("row and column index lists describe different matrices",
                                      lines[4 + n][0], source)
    for j, r in enumerate(rows):
        if len(r) < 2:
            raise InconsistentDegreeError(f"row {j + 1} has degree {len(r)} (< 2)",
                                          lines[4 + n + j][0], source)
    return ParityCheckMatrix(m, n, tuple(rows), tuple(cols))


def to_alist(h: ParityCheckMatrix) -> str:
    """Serialise to alist text, zero-padding index lines to the maximum degree."""
    cd, rd = h.col_degrees, h.row_degrees
    max_c, max_r = int(cd.max()), int(rd.max())

    def padded(lists, width):
        return [" ".join(str(int(v) + 1) for v in a) + " 0" * (width - len(a)) for a in lists]

    out = [f"{h.n} {h.m}", f"{max_c} {max_r}",
           " ".join(map(str, cd)), " ".join(map(str, rd))]
    out += padded(h.cols, max_c)
    out += padded(h.rows, max_r)
    return "\n".join(out) + "\n"


def read_alist(path) -> ParityCheckMatrix:
    with open(path, "rb") as fh:
        return parse_alist(fh.read(), source=str(path))


# --------------------------------------------------------------------------
# channel


def awgn_llr(received, sigma: float) -> np.ndarray:
    """LLRs ``2 y / sigma**2`` for BPSK (0 -> +1, 1 -> -1) over AWGN."""
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    y = np.asarray(received, dtype=np.float64)
    return 2.0 * y / sigma**2


# --------------------------------------------------------------------------
# decoder


class XUpdateSign(enum.Enum):
    STANDARD_ADMM = "standard"  # sum(z - u), the minimiser of the augmented Lagrangian
    LITERAL = "literal"   # sum(u - z), kept for comparison


class DecodeStatus(enum.Enum):
    CONVERGED_INTEGRAL = "ConvergedIntegral"
    CONVERGED_FRACTIONAL = "ConvergedFractional"
    ITER_LIMIT = "IterLimit"


PenaltyHook = Callable[[np.ndarray, np.ndarray, float], np.ndarray]


@dataclass(frozen=True)
class DecoderConfig:
    """ADMM settings.

    ``penalty``, when given, is called as ``penalty(x, col_degrees, rho)`` right
    after every x-update and returns the x actually used; it is the place for
    penalised variants. ``integrality_tolerance`` decides whether a converged
    ``x`` counts as integral.
    """

    rho: float = 1.0
    max_iterations: int = 1000
    primal_tolerance: float = 1e-5
    dual_tolerance: float = 1e-5
    x_update_sign: XUpdateSign = XUpdateSign.STANDARD_ADMM
    integrality_tolerance: float = 1e-3
    penalty: Optional[PenaltyHook] = field(default=None, compare=False)

    def __post_init__(self):
        if not (self.rho > 0 and np.isfinite(self.rho)):
            raise ValueError("rho must be a positive finite number")
        if int(self.max_iterations) != self.max_iterations or self.max_iterations < 1:
            raise ValueError("max_iterations must be a positive integer")
        for name in ("primal_tolerance", "dual_tolerance", "integrality_tolerance"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        object.__setattr__(self, "x_update_sign", XUpdateSign(self.x_update_sign))


@dataclass
class DecoderState:
    """Iterates after ``iteration`` full ADMM steps; ``z`` and ``u`` are flat per edge."""

    x: np.ndarray
    z: np.ndarray
    u: np.ndarray
    iteration: int
    offsets: np.ndarray = field(repr=False)

    def z_row(self, j: int) -> np.ndarray:
        return self.z[self.offsets[j]:self.offsets[j + 1]]

    def u_row(self, j: int) -> np.ndarray:
        return self.u[self.offsets[j]:self.offsets[j + 1]]


@dataclass(frozen=True)
class DecodeResult:
    hard_decision: np.ndarray
    status: DecodeStatus
    iterations: int
    x: np.ndarray
    primal_residual: float
    dual_residual: float

    def __iter__(self):
        # allows ``word, status, iterations = decode(...)``
        return iter((self.hard_decision, self.status, self.iterations))


def _fix_even(v):
    return fix.project_array(v, ParityKind.EVEN)


def _oracle_even(v):
    return oracle._oracle_kernel(v, False)


def _zs_even(v):
    return baselines._zhang_siegel_kernel(v, False, np.zeros(3, dtype=np.int64))


def _wd_even(v):
    return baselines._wasson_draper_kernel(v, False, np.zeros(3, dtype=np.int64))


PROJECTORS: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "fix": _fix_even,
    "oracle": _oracle_even,
    "zhang-siegel": _zs_even,
    "wasson-draper": _wd_even,
}


def get_projector(projector) -> Callable[[np.ndarray], np.ndarray]:
    """Resolve a projector name (see :data:`PROJECTORS`) or pass a callable through."""
    if callable(projector):
        return projector
    name = str(getattr(projector, "value", projector)).strip().lower()
    aliases = {"zs": "zhang-siegel", "wd": "wasson-draper"}
    name = aliases.get(name, name)
    if name not in PROJECTORS:
        raise ValueError(f"unknown projector {projector!r}; choose from {sorted(PROJECTORS)}")
    return PROJECTORS[name]


def decode(llr, h: ParityCheckMatrix, cfg: DecoderConfig | None = None, projector="fix",
           callback: Callable[[DecoderState], None] | None = None) -> DecodeResult:
    """Run the ADMM LP decoder.

    Parameters
    ----------
    llr : array_like
        Channel log-likelihood ratios, positive favouring bit 0.
    h : ParityCheckMatrix
    cfg : DecoderConfig, optional
    projector : str or callable
        Even parity-polytope projection used in the z-update; a name from
        :data:`PROJECTORS` or any ``f(v) -> z``.
    callback : callable, optional
        Called with the live :class:`DecoderState` after every iteration.

    Returns
    -------
    DecodeResult
        Hard decision ``x_i >= 0.5``, status and number of iterations run.
        A diverging run stops early and is reported as ``ITER_LIMIT``.
        Convergence means the primal residual ``||T x - z||`` and the dual
        residual ``rho ||z_new - z_old||`` are both below their tolerances.
    """
    cfg = cfg or DecoderConfig()
    proj = get_projector(projector)
    llr = as_real_vector(llr)
    if llr.size != h.n:
        raise ValueError(f"llr has length {llr.size} but the code has n={h.n}")
    deg = h.col_degrees.astype(np.float64)
    if np.any(deg == 0):
        raise ValueError("every variable must take part in at least one check")

    edge_cols = np.concatenate(h.rows)
    offsets = np.concatenate(([0], np.cumsum(h.row_degrees)))
    spans = [(int(offsets[j]), int(offsets[j + 1])) for j in range(h.m)]
    sign = 1.0 if cfg.x_update_sign is XUpdateSign.STANDARD_ADMM else -1.0
    scaled_llr = llr / cfg.rho

    state = DecoderState(x=np.zeros(h.n), z=np.full(edge_cols.size, 0.5),
                         u=np.zeros(edge_cols.size), iteration=0, offsets=offsets)
    z_old = np.empty_like(state.z)
    status = DecodeStatus.ITER_LIMIT
    r_norm = s_norm = float("inf")
    for k in range(1, cfg.max_iterations + 1):
        acc = np.bincount(edge_cols, weights=state.z - state.u, minlength=h.n)
        x = (sign * acc - scaled_llr) / deg
        if cfg.penalty is not None:
            x = np.asarray(cfg.penalty(x, deg, cfg.rho), dtype=np.float64)
        if not np.all(np.isfinite(x)):
            # only seen with the literal sign, which can diverge
            break
        state.x = x
        v = x[edge_cols] + state.u
        z_old[:] = state.z
        for a, b in spans:
            state.z[a:b] = proj(v[a:b])
        r = v - state.u - state.z   # T x - z
        state.u += r
        state.iteration = k
        r_norm = float(np.linalg.norm(r))
        s_norm = cfg.rho * float(np.linalg.norm(state.z - z_old))
        if callback is not None:
            callback(state)
        if r_norm < cfg.primal_tolerance and s_norm < cfg.dual_tolerance:
            status = DecodeStatus.CONVERGED_FRACTIONAL
            break

    hard = (state.x >= 0.5).astype(np.uint8)
    if status is DecodeStatus.CONVERGED_FRACTIONAL:
        integral = np.all(np.abs(state.x - hard) <= cfg.integrality_tolerance)
        if integral and h.is_codeword(hard):
            status = DecodeStatus.CONVERGED_INTEGRAL
    return DecodeResult(hard, status, state.iteration, state.x.copy(), r_norm, s_norm)
