"""Complementarity tables for N black boxes of s positions each.

An *item* is one configuration of all N boxes, encoded as the integer
with base-2**s digits ``j_1 ... j_N`` (``j_1`` most significant), each
``j_k`` being the index of box k's function.  A *row* splits the
``2**(N*s)`` items into ``2**N`` equal columns; rows are complementary
when every column of one row meets every column of another in exactly
``2**(N*(s-2))`` items.

Rows are generated from the points of the projective space
PG(s-1, GF(2**N)): for a point ``lam`` the row sends an item to the field
element ``sum_x lam[x] * g(x)``, where ``g(x)`` has bit ``k-1`` equal to
``f_k(x)``.  This meets the Bose-Bush bound.
"""
from __future__ import annotations

import io
import itertools
from dataclasses import dataclass, field as dc_field
from typing import Iterable

import numpy as np

from .gf2n import field

DEFAULT_MAX_ITEMS = 1 << 15
MAX_CELLS = 1 << 28


class TableTooLarge(ValueError):
    pass


def bose_bush_bound(s: int, N: int, width: int | None = None) -> int:
    """Maximal number of mutually complementary rows, (2**(N s) - 1) / (2**N - 1)."""
    if s < 1 or N < 1:
        raise ValueError(f"s and N must be >= 1, got s={s}, N={N}")
    num, den = (1 << (N * s)) - 1, (1 << N) - 1
    q, r = divmod(num, den)
    assert r == 0
    if width is not None and q.bit_length() > width:
        raise OverflowError(f"r_{s}({N}) needs {q.bit_length()} bits, more than {width}")
    return q


def parameter_counts(s: int, N: int, width: int | None = None) -> tuple[int, int]:
    """(joint, local) parameter counts for N level-s systems.

    joint: each complementary joint measurement has 2**N outcomes and so
    2**N - 1 free probabilities; local: all correlations among the
    2**s - 1 local axes of every subset of the N systems.
    """
    joint = bose_bush_bound(s, N) * ((1 << N) - 1)
    local = (1 << s) ** N - 1
    if width is not None and max(joint, local).bit_length() > width:
        raise OverflowError(f"parameter count exceeds {width} bits")
    return joint, local


# -- items ------------------------------------------------------------------

def item_from_indices(js: Iterable[int], s: int) -> int:
    item = 0
    for j in js:
        if not 0 <= j < 1 << s:
            raise ValueError(f"function index {j} out of range for s={s}")
        item = (item << s) | j
    return item


def item_indices(item: int, s: int, N: int) -> tuple[int, ...]:
    mask = (1 << s) - 1
    return tuple(item >> (s * (N - k)) & mask for k in range(1, N + 1))


def item_bit(s: int, N: int, k: int, x: int) -> int:
    """Bit position of f_k(x) inside an item (k is 1-based)."""
    return s * (N - k) + (s - 1 - x)


def function_values(s: int, N: int) -> np.ndarray:
    """Array g of shape (s, 2**(N s)) with g[x, item] the field element of item at x."""
    items = np.arange(1 << (N * s), dtype=np.int64)
    g = np.zeros((s, items.size), dtype=np.int64)
    for x in range(s):
        for k in range(1, N + 1):
            g[x] |= (items >> item_bit(s, N, k, x) & 1) << (k - 1)
    return g


def _bit_reverse(v: np.ndarray, N: int) -> np.ndarray:
    out = np.zeros_like(v)
    for k in range(N):
        out |= (v >> k & 1) << (N - 1 - k)
    return out


# -- questions --------------------------------------------------------------

@dataclass(frozen=True)
class CompositeQuestion:
    """A projective point ``lam`` over GF(2**N) labelling one table row."""

    N: int
    coords: tuple[int, ...]

    def __post_init__(self):
        F = field(self.N)
        if not self.coords or not any(self.coords):
            raise ValueError("question coordinates must not all be zero")
        for c in self.coords:
            if not 0 <= c < F.order:
                raise ValueError(f"{c} is not an element of GF(2^{self.N})")

    @property
    def s(self) -> int:
        return len(self.coords)

    def normalized(self) -> "CompositeQuestion":
        F = field(self.N)
        lead = next(c for c in self.coords if c)
        inv = F.inv(lead)
        return CompositeQuestion(self.N, tuple(F.mul(inv, c) for c in self.coords))

    def answer_values(self) -> np.ndarray:
        """Field element answered by every item, in item order."""
        F = field(self.N)
        g = function_values(self.s, self.N)
        out = np.zeros(g.shape[1], dtype=np.int64)
        for x, c in enumerate(self.coords):
            if c:
                out ^= F.mul_array(c, g[x]).astype(np.int64)
        return out

    def partition(self) -> np.ndarray:
        """Column index of every item (answer bits a_1..a_N, a_1 most significant)."""
        return _bit_reverse(self.answer_values(), self.N)


def projective_points(s: int, N: int) -> list[tuple[int, ...]]:
    """Normalized points of PG(s-1, GF(2**N)), first nonzero coordinate 1.

    Ordered by number of nonzero coordinates, then by support with
    position 0 lowest, then lexicographically; for N = 1 this is the
    canonical parity-mask order.
    """
    q = 1 << N
    pts = []
    for lead in range(s):
        for tail in itertools.product(range(q), repeat=s - lead - 1):
            pts.append((0,) * lead + (1,) + tail)

    def key(p):
        support = sum(1 << x for x, c in enumerate(p) if c)
        return (support.bit_count(), support, p)

    return sorted(pts, key=key)


# -- tables -----------------------------------------------------------------

def _label_dtype(N: int):
    if N <= 6:
        return np.int8
    if N <= 14:
        return np.int16
    return np.int32


@dataclass
class ComplementarityTable:
    """Rows of a complementarity table.

    ``labels[r, item]`` is the column of ``item`` in row ``r``.  Negative
    entries mark items missing from a row (-1) or placed in more than one
    column (-2); they only arise for imported tables.
    """

    s: int
    N: int
    labels: np.ndarray
    questions: list[tuple[int, ...]] = dc_field(default_factory=list)

    @property
    def n_items(self) -> int:
        return 1 << (self.N * self.s)

    @property
    def n_columns(self) -> int:
        return 1 << self.N

    @property
    def n_rows(self) -> int:
        return self.labels.shape[0]

    def columns(self, r: int) -> list[list[int]]:
        row = self.labels[r]
        order = np.argsort(row, kind="stable")
        bounds = np.searchsorted(row[order], np.arange(self.n_columns + 1))
        return [order[bounds[c]:bounds[c + 1]].tolist() for c in range(self.n_columns)]

    def canonical_form(self) -> tuple:
        """Order-free form: columns sorted by least item, rows sorted."""
        rows = []
        for r in range(self.n_rows):
            cols = sorted(tuple(c) for c in self.columns(r))
            rows.append(tuple(cols))
        return tuple(sorted(rows))

    @classmethod
    def from_columns(cls, s: int, N: int, rows: list[list[list[int]]],
                     questions: list[tuple[int, ...]] | None = None) -> "ComplementarityTable":
        M, K = 1 << (N * s), 1 << N
        labels = np.full((len(rows), M), -1, dtype=_label_dtype(N))
        for r, cols in enumerate(rows):
            if len(cols) != K:
                raise ValueError(f"row {r} has {len(cols)} columns, expected {K}")
            for c, items in enumerate(cols):
                items = np.asarray(items, dtype=np.int64)
                if items.size and (items.min() < 0 or items.max() >= M):
                    raise ValueError(f"row {r} column {c} has items outside 0..{M - 1}")
                uniq, mult = np.unique(items, return_counts=True)
                taken = (labels[r, uniq] != -1) | (mult > 1)
                labels[r, uniq] = np.where(taken, -2, c)
        return cls(s, N, labels, list(questions or []))


def build_table(s: int, N: int, max_items: int = DEFAULT_MAX_ITEMS) -> ComplementarityTable:
    """One row per point of PG(s-1, GF(2**N))."""
    if s < 1 or N < 1:
        raise ValueError(f"s and N must be >= 1, got s={s}, N={N}")
    if N > 16:
        raise ValueError("N > 16 is not supported")
    M = 1 << (N * s)
    if M > max_items:
        raise TableTooLarge(f"2^{N * s} items exceed the limit of {max_items}")
    n_rows = bose_bush_bound(s, N)
    if n_rows * M > MAX_CELLS:
        raise TableTooLarge(f"{n_rows} rows x {M} items exceed {MAX_CELLS} cells")
    F = field(N)
    pts = projective_points(s, N)
    lam = np.array(pts, dtype=np.intp)
    g = function_values(s, N)
    labels = np.zeros((len(pts), M), dtype=F.dtype)
    for x in range(s):
        labels ^= F.mul_array(lam[:, x, None], g[x][None, :])
    labels = _bit_reverse(labels, N).astype(_label_dtype(N))
    return ComplementarityTable(s, N, labels, pts)


# -- verification -----------------------------------------------------------

@dataclass
class VerificationReport:
    ok: bool
    rows: int
    columns: int
    column_size: int
    intersection_size: int | None
    method: str
    violation: str | None = None
    location: tuple | None = None

    def __bool__(self):
        return self.ok


def _pair_counts(labels: np.ndarray, a: int, b: int, K: int) -> np.ndarray:
    la = labels[a].astype(np.int64)
    lb = labels[b].astype(np.int64)
    return np.bincount(la * K + lb, minlength=K * K).reshape(K, K)


def _affine_predict(base: np.ndarray, lin: np.ndarray) -> np.ndarray:
    """Labels of an affine map from its value at 0 and at each unit vector."""
    rows, nbits = lin.shape
    pred = np.empty((rows, 1 << nbits), dtype=np.int64)
    pred[:, 0] = base
    for p in range(nbits):
        h = 1 << p
        pred[:, h:2 * h] = pred[:, :h] ^ lin[:, p, None]
    return pred


def verify_table(t: ComplementarityTable, chunk: int = 128) -> VerificationReport:
    """Check partition validity, column sizes and pairwise evenness exactly.

    When every row's labelling is affine over GF(2) (as for generated
    tables) evenness reduces to the row dual spaces meeting only in 0,
    which is checked on ``rows * (2**N - 1)`` vectors.  Otherwise every
    pair of rows is counted directly.
    """
    s, N = t.s, t.N
    M, K = t.n_items, t.n_columns
    labels = t.labels
    col_size = M // K
    inter = M // (K * K) if s >= 2 else None

    def report(ok, method, violation=None, location=None):
        return VerificationReport(ok, t.n_rows, K, col_size, inter, method, violation, location)

    if labels.ndim != 2 or labels.shape[1] != M:
        return report(False, "shape", f"labels must have shape (rows, {M}), got {labels.shape}")
    if t.n_rows == 0:
        return report(False, "shape", "table has no rows")
    bound = bose_bush_bound(s, N)
    if t.n_rows > bound:
        return report(False, "bound", f"{t.n_rows} rows exceed the Bose-Bush bound {bound}")

    affine = True
    for r0 in range(0, t.n_rows, chunk):
        block = labels[r0:r0 + chunk].astype(np.int64)
        bad = np.argwhere((block < 0) | (block >= K))
        if bad.size:
            r, item = bad[0]
            what = {-1: "missing from", -2: "repeated in"}.get(int(block[r, item]), "mislabelled in")
            return report(False, "partition", f"item {item} is {what} row {r0 + r}", (r0 + r, int(item)))
        offs = np.arange(block.shape[0])[:, None] * K
        counts = np.bincount((block + offs).ravel(), minlength=block.shape[0] * K).reshape(-1, K)
        bad = np.argwhere(counts != col_size)
        if bad.size:
            r, c = bad[0]
            return report(False, "column-size",
                          f"row {r0 + r} column {c} has {counts[r, c]} items, expected {col_size}",
                          (r0 + r, int(c)))
        if affine:
            lin = block[:, [1 << p for p in range(N * s)]] ^ block[:, :1]
            affine = bool((_affine_predict(block[:, 0], lin) == block).all())

    if t.n_rows == 1:
        return report(True, "single-row")
    if s == 1:
        return report(False, "evenness", "with s = 1 only one row can be complementary")

    if affine:
        lin = (labels[:, [1 << p for p in range(N * s)]].astype(np.int64)
               ^ labels[:, :1].astype(np.int64))
        alphas = np.arange(1, K, dtype=np.int64)
        par = np.bitwise_count(alphas[None, :, None] & lin[:, None, :]) & 1
        duals = (par.astype(np.int64) << np.arange(N * s, dtype=np.int64)).sum(axis=2).ravel()
        order = np.argsort(duals, kind="stable")
        same = np.flatnonzero(duals[order][1:] == duals[order][:-1])
        if not same.size:
            return report(True, "affine-dual")
        a, b = sorted((int(order[same[0]]) // (K - 1), int(order[same[0] + 1]) // (K - 1)))
        if a == b:
            return report(False, "column-size", f"row {a} is not a balanced partition", (a,))
        methods = "affine-dual"
    else:
        methods = "pairwise"
        for a, b in itertools.combinations(range(t.n_rows), 2):
            if (_pair_counts(labels, a, b, K) != inter).any():
                break
        else:
            return report(True, methods)
    counts = _pair_counts(labels, a, b, K)
    u, v = np.argwhere(counts != inter)[0]
    return report(False, methods,
                  f"row {a} column {u} meets row {b} column {v} in {counts[u, v]} items, expected {inter}",
                  (a, b, int(u), int(v)))


# -- classification ---------------------------------------------------------

def classify_question(q: CompositeQuestion) -> str:
    """'product' if some nonzero multiple of ``lam`` lies in the prime field {0, 1}."""
    F = field(q.N)
    for mu in range(1, F.order):
        if all(F.mul(mu, c) in (0, 1) for c in q.coords):
            return "product"
    return "entangled"


def walsh_hadamard(a: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform along the last axis (length 2**n)."""
    a = np.array(a, dtype=np.int64)
    n = a.shape[-1]
    lead = a.shape[:-1]
    h = 1
    while h < n:
        a = a.reshape(*lead, n // (2 * h), 2, h)
        x = a[..., 0, :].copy()
        y = a[..., 1, :]
        a[..., 0, :] += y
        a[..., 1, :] = x - y
        h *= 2
    return a.reshape(*lead, n)


def gf2_rank(vectors: Iterable[int]) -> int:
    basis: list[int] = []
    for v in vectors:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
    return len(basis)


def constant_parities(labels_row: np.ndarray, K: int) -> np.ndarray:
    """Item parities (as bit masks over item bits) constant on every column."""
    onehot = np.stack([(labels_row == c) for c in range(K)]).astype(np.int64)
    spectra = np.abs(walsh_hadamard(onehot))
    sizes = onehot.sum(axis=1)
    return np.flatnonzero((spectra == sizes[:, None]).all(axis=0))


def classify_partition(labels_row: np.ndarray, s: int, N: int) -> str:
    """Decide product/entangled from a row's partition alone.

    Product iff N independent parities, each over a single box's bits,
    are constant on every column; such parities then label the columns.
    """
    consts = constant_parities(np.asarray(labels_row), 1 << N)
    blocks = [((1 << s) - 1) << (s * (N - k)) for k in range(1, N + 1)]
    local = [int(w) for w in consts if w and any(int(w) & ~blk == 0 for blk in blocks)]
    return "product" if gf2_rank(local) >= N else "entangled"


# -- export -----------------------------------------------------------------

CSV_HEADER = "s,N,rows,columns"


def table_to_csv(t: ComplementarityTable) -> str:
    out = io.StringIO()
    out.write(CSV_HEADER + "\n")
    out.write(f"{t.s},{t.N},{t.n_rows},{t.n_columns}\n")
    for r in range(t.n_rows):
        lam = t.questions[r] if r < len(t.questions) else (0,) * t.s
        cols = [";".join(map(str, c)) for c in t.columns(r)]
        out.write(",".join([*map(str, lam), *cols]) + "\n")
    return out.getvalue()


def table_from_csv(text: str) -> ComplementarityTable:
    lines = text.splitlines()
    if not lines or lines[0].strip() != CSV_HEADER:
        raise ValueError(f"expected header {CSV_HEADER!r}")
    try:
        s, N, n_rows, K = map(int, lines[1].split(","))
    except (IndexError, ValueError):
        raise ValueError("malformed size line after the header") from None
    if K != 1 << N:
        raise ValueError(f"columns must be 2^N = {1 << N}, got {K}")
    body = [ln for ln in lines[2:] if ln.strip()]
    if len(body) != n_rows:
        raise ValueError(f"header announces {n_rows} rows, found {len(body)}")
    questions, rows = [], []
    for ln in body:
        fields = ln.split(",")
        if len(fields) != s + K:
            raise ValueError(f"row has {len(fields)} fields, expected {s + K}")
        questions.append(tuple(int(v) for v in fields[:s]))
        rows.append([[int(i) for i in f.split(";") if i] for f in fields[s:]])
    return ComplementarityTable.from_columns(s, N, rows, questions)
