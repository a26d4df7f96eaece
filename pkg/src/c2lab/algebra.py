"""Finite-field linear algebra and multilinear polynomials.

Two polynomial representations live here:

* :class:`Gf2Poly`, a multilinear polynomial over GF(2) stored as a set of
  monomial bit masks (bit ``i`` set = variable ``i`` present).  Used for all
  symbolic mod-2 identities.
* dense coefficient tensors of shape ``(2,) * m`` holding integer
  coefficients of a multilinear polynomial; axis ``i`` is variable ``i``.
  These are what point counting runs on: :func:`evaluate_all` turns one into
  the table of its values on every point of ``F_p^m`` in ``O(m p^m)`` time.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Iterable, Iterator, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

log = logging.getLogger(__name__)

MAX_VARS = 64
DEFAULT_BUDGET = 2 ** 26


class BudgetExceeded(RuntimeError):
    """An exhaustive loop would exceed the configured size limit."""

    def __init__(self, required: int, budget: int, what: str = "points"):
        super().__init__(f"{what}: {required} evaluations required, budget is {budget}")
        self.required = required
        self.budget = budget


# --------------------------------------------------------------------------
# matrices over F_p
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class FpMatrix:
    p: int
    entries: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=np.int64) % self.p
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]


def _det_gf2(rows: list[int], n: int) -> int:
    rows = list(rows)
    for col in range(n):
        bit = 1 << col
        piv = next((r for r in range(col, n) if rows[r] & bit), None)
        if piv is None:
            return 0
        rows[col], rows[piv] = rows[piv], rows[col]
        for r in range(col + 1, n):
            if rows[r] & bit:
                rows[r] ^= rows[col]
    return 1


def det_fp(m: FpMatrix) -> int:
    """Determinant mod ``p`` by Gaussian elimination with pivot search."""
    if m.rows != m.cols:
        raise ValueError(f"determinant of non-square {m.rows}x{m.cols} matrix")
    n, p = m.rows, m.p
    if n == 0:
        return 1 % p
    if p == 2:
        packed = [int(sum(1 << j for j in np.flatnonzero(row))) for row in m.entries]
        return _det_gf2(packed, n)
    a = [[int(x) for x in row] for row in m.entries]
    det = 1
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            return 0
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        pv = a[col][col]
        det = det * pv % p
        inv = pow(pv, -1, p)
        for r in range(col + 1, n):
            f = a[r][col] * inv % p
            if f:
                rr, rc = a[r], a[col]
                for j in range(col, n):
                    rr[j] = (rr[j] - f * rc[j]) % p
    return det % p


def det_fp_batch(mats: np.ndarray, p: int) -> np.ndarray:
    """Determinants mod ``p`` of a stack of square matrices, shape ``(B, n, n)``."""
    a = np.array(mats, dtype=np.int64) % p
    if a.ndim != 3 or a.shape[1] != a.shape[2]:
        raise ValueError("expected an array of shape (B, n, n)")
    batch, n, _ = a.shape
    det = np.ones(batch, dtype=np.int64)
    rows = np.arange(batch)
    inv_table = None
    if p < 2 ** 16:
        inv_table = np.zeros(p, dtype=np.int64)
        inv_table[1:] = [pow(x, -1, p) for x in range(1, p)]
    for k in range(n):
        nz = a[:, k:, k] != 0
        has = nz.any(axis=1)
        det[~has] = 0
        piv = nz.argmax(axis=1) + k
        swap = has & (piv != k)
        if swap.any():
            idx = rows[swap]
            top = a[idx, k].copy()
            a[idx, k] = a[idx, piv[swap]]
            a[idx, piv[swap]] = top
            det[swap] = (-det[swap]) % p
        pv = a[:, k, k]
        det = det * pv % p
        if k + 1 == n:
            break
        if inv_table is not None:
            inv = inv_table[pv]
        else:
            inv = np.array([pow(int(x), -1, p) if x else 0 for x in pv], dtype=np.int64)
        f = a[:, k + 1:, k] * inv[:, None] % p
        a[:, k + 1:, k:] = (a[:, k + 1:, k:] - f[:, :, None] * a[:, None, k, k:]) % p
    return det % p


def det_int_batch(mats: np.ndarray) -> np.ndarray:
    """Exact integer determinants of small integer matrices via LAPACK.

    Rounds the floating point result and refuses if any value is not within
    1e-6 of an integer (possible only for huge entries, never for incidence
    structures at the sizes used here).
    """
    a = np.asarray(mats, dtype=np.float64)
    if a.shape[-1] == 0:
        return np.ones(a.shape[0], dtype=np.int64)
    d = np.linalg.det(a)
    r = np.rint(d)
    if np.abs(d - r).max(initial=0.0) > 1e-6 or np.abs(r).max(initial=0.0) > 2 ** 50:
        raise ArithmeticError("floating point determinant not safely integral")
    return r.astype(np.int64)


# --------------------------------------------------------------------------
# multilinear polynomials over GF(2)
# --------------------------------------------------------------------------

class Gf2Poly:
    """Multilinear polynomial over GF(2) as a set of monomial masks.

    Adding a monomial already present cancels it.  Variable indices are
    limited to ``0..63``.
    """

    __slots__ = ("monomials",)

    def __init__(self, monomials: Iterable[int] = ()):
        acc: set[int] = set()
        for mono in monomials:
            mono = int(mono)
            if mono < 0 or mono >> MAX_VARS:
                raise ValueError(f"monomial mask {mono:#x} uses variables beyond {MAX_VARS - 1}")
            acc ^= {mono}
        self.monomials = frozenset(acc)

    @classmethod
    def var(cls, i: int) -> "Gf2Poly":
        return cls([1 << i])

    @classmethod
    def one(cls) -> "Gf2Poly":
        return cls([0])

    @classmethod
    def from_index_sets(cls, sets: Iterable[Iterable[int]]) -> "Gf2Poly":
        return cls(sum(1 << i for i in set(s)) for s in sets)

    def __add__(self, other: "Gf2Poly") -> "Gf2Poly":
        out = Gf2Poly.__new__(Gf2Poly)
        out.monomials = self.monomials ^ other.monomials
        return out

    __sub__ = __add__

    def __mul__(self, other: "Gf2Poly") -> "Gf2Poly":
        acc: set[int] = set()
        for a in self.monomials:
            for b in other.monomials:
                if a & b:
                    raise ValueError("product leaves the multilinear range (shared variable)")
                acc ^= {a | b}
        out = Gf2Poly.__new__(Gf2Poly)
        out.monomials = frozenset(acc)
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, Gf2Poly) and self.monomials == other.monomials

    def __hash__(self) -> int:
        return hash(self.monomials)

    def __bool__(self) -> bool:
        return bool(self.monomials)

    def __len__(self) -> int:
        return len(self.monomials)

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.monomials))

    def __repr__(self) -> str:
        if not self.monomials:
            return "Gf2Poly(0)"
        terms = [" ".join(f"x{i}" for i in _bits(mono)) or "1" for mono in self]
        return "Gf2Poly(" + " + ".join(terms) + ")"

    @property
    def variables(self) -> int:
        out = 0
        for mono in self.monomials:
            out |= mono
        return out

    @property
    def degree(self) -> int:
        return max((mono.bit_count() for mono in self.monomials), default=-1)

    def evaluate(self, point: int | Sequence[int]) -> int:
        """Value at a 0/1 point, given as a bit mask or a sequence."""
        if not isinstance(point, int):
            point = sum(1 << i for i, x in enumerate(point) if x % 2)
        return sum(1 for mono in self.monomials if mono & point == mono) & 1

    def substitute_zero(self, mask: int) -> "Gf2Poly":
        return Gf2Poly(mono for mono in self.monomials if not mono & mask)

    def dump(self) -> str:
        """One monomial per line as sorted variable indices; ``-`` is the constant 1."""
        keyed = sorted(self.monomials, key=lambda mono: (mono.bit_count(), list(_bits(mono))))
        return "\n".join(" ".join(map(str, _bits(mono))) or "-" for mono in keyed)

    def to_dense(self, m: int) -> np.ndarray:
        """0/1 coefficient tensor of shape ``(2,) * m``."""
        if self.variables >> m:
            raise ValueError(f"polynomial has variables beyond {m - 1}")
        return dense_from_monomials({mono: 1 for mono in self.monomials}, m)


def _bits(mask: int) -> Iterator[int]:
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def full_monomial_coefficient(f: Gf2Poly, n: int) -> int:
    """Coefficient of ``x_0 x_1 ... x_{n-1}`` in ``f``."""
    return int(((1 << n) - 1) in f.monomials)


def product_full_coefficient(f: Gf2Poly, g: Gf2Poly, full: int) -> int:
    """Coefficient mod 2 of the monomial ``full`` (a variable mask) in
    ``f * g``, without forming the product.  Only disjoint monomial pairs
    can meet a squarefree target, so shared variables are harmless here."""
    return sum(1 for a in f.monomials if not a & ~full and (full ^ a) in g.monomials) & 1


# --------------------------------------------------------------------------
# dense multilinear polynomials and point counting
# --------------------------------------------------------------------------

def dense_from_monomials(coeffs: dict[int, int], m: int) -> np.ndarray:
    flat = np.zeros(1 << m, dtype=np.int64)
    for mono, c in coeffs.items():
        flat[mono] += c
    # flat index bit i <-> variable i; C-order reshape puts bit m-1 on axis 0
    return flat.reshape((2,) * m).transpose(tuple(range(m - 1, -1, -1))) if m else flat.reshape(())


def moebius(values: np.ndarray) -> np.ndarray:
    """Coefficients of the multilinear polynomial with the given values on
    ``{0,1}^m`` (one axis per variable)."""
    c = np.array(values, dtype=np.int64)
    for ax in range(c.ndim):
        lo = np.take(c, 0, axis=ax)
        hi = np.take(c, 1, axis=ax)
        c = np.stack([lo, hi - lo], axis=ax)
    return c


def _expand_axis(t: np.ndarray, ax: int, p: int) -> np.ndarray:
    lo = np.take(t, 0, axis=ax)
    hi = np.take(t, 1, axis=ax)
    return np.stack([(lo + x * hi) % p for x in range(p)], axis=ax)


def evaluate_all(coeffs: np.ndarray, p: int, axes: Iterable[int] | None = None) -> np.ndarray:
    """Values mod ``p`` at every point of ``F_p^m`` (or only along ``axes``,
    leaving the other axes as coefficient axes)."""
    t = np.asarray(coeffs, dtype=np.int64) % p
    for ax in (range(t.ndim) if axes is None else axes):
        t = _expand_axis(t, ax, p)
    return t


def count_points(tensors: Sequence[np.ndarray], p: int, budget: int = DEFAULT_BUDGET,
                 jobs: int = 1, block_elems: int = 1 << 20) -> int:
    """Number of points of ``F_p^m`` where the product of the given
    multilinear polynomials vanishes mod ``p``.

    The space is cut into ``p^b`` contiguous blocks by fixing the first ``b``
    variables; blocks are counted independently and summed, so the total does
    not depend on ``jobs``.
    """
    if not tensors:
        raise ValueError("need at least one polynomial")
    m = tensors[0].ndim
    if any(t.ndim != m for t in tensors):
        raise ValueError("all polynomials must have the same variables")
    total = p ** m
    if total > budget:
        raise BudgetExceeded(total, budget)
    log.debug("counting %d points over F_%d^%d", total, p, m)
    b, blocks = _blocks(m, p, block_elems)
    heads = [evaluate_all(t, p, axes=range(b)) for t in tensors]

    def run(chunk):
        acc = 0
        for idx in chunk:
            zero = None
            for h in heads:
                vals = evaluate_all(h[idx], p) == 0
                zero = vals if zero is None else (zero | vals)
            acc += int(np.count_nonzero(zero))
        return acc

    if jobs <= 1 or len(blocks) == 1:
        return run(blocks)
    chunks = [blocks[i::jobs] for i in range(jobs)]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return sum(pool.map(run, chunks))


def _blocks(m: int, p: int, block_elems: int) -> tuple[int, list[tuple[int, ...]]]:
    b = 0
    while b < m and p ** (m - b) > block_elems:
        b += 1
    return b, list(itertools.product(range(p), repeat=b))


def count_zeros(coeffs: np.ndarray, p: int, budget: int = DEFAULT_BUDGET,
                jobs: int = 1, block_elems: int = 1 << 20) -> int:
    """Zeros of one multilinear polynomial in ``F_p^m``.

    The last two variables are solved in closed form: for fixed values of the
    others the polynomial reads ``A xy + B x + C y + D``, whose number of
    solutions depends only on ``A, B, C, D``.  Only ``p^(m-2)`` points are
    enumerated, and that is what the budget is checked against.
    """
    t = np.asarray(coeffs)
    m = t.ndim
    if m < 2:
        return count_points([t], p, budget=budget, jobs=jobs, block_elems=block_elems)
    total = p ** (m - 2)
    if total > budget:
        raise BudgetExceeded(total, budget)
    parts = [t[..., 1, 1], t[..., 1, 0], t[..., 0, 1], t[..., 0, 0]]
    b, blocks = _blocks(m - 2, p, block_elems)
    heads = [evaluate_all(s, p, axes=range(b)) for s in parts]

    def run(chunk):
        acc = 0
        for idx in chunk:
            a, bb, c, d = (evaluate_all(h[idx], p) for h in heads)
            nz = a != 0
            delta = (bb * c - a * d) % p
            acc += (p - 1) * int(np.count_nonzero(nz & (delta != 0)))
            acc += (2 * p - 1) * int(np.count_nonzero(nz & (delta == 0)))
            lin = ~nz & ((bb != 0) | (c != 0))
            acc += p * int(np.count_nonzero(lin))
            acc += p * p * int(np.count_nonzero(~nz & (bb == 0) & (c == 0) & (d == 0)))
        return acc

    if jobs <= 1 or len(blocks) == 1:
        return run(blocks)
    chunks = [blocks[i::jobs] for i in range(jobs)]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return sum(pool.map(run, chunks))
