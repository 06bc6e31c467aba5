"""Strictly local (banded block-Laurent) operators on l2(Z, C^n).

An operator is stored as a finite family of coefficient profiles
``a[i, j, y]`` with ``|y| <= k``: the (i, j) block acts as
``sum_y  a[i,j,y](x) * (shift^y)``, where ``(shift^y psi)(x) = psi(x + y)``.
All coefficients are eventually constant (:class:`ParameterProfile`), so
composition, adjoints and endpoint limits are computed exactly at the
coefficient level; dense matrices enter only through finite sections.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .profiles import ParameterProfile


def _profile(v) -> ParameterProfile:
    if isinstance(v, ParameterProfile):
        return v
    kind = "real" if complex(v).imag == 0.0 else "complex"
    return ParameterProfile.constant(v, kind)


@dataclass(frozen=True)
class BandedOperator:
    """Banded block-Laurent operator with eventually constant coefficients."""

    block_size: int
    bandwidth: int
    coeff: dict = field(default_factory=dict)

    def __post_init__(self):
        n = self.block_size
        if n < 1:
            raise ValueError("block_size must be positive")
        cleaned = {}
        width = 0
        for (i, j, y), prof in self.coeff.items():
            prof = _profile(prof)
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"block index ({i}, {j}) outside {n}x{n}")
            if prof.is_zero():
                continue
            cleaned[(i, j, int(y))] = prof
            width = max(width, abs(int(y)))
        object.__setattr__(self, "coeff", cleaned)
        object.__setattr__(self, "bandwidth", width)

    # -- construction -----------------------------------------------------

    @classmethod
    def identity(cls, block_size: int = 1) -> "BandedOperator":
        return cls(block_size, 0, {(i, i, 0): 1.0 for i in range(block_size)})

    @classmethod
    def shift(cls, power: int, block_size: int = 1) -> "BandedOperator":
        """shift^power on each component: (psi_i)(x) -> psi_i(x + power)."""
        return cls(block_size, abs(power), {(i, i, power): 1.0 for i in range(block_size)})

    @classmethod
    def multiplication(cls, entries) -> "BandedOperator":
        """Bandwidth-0 operator from an n x n array of profiles/scalars."""
        n = len(entries)
        coeff = {}
        for i, row in enumerate(entries):
            if len(row) != n:
                raise ValueError("entries must be square")
            for j, v in enumerate(row):
                if v is None:
                    continue
                coeff[(i, j, 0)] = _profile(v)
        return cls(n, 0, coeff)

    @classmethod
    def from_blocks(cls, block_size: int, blocks) -> "BandedOperator":
        """Assemble from ``{(i, j): {offset: profile}}``."""
        coeff = {}
        for (i, j), offsets in blocks.items():
            for y, prof in offsets.items():
                coeff[(i, j, y)] = _profile(prof)
        return cls(block_size, 0, coeff)

    # -- access -------------------------------------------------------------

    def coefficient(self, i: int, j: int, y: int) -> ParameterProfile:
        prof = self.coeff.get((i, j, y))
        if prof is None:
            return ParameterProfile.constant(0.0, "real")
        return prof

    def sub_block(self, i: int, j: int) -> "BandedOperator":
        """The (i, j) block as a scalar (block-size 1) operator."""
        coeff = {
            (0, 0, y): prof for (bi, bj, y), prof in self.coeff.items() if bi == i and bj == j
        }
        return BandedOperator(1, 0, coeff)

    # -- algebra ------------------------------------------------------------

    def compose(self, other: "BandedOperator") -> "BandedOperator":
        """Exact coefficient-level product self @ other."""
        if self.block_size != other.block_size:
            raise ValueError(
                f"block size mismatch: {self.block_size} vs {other.block_size}"
            )
        acc: dict[tuple, ParameterProfile] = {}
        for (i, l, y1), a in self.coeff.items():
            for (l2, j, y2), b in other.coeff.items():
                if l2 != l:
                    continue
                term = a * b.shifted(y1)
                key = (i, j, y1 + y2)
                prev = acc.get(key)
                acc[key] = term if prev is None else prev + term
        return BandedOperator(self.block_size, 0, acc)

    def __matmul__(self, other):
        return self.compose(other)

    def adjoint(self) -> "BandedOperator":
        coeff = {
            (j, i, -y): prof.conj().shifted(-y) for (i, j, y), prof in self.coeff.items()
        }
        return BandedOperator(self.block_size, 0, coeff)

    def scaled(self, c) -> "BandedOperator":
        return BandedOperator(
            self.block_size, 0, {k: prof * c for k, prof in self.coeff.items()}
        )

    def __add__(self, other: "BandedOperator") -> "BandedOperator":
        if self.block_size != other.block_size:
            raise ValueError("block size mismatch")
        acc = dict(self.coeff)
        for key, prof in other.coeff.items():
            prev = acc.get(key)
            acc[key] = prof if prev is None else prev + prof
        return BandedOperator(self.block_size, 0, acc)

    def __sub__(self, other: "BandedOperator") -> "BandedOperator":
        return self + other.scaled(-1.0)

    def __neg__(self):
        return self.scaled(-1.0)

    # -- comparison ----------------------------------------------------------

    def max_coeff_diff(self, other: "BandedOperator") -> float:
        keys = set(self.coeff) | set(other.coeff)
        worst = 0.0
        for i, j, y in keys:
            worst = max(worst, self.coefficient(i, j, y).max_abs_diff(other.coefficient(i, j, y)))
        return worst

    def allclose(self, other: "BandedOperator", tol: float = 1e-12) -> bool:
        return self.block_size == other.block_size and self.max_coeff_diff(other) <= tol

    @property
    def support_radius(self) -> int:
        return max((prof.support_radius for prof in self.coeff.values()), default=0)

    # -- finite sections -------------------------------------------------------

    def finite_section(self, window: int) -> "FiniteSection":
        """Compression to sites [-N, N] with zero padding outside."""
        N = int(window)
        k = self.bandwidth
        if N < k:
            raise ValueError(f"window {N} smaller than bandwidth {k}")
        n = self.block_size
        size = n * (2 * N + 1)
        mat = np.zeros((size, size), dtype=complex)
        for (i, j, y), prof in self.coeff.items():
            for x in range(-N, N + 1):
                xp = x + y
                if -N <= xp <= N:
                    mat[(x + N) * n + i, (xp + N) * n + j] += prof.value(x)
        return FiniteSection(N, n, k, mat)


@dataclass
class FiniteSection:
    """Dense compression of a banded operator to the window [-N, N].

    Rows (and columns) within ``source_bandwidth`` of the window edge are
    boundary-affected: they differ from the rows of the infinite operator
    because the truncation drops matrix entries.  Comparisons should restrict
    to interior rows via :meth:`rows_within`.
    """

    window: int
    block_size: int
    source_bandwidth: int
    matrix: np.ndarray

    @property
    def size(self) -> int:
        return self.block_size * (2 * self.window + 1)

    def block_sites(self) -> np.ndarray:
        """Lattice site of each flat row index."""
        return np.repeat(np.arange(-self.window, self.window + 1), self.block_size)

    def rows_within(self, margin: int) -> np.ndarray:
        """Flat indices of block rows at distance >= margin from the edge."""
        sites = self.block_sites()
        return np.nonzero(np.abs(sites) <= self.window - margin)[0]

    def boundary_row_mask(self) -> np.ndarray:
        """True for rows flagged boundary-affected (within k of the edge)."""
        sites = self.block_sites()
        return np.abs(sites) > self.window - self.source_bandwidth

    def interior(self, margin: int | None = None) -> np.ndarray:
        """Square sub-matrix on the window shrunk by ``margin`` on both sides."""
        if margin is None:
            margin = self.source_bandwidth
        idx = self.rows_within(margin)
        return self.matrix[np.ix_(idx, idx)]


# Module-level aliases matching the operation vocabulary.

def shift(power: int) -> BandedOperator:
    return BandedOperator.shift(power)


def compose(a: BandedOperator, b: BandedOperator) -> BandedOperator:
    return a.compose(b)


def adjoint(a: BandedOperator) -> BandedOperator:
    return a.adjoint()


def finite_section(a: BandedOperator, window: int) -> FiniteSection:
    return a.finite_section(window)
