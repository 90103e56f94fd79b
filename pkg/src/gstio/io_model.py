"""Input-output table model and the classical Leontief quantity machinery.

The accounting identity behind everything here is

    x = Z·1 + f + e        (row balance: output = intermediate sales + final demand + exports)
    x = 1'Z + labor + capital + imports + indirect_tax   (column balance: output = input costs)

Per-unit coefficients follow as A = Z x̂⁻¹ and the primary-input rows divided
by x. A productive A (spectral radius < 1) admits the Leontief inverse
L = (I − A)⁻¹, which converts final demand into gross output: x = L(f + e).

All containers are frozen dataclasses over read-only numpy arrays, so every
operation is a pure function and instances can be shared across threads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NonProductive, Unbalanced, ZeroOutput

# Published IO tables carry rounding; this is the default slack on the
# accounting identities (relative to each sector's gross output).
BALANCE_TOLERANCE = 1e-6

PRODUCTIVITY_EPSILON = 1e-9


def _frozen(values, shape=None) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if shape is not None and arr.shape != shape:
        raise DimensionMismatch(f"expected shape {shape}, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DimensionMismatch("non-finite entries are not allowed")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class SectorSet:
    """Fixed, ordered list of sectors shared by every matrix and vector.

    Index i refers to the same sector everywhere in the system.
    """

    ids: tuple[str, ...]
    names: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "ids", tuple(self.ids))
        object.__setattr__(self, "names", tuple(self.names))
        if len(self.ids) == 0:
            raise DimensionMismatch("sector set must contain at least one sector")
        if len(self.ids) != len(self.names):
            raise DimensionMismatch("sector ids and names differ in length")
        if any(not s for s in self.ids):
            raise DimensionMismatch("sector ids must be non-empty strings")
        if len(set(self.ids)) != len(self.ids):
            dupes = sorted({s for s in self.ids if self.ids.count(s) > 1})
            raise DimensionMismatch(f"duplicate sector ids: {', '.join(dupes)}")

    @classmethod
    def from_ids(cls, ids) -> "SectorSet":
        ids = tuple(ids)
        return cls(ids=ids, names=ids)

    def __len__(self) -> int:
        return len(self.ids)

    def index(self, sector_id: str) -> int:
        try:
            return self.ids.index(sector_id)
        except ValueError:
            raise KeyError(sector_id) from None


@dataclass(frozen=True)
class IOTable:
    """Balanced inter-industry flow table in currency units.

    ``Z`` holds intermediate flows (row = selling sector, column = buying
    sector), ``f``/``e`` are final-demand and export columns, and the four
    primary-input rows hold labor compensation, operating surplus, imports
    and indirect taxes per buying sector. ``f`` may carry negative entries
    (inventory changes); everything else is nonnegative and ``x`` strictly
    positive.

    Construction validates structure only. Balance is checked separately via
    :meth:`check_balance` (or :func:`balance_report`), because diagnosing an
    unbalanced table requires building one.
    """

    sectors: SectorSet
    Z: np.ndarray
    f: np.ndarray
    e: np.ndarray
    labor: np.ndarray
    capital: np.ndarray
    imports: np.ndarray
    indirect_tax: np.ndarray
    x: np.ndarray

    def __post_init__(self):
        n = len(self.sectors)
        object.__setattr__(self, "Z", _frozen(self.Z, (n, n)))
        for name in ("f", "e", "labor", "capital", "imports", "indirect_tax", "x"):
            object.__setattr__(self, name, _frozen(getattr(self, name), (n,)))
        for name in ("Z", "e", "labor", "capital", "imports", "indirect_tax"):
            arr = getattr(self, name)
            if np.any(arr < 0):
                raise DimensionMismatch(f"negative entries in {name} are not allowed")
        bad = np.nonzero(self.x <= 0)[0]
        if bad.size:
            ids = ", ".join(self.sectors.ids[i] for i in bad)
            raise ZeroOutput(f"gross output must be strictly positive; offending sectors: {ids}")

    @property
    def n(self) -> int:
        return len(self.sectors)

    def check_balance(self, tolerance: float = BALANCE_TOLERANCE) -> None:
        """Raise :class:`Unbalanced` if either accounting identity fails."""
        report = balance_report(self)
        if not report.within(tolerance):
            raise Unbalanced(
                "table violates balance at relative tolerance "
                f"{tolerance:g} (worst row residual {report.max_row_residual:.3e} "
                f"at sector {self.sectors.ids[report.worst_row_sector]}, "
                f"worst column residual {report.max_column_residual:.3e} "
                f"at sector {self.sectors.ids[report.worst_column_sector]})"
            )


@dataclass(frozen=True)
class CoefficientBundle:
    """Per-unit-of-output coefficients: matrix ``A`` plus exogenous cost rows.

    Column j of ``A`` is sector j's intermediate input recipe; ``labor``,
    ``capital``, ``imports`` and ``indirect_tax`` complete the column so that
    for a balanced source table each column sums to one.
    """

    sectors: SectorSet
    A: np.ndarray
    labor: np.ndarray
    capital: np.ndarray
    imports: np.ndarray
    indirect_tax: np.ndarray

    def __post_init__(self):
        n = len(self.sectors)
        object.__setattr__(self, "A", _frozen(self.A, (n, n)))
        for name in ("labor", "capital", "imports", "indirect_tax"):
            object.__setattr__(self, name, _frozen(getattr(self, name), (n,)))
        for name in ("A", "labor", "capital", "imports", "indirect_tax"):
            arr = getattr(self, name)
            if np.any(arr < -1e-12) or np.any(arr > 1 + 1e-12):
                raise DimensionMismatch(f"coefficients in {name} must lie in [0, 1]")

    @property
    def n(self) -> int:
        return len(self.sectors)

    @property
    def value_added(self) -> np.ndarray:
        """Labor plus capital coefficient per sector (the GST base)."""
        return self.labor + self.capital

    def column_sums(self) -> np.ndarray:
        """A's column sums plus all exogenous rows; equals 1 for balanced sources."""
        return self.A.sum(axis=0) + self.labor + self.capital + self.imports + self.indirect_tax


@dataclass(frozen=True)
class BalanceReport:
    """Per-sector relative residuals of the two accounting identities."""

    row_residuals: np.ndarray
    column_residuals: np.ndarray

    @property
    def max_row_residual(self) -> float:
        return float(self.row_residuals.max())

    @property
    def max_column_residual(self) -> float:
        return float(self.column_residuals.max())

    @property
    def worst_row_sector(self) -> int:
        return int(self.row_residuals.argmax())

    @property
    def worst_column_sector(self) -> int:
        return int(self.column_residuals.argmax())

    def within(self, tolerance: float) -> bool:
        return self.max_row_residual <= tolerance and self.max_column_residual <= tolerance


def balance_report(table: IOTable) -> BalanceReport:
    """Relative residuals of both balance identities, per sector.

    Residuals are relative to each sector's gross output (absolute where
    output is zero, which structure validation normally rules out).
    """
    denom = np.where(table.x != 0, np.abs(table.x), 1.0)
    row_lhs = table.Z.sum(axis=1) + table.f + table.e
    col_lhs = (
        table.Z.sum(axis=0)
        + table.labor
        + table.capital
        + table.imports
        + table.indirect_tax
    )
    return BalanceReport(
        row_residuals=_frozen(np.abs(row_lhs - table.x) / denom),
        column_residuals=_frozen(np.abs(col_lhs - table.x) / denom),
    )


def derive_coefficients(
    table: IOTable,
    *,
    check_balance: bool = True,
    balance_tolerance: float = BALANCE_TOLERANCE,
) -> CoefficientBundle:
    """Divide flows by gross output: A = Z x̂⁻¹ and primary rows / x.

    Raises :class:`Unbalanced` when the source table fails its accounting
    identities (skip with ``check_balance=False`` for tables with known
    rounding) and :class:`ZeroOutput` if any x[j] <= 0.
    """
    if np.any(table.x <= 0):
        bad = np.nonzero(table.x <= 0)[0]
        ids = ", ".join(table.sectors.ids[i] for i in bad)
        raise ZeroOutput(f"cannot derive coefficients; zero output in sectors: {ids}")
    if check_balance:
        table.check_balance(balance_tolerance)
    return CoefficientBundle(
        sectors=table.sectors,
        A=table.Z / table.x[np.newaxis, :],
        labor=table.labor / table.x,
        capital=table.capital / table.x,
        imports=table.imports / table.x,
        indirect_tax=table.indirect_tax / table.x,
    )


def spectral_radius(
    M: np.ndarray,
    *,
    tolerance: float = 1e-12,
    max_iterations: int = 1000,
) -> tuple[float, int, bool]:
    """Estimate the spectral radius of a square matrix by power iteration.

    Deterministic all-ones start vector, infinity-norm growth estimate.
    Returns ``(radius, iterations, converged)``. Exact for the nonnegative
    matrices this package feeds it (Perron root dominates).
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionMismatch(f"square matrix required, got shape {M.shape}")
    v = np.ones(M.shape[0])
    estimate = 0.0
    for iteration in range(1, max_iterations + 1):
        w = M @ v
        norm = float(np.linalg.norm(w, np.inf))
        if norm == 0.0:
            return 0.0, iteration, True
        if abs(norm - estimate) <= tolerance * max(norm, 1.0):
            return norm, iteration, True
        estimate = norm
        v = w / norm
    return estimate, max_iterations, False


def leontief_inverse(A: np.ndarray) -> np.ndarray:
    """(I − A)⁻¹ for a productive coefficient matrix.

    The result dominates the identity elementwise and is nonnegative.
    Raises :class:`NonProductive` when the spectral radius reaches
    1 − 1e-9 or the factorization fails.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"square matrix required, got shape {A.shape}")
    radius, _, _ = spectral_radius(A)
    if radius >= 1.0 - PRODUCTIVITY_EPSILON:
        raise NonProductive(f"spectral radius {radius:.6g} >= 1; economy not productive")
    try:
        inverse = np.linalg.solve(np.eye(A.shape[0]) - A, np.eye(A.shape[0]))
    except np.linalg.LinAlgError as exc:
        raise NonProductive(f"(I - A) is singular: {exc}") from exc
    return inverse


def quantity_model(L: np.ndarray, f: np.ndarray, e: np.ndarray) -> np.ndarray:
    """Gross output needed to serve final demand plus exports: L @ (f + e)."""
    L = np.asarray(L, dtype=float)
    f = np.asarray(f, dtype=float)
    e = np.asarray(e, dtype=float)
    if L.ndim != 2 or L.shape[0] != L.shape[1]:
        raise DimensionMismatch(f"square inverse required, got shape {L.shape}")
    if f.shape != (L.shape[0],) or e.shape != (L.shape[0],):
        raise DimensionMismatch(
            f"demand columns must have length {L.shape[0]}, got {f.shape} and {e.shape}"
        )
    return L @ (f + e)
