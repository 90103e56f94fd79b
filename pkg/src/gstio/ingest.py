"""CSV schemas, loading, validation and classification concordance.

All files are UTF-8 CSV with a header row, '.' decimal separator and no
thousands separators. Every load error names the file, line and column
(1-based; the header is line 1).

IO table (``load_io_table``)::

    sector_id,sector_name,<id_1>,...,<id_n>,FINAL_DEMAND,EXPORTS,OUTPUT
    <id_1>,<name_1>,Z[1,1],...,Z[1,n],f[1],e[1],x[1]
    ...
    LABOR,,<per-sector labor compensation>,,,
    CAPITAL,,<per-sector operating surplus>,,,
    IMPORTS,,<per-sector imports>,,,
    INDIRECT_TAX,,<per-sector indirect taxes>,,,

    Sector rows appear in header order. The primary-input rows follow; a
    single combined VALUE_ADDED row may replace LABOR + CAPITAL (it is
    stored as capital with labor = 0, which changes nothing downstream
    because the two only ever enter as their sum). Primary rows leave the
    three demand-side cells empty.

Rate schedule (``load_rate_schedule``)::

    sector_id,category,standard_share,note

    category is one of standard, zero_rated, exempt (case-insensitive;
    anything else is a hard error). standard_share is the fraction of the
    sector's output value that is standard-rated; an empty share defaults to
    1 for standard and 0 otherwise. Sectors absent from the file default to
    fully standard-rated, with one warning per sector.

Expenditure (``load_expenditure``), long format::

    group_id,dimension,label,item_code,amount

    dimension is one of income, ethnicity. Duplicate (group, item) rows sum.

Concordance (``load_concordance``)::

    item_code,sector_id,weight

    Weights per item must sum to 1 (±1e-9); each weight lies in (0, 1].

Category map (``load_category_map``)::

    code,category

    Categories are ordered by first appearance.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    BasisMismatch,
    InvalidShare,
    ParseError,
    SchemaError,
    UnknownSector,
    UnmappedItem,
    ZeroOutput,
)
from .incidence import (
    CategoryMap,
    ExpenditureBasis,
    ExpenditureMatrix,
    GroupDimension,
    HouseholdGroup,
)
from .io_model import (
    BALANCE_TOLERANCE,
    BalanceReport,
    IOTable,
    SectorSet,
    balance_report,
)
from .price_model import RateCategory, RateSchedule

LABOR_ROW = "LABOR"
CAPITAL_ROW = "CAPITAL"
VALUE_ADDED_ROW = "VALUE_ADDED"
IMPORTS_ROW = "IMPORTS"
INDIRECT_TAX_ROW = "INDIRECT_TAX"
DEMAND_COLUMNS = ("FINAL_DEMAND", "EXPORTS", "OUTPUT")

_CATEGORY_TOKENS = {
    "standard": RateCategory.STANDARD_RATED,
    "zero_rated": RateCategory.ZERO_RATED,
    "exempt": RateCategory.EXEMPT,
}

_DIMENSION_TOKENS = {d.value: d for d in GroupDimension}


def _read_rows(path) -> list[list[str]]:
    try:
        with open(path, "r", encoding="utf-8", newline="") as handle:
            return [row for row in csv.reader(handle)]
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc}", path=path) from exc


def _cell_float(cell: str, *, path, line: int, column: int) -> float:
    try:
        return float(cell)
    except ValueError:
        raise ParseError(f"not a number: {cell!r}", path=path, line=line, column=column) from None


def _require_width(row: list[str], width: int, *, path, line: int) -> None:
    if len(row) != width:
        raise ParseError(
            f"expected {width} fields, got {len(row)}", path=path, line=line, column=len(row) + 1
        )


def load_io_table(
    path,
    *,
    allow_unbalanced: bool = False,
    balance_tolerance: float = BALANCE_TOLERANCE,
) -> tuple[IOTable, BalanceReport]:
    """Load a flow table, validate it and return it with its balance report."""
    rows = _read_rows(path)
    if not rows:
        raise SchemaError("empty file", path=path, line=1)
    header = rows[0]
    if len(header) < 6 or header[0] != "sector_id" or header[1] != "sector_name":
        raise SchemaError(
            "header must start with sector_id,sector_name", path=path, line=1, column=1
        )
    if tuple(header[-3:]) != DEMAND_COLUMNS:
        raise SchemaError(
            f"header must end with {','.join(DEMAND_COLUMNS)}", path=path, line=1, column=len(header) - 2
        )
    ids = tuple(header[2:-3])
    n = len(ids)
    if n == 0:
        raise SchemaError("no sector columns in header", path=path, line=1, column=3)

    names = []
    Z = np.zeros((n, n))
    f = np.zeros(n)
    e = np.zeros(n)
    x = np.zeros(n)
    data_rows = rows[1:]
    if len(data_rows) < n:
        raise SchemaError(f"expected {n} sector rows, found {len(data_rows)}", path=path, line=len(rows))
    for i in range(n):
        line = i + 2
        row = data_rows[i]
        _require_width(row, len(header), path=path, line=line)
        if row[0] != ids[i]:
            raise SchemaError(
                f"sector rows must follow header order; expected {ids[i]!r}, got {row[0]!r}",
                path=path,
                line=line,
                column=1,
            )
        names.append(row[1])
        for j in range(n):
            Z[i, j] = _cell_float(row[2 + j], path=path, line=line, column=3 + j)
        f[i] = _cell_float(row[2 + n], path=path, line=line, column=3 + n)
        e[i] = _cell_float(row[3 + n], path=path, line=line, column=4 + n)
        x[i] = _cell_float(row[4 + n], path=path, line=line, column=5 + n)

    primary: dict[str, np.ndarray] = {}
    for k, row in enumerate(data_rows[n:]):
        line = n + k + 2
        if not row or not row[0]:
            continue
        _require_width(row, len(header), path=path, line=line)
        label = row[0]
        if label in primary:
            raise SchemaError(f"duplicate primary-input row {label}", path=path, line=line, column=1)
        if label not in (LABOR_ROW, CAPITAL_ROW, VALUE_ADDED_ROW, IMPORTS_ROW, INDIRECT_TAX_ROW):
            raise SchemaError(f"unknown row label {label!r}", path=path, line=line, column=1)
        values = np.array(
            [_cell_float(row[2 + j], path=path, line=line, column=3 + j) for j in range(n)]
        )
        primary[label] = values

    if VALUE_ADDED_ROW in primary and (LABOR_ROW in primary or CAPITAL_ROW in primary):
        raise SchemaError(
            f"{VALUE_ADDED_ROW} cannot be combined with {LABOR_ROW}/{CAPITAL_ROW}", path=path
        )
    if VALUE_ADDED_ROW in primary:
        labor = np.zeros(n)
        capital = primary[VALUE_ADDED_ROW]
    elif LABOR_ROW in primary and CAPITAL_ROW in primary:
        labor = primary[LABOR_ROW]
        capital = primary[CAPITAL_ROW]
    else:
        raise SchemaError(
            f"missing value-added rows: need {VALUE_ADDED_ROW} or both {LABOR_ROW} and {CAPITAL_ROW}",
            path=path,
        )
    for required in (IMPORTS_ROW, INDIRECT_TAX_ROW):
        if required not in primary:
            raise SchemaError(f"missing required row {required}", path=path)

    bad = np.nonzero(x <= 0)[0]
    if bad.size:
        names_bad = ", ".join(ids[i] for i in bad)
        raise ZeroOutput(f"{path}: OUTPUT must be strictly positive; offending sectors: {names_bad}")

    table = IOTable(
        sectors=SectorSet(ids=ids, names=tuple(names)),
        Z=Z,
        f=f,
        e=e,
        labor=labor,
        capital=capital,
        imports=primary[IMPORTS_ROW],
        indirect_tax=primary[INDIRECT_TAX_ROW],
        x=x,
    )
    report = balance_report(table)
    if not allow_unbalanced:
        table.check_balance(balance_tolerance)
    return table, report


def save_io_table(table: IOTable, path) -> None:
    """Serialize a table in the load_io_table schema, bit-exact on reload."""
    ids = table.sectors.ids
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["sector_id", "sector_name", *ids, *DEMAND_COLUMNS])
        for i, sector_id in enumerate(ids):
            writer.writerow(
                [
                    sector_id,
                    table.sectors.names[i],
                    *(repr(float(v)) for v in table.Z[i]),
                    repr(float(table.f[i])),
                    repr(float(table.e[i])),
                    repr(float(table.x[i])),
                ]
            )
        for label, values in (
            (LABOR_ROW, table.labor),
            (CAPITAL_ROW, table.capital),
            (IMPORTS_ROW, table.imports),
            (INDIRECT_TAX_ROW, table.indirect_tax),
        ):
            writer.writerow([label, "", *(repr(float(v)) for v in values), "", "", ""])


def load_rate_schedule(
    path,
    sectors: SectorSet,
    *,
    gst_rate: float = 0.06,
) -> tuple[RateSchedule, list[str]]:
    """Load the per-sector tax treatment list; absent sectors default to standard.

    The statutory rate is not part of the file (it belongs to the scenario),
    so it is passed in. Returns the schedule plus one warning per defaulted
    sector.
    """
    rows = _read_rows(path)
    if not rows:
        raise SchemaError("empty file", path=path, line=1)
    if rows[0][:3] != ["sector_id", "category", "standard_share"]:
        raise SchemaError(
            "header must be sector_id,category,standard_share,note", path=path, line=1, column=1
        )
    n = len(sectors)
    categories: list[RateCategory | None] = [None] * n
    shares = np.ones(n)
    for k, row in enumerate(rows[1:]):
        line = k + 2
        if not row or (len(row) == 1 and not row[0]):
            continue
        if len(row) < 3:
            raise ParseError(f"expected at least 3 fields, got {len(row)}", path=path, line=line, column=len(row) + 1)
        sector_id, token, share_cell = row[0], row[1], row[2]
        try:
            index = sectors.index(sector_id)
        except KeyError:
            raise UnknownSector(f"unknown sector {sector_id!r}", path=path, line=line, column=1) from None
        if categories[index] is not None:
            raise SchemaError(f"duplicate entry for sector {sector_id!r}", path=path, line=line, column=1)
        try:
            category = _CATEGORY_TOKENS[token.strip().lower()]
        except KeyError:
            raise SchemaError(
                f"unknown category {token!r}; expected one of {', '.join(_CATEGORY_TOKENS)}",
                path=path,
                line=line,
                column=2,
            ) from None
        if share_cell.strip() == "":
            share = 1.0 if category is RateCategory.STANDARD_RATED else 0.0
        else:
            share = _cell_float(share_cell, path=path, line=line, column=3)
        if not 0.0 <= share <= 1.0:
            raise InvalidShare(
                f"standard_share must lie in [0, 1], got {share}", path=path, line=line, column=3
            )
        categories[index] = category
        shares[index] = share

    warnings = []
    for i, category in enumerate(categories):
        if category is None:
            categories[i] = RateCategory.STANDARD_RATED
            shares[i] = 1.0
            warnings.append(
                f"sector {sectors.ids[i]} missing from {path}; defaulting to standard-rated, share 1"
            )
    schedule = RateSchedule(
        sectors=sectors,
        categories=tuple(categories),  # type: ignore[arg-type]
        standard_share=shares,
        gst_rate=gst_rate,
    )
    return schedule, warnings


def save_rate_schedule(schedule: RateSchedule, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["sector_id", "category", "standard_share", "note"])
        for i, sector_id in enumerate(schedule.sectors.ids):
            writer.writerow(
                [sector_id, schedule.categories[i].value, repr(float(schedule.standard_share[i])), ""]
            )


def load_expenditure(path, *, basis: ExpenditureBasis = ExpenditureBasis.ITEM_CODES) -> ExpenditureMatrix:
    """Load long-format group expenditure rows into a matrix."""
    rows = _read_rows(path)
    if not rows:
        raise SchemaError("empty file", path=path, line=1)
    if rows[0][:5] != ["group_id", "dimension", "label", "item_code", "amount"]:
        raise SchemaError(
            "header must be group_id,dimension,label,item_code,amount", path=path, line=1, column=1
        )
    groups: dict[str, HouseholdGroup] = {}
    items: list[str] = []
    item_index: dict[str, int] = {}
    amounts: dict[tuple[str, str], float] = {}
    for k, row in enumerate(rows[1:]):
        line = k + 2
        if not row or (len(row) == 1 and not row[0]):
            continue
        _require_width(row, 5, path=path, line=line)
        group_id, dim_token, label, item_code, amount_cell = row
        try:
            dimension = _DIMENSION_TOKENS[dim_token.strip().lower()]
        except KeyError:
            raise SchemaError(
                f"unknown dimension {dim_token!r}; expected one of {', '.join(_DIMENSION_TOKENS)}",
                path=path,
                line=line,
                column=2,
            ) from None
        group = HouseholdGroup(group_id=group_id, dimension=dimension, label=label)
        seen = groups.setdefault(group_id, group)
        if seen != group:
            raise SchemaError(
                f"group {group_id!r} redefined with different dimension/label",
                path=path,
                line=line,
                column=1,
            )
        amount = _cell_float(amount_cell, path=path, line=line, column=5)
        if amount < 0:
            raise ParseError(f"amount must be nonnegative, got {amount}", path=path, line=line, column=5)
        if item_code not in item_index:
            item_index[item_code] = len(items)
            items.append(item_code)
        key = (group_id, item_code)
        amounts[key] = amounts.get(key, 0.0) + amount

    if not groups:
        raise SchemaError("no expenditure rows", path=path, line=len(rows))
    values = np.zeros((len(groups), len(items)))
    for h, group_id in enumerate(groups):
        for (gid, item), amount in amounts.items():
            if gid == group_id:
                values[h, item_index[item]] = amount
    return ExpenditureMatrix(
        groups=tuple(groups.values()),
        items=tuple(items),
        values=values,
        basis=basis,
    )


def save_expenditure(matrix: ExpenditureMatrix, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["group_id", "dimension", "label", "item_code", "amount"])
        for h, group in enumerate(matrix.groups):
            for j, item in enumerate(matrix.items):
                writer.writerow(
                    [group.group_id, group.dimension.value, group.label, item, repr(float(matrix.values[h, j]))]
                )


@dataclass(frozen=True)
class ConcordanceLink:
    item_code: str
    sector_id: str
    weight: float


@dataclass(frozen=True)
class Concordance:
    """Weighted many-to-many map from consumption items to IO sectors.

    Weights for each item sum to 1, so applying the concordance conserves
    every group's total expenditure.
    """

    sectors: SectorSet
    links: tuple[ConcordanceLink, ...]

    def __post_init__(self):
        object.__setattr__(self, "links", tuple(self.links))
        sums: dict[str, float] = {}
        seen: set[tuple[str, str]] = set()
        for link in self.links:
            if not 0.0 < link.weight <= 1.0:
                raise ValueError(
                    f"weight for ({link.item_code}, {link.sector_id}) must lie in (0, 1]"
                )
            if link.sector_id not in self.sectors.ids:
                raise ValueError(f"link references unknown sector {link.sector_id!r}")
            key = (link.item_code, link.sector_id)
            if key in seen:
                raise ValueError(f"duplicate link {key}")
            seen.add(key)
            sums[link.item_code] = sums.get(link.item_code, 0.0) + link.weight
        bad = sorted(item for item, total in sums.items() if abs(total - 1.0) > 1e-9)
        if bad:
            raise ValueError(f"weights do not sum to 1 for items: {', '.join(bad)}")

    @property
    def item_codes(self) -> tuple[str, ...]:
        out: list[str] = []
        for link in self.links:
            if link.item_code not in out:
                out.append(link.item_code)
        return tuple(out)

    def weight_matrix(self, items: tuple[str, ...]) -> np.ndarray:
        """items × sectors weight matrix (rows sum to 1) for the given item order."""
        missing = [item for item in items if item not in set(self.item_codes)]
        if missing:
            raise UnmappedItem(missing, context="concordance")
        index = {item: j for j, item in enumerate(items)}
        weights = np.zeros((len(items), len(self.sectors)))
        for link in self.links:
            j = index.get(link.item_code)
            if j is not None:
                weights[j, self.sectors.index(link.sector_id)] = link.weight
        return weights


def load_concordance(path, sectors: SectorSet) -> Concordance:
    rows = _read_rows(path)
    if not rows:
        raise SchemaError("empty file", path=path, line=1)
    if rows[0][:3] != ["item_code", "sector_id", "weight"]:
        raise SchemaError("header must be item_code,sector_id,weight", path=path, line=1, column=1)
    links = []
    for k, row in enumerate(rows[1:]):
        line = k + 2
        if not row or (len(row) == 1 and not row[0]):
            continue
        _require_width(row, 3, path=path, line=line)
        item_code, sector_id, weight_cell = row
        if sector_id not in sectors.ids:
            raise UnknownSector(f"unknown sector {sector_id!r}", path=path, line=line, column=2)
        weight = _cell_float(weight_cell, path=path, line=line, column=3)
        if not 0.0 < weight <= 1.0:
            raise InvalidShare(f"weight must lie in (0, 1], got {weight}", path=path, line=line, column=3)
        links.append(ConcordanceLink(item_code=item_code, sector_id=sector_id, weight=weight))
    try:
        return Concordance(sectors=sectors, links=tuple(links))
    except ValueError as exc:
        raise SchemaError(str(exc), path=path) from exc


def save_concordance(concordance: Concordance, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["item_code", "sector_id", "weight"])
        for link in concordance.links:
            writer.writerow([link.item_code, link.sector_id, repr(float(link.weight))])


def load_category_map(path) -> CategoryMap:
    rows = _read_rows(path)
    if not rows:
        raise SchemaError("empty file", path=path, line=1)
    if rows[0][:2] != ["code", "category"]:
        raise SchemaError("header must be code,category", path=path, line=1, column=1)
    categories: list[str] = []
    assignments: dict[str, str] = {}
    for k, row in enumerate(rows[1:]):
        line = k + 2
        if not row or (len(row) == 1 and not row[0]):
            continue
        _require_width(row, 2, path=path, line=line)
        code, category = row
        if code in assignments:
            raise SchemaError(f"duplicate code {code!r}", path=path, line=line, column=1)
        if category not in categories:
            categories.append(category)
        assignments[code] = category
    if not assignments:
        raise SchemaError("no category assignments", path=path, line=len(rows))
    return CategoryMap(categories=tuple(categories), assignments=assignments)


def save_category_map(category_map: CategoryMap, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["code", "category"])
        for code, category in category_map.assignments.items():
            writer.writerow([code, category])


def map_expenditure(matrix: ExpenditureMatrix, concordance: Concordance) -> ExpenditureMatrix:
    """Re-express an item-coded expenditure matrix on IO sector codes.

    Output columns follow the concordance's sector order (the shared
    SectorSet order), so the result aligns with price vectors. Group totals
    are conserved because each item's weights sum to 1.
    """
    if matrix.basis is not ExpenditureBasis.ITEM_CODES:
        raise BasisMismatch("map_expenditure requires an item-coded matrix")
    weights = concordance.weight_matrix(matrix.items)
    return ExpenditureMatrix(
        groups=matrix.groups,
        items=concordance.sectors.ids,
        values=matrix.values @ weights,
        basis=ExpenditureBasis.SECTOR_CODES,
    )


def align_expenditure(matrix: ExpenditureMatrix, sectors: SectorSet) -> ExpenditureMatrix:
    """Reindex a sector-coded matrix onto the full sector order (zero-filled).

    Item codes must all be sector ids; sectors the groups buy nothing from
    get zero columns so the result aligns with price vectors.
    """
    if matrix.basis is not ExpenditureBasis.SECTOR_CODES:
        raise BasisMismatch("align_expenditure requires a sector-coded matrix")
    unknown = [item for item in matrix.items if item not in sectors.ids]
    if unknown:
        raise UnmappedItem(unknown, context="sector set")
    values = np.zeros((len(matrix.groups), len(sectors)))
    for j, item in enumerate(matrix.items):
        values[:, sectors.index(item)] = matrix.values[:, j]
    return ExpenditureMatrix(
        groups=matrix.groups,
        items=sectors.ids,
        values=values,
        basis=ExpenditureBasis.SECTOR_CODES,
    )
