"""The reproduction table: every quoted point count rebuilt, counted and verified."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from time import perf_counter
from typing import Any, Callable, Dict, List, Optional, Tuple

import pandas as pd

from fibrature.lib.bounds import cpn_bound
from fibrature.lib.catalog import named_formula
from fibrature.lib.fibration import (
    PIPELINE_COUNTS,
    ball4_7pt,
    fiber_map,
    gauss4_7pt,
    hopf_lift,
    hopf_lines,
    project_formula,
    s3_expected_count,
    s3_family,
    sphere7_pipeline,
)
from fibrature.lib.formula import Formula
from fibrature.lib.roots import ComplexVectorSet, mub_design, named_vector_set
from fibrature.lib.torus import (
    TorusDesign,
    hex_design,
    hight_bound,
    noskov_design,
    search_cyclic_lattice,
    subgroup_points,
)
from fibrature.lib.verify import cp_design_check, verify

TABLE_COLUMNS = ("construction", "anchor", "expected", "achieved", "ratio", "degree", "verified", "passed")


@dataclass(frozen=True)
class TableRow:
    construction: str
    anchor: str
    build: Callable[[], Any]
    expected: Optional[int] = None
    # (denominator, low, high): pass when low <= achieved / denominator <= high
    window: Optional[Tuple[int, float, float]] = None
    degree: Optional[int] = None
    mode: str = "exact"
    tol: float = 1e-9
    expensive: bool = False


@lru_cache(maxsize=None)
def _vectors(name: str) -> ComplexVectorSet:
    return named_vector_set(name)


def _projected(name: str) -> Formula:
    source = _vectors(name).sphere_formula()
    return project_formula(source, fiber_map("tau2", source.space)).with_claim(3)


def _minkowski_design() -> TorusDesign:
    return subgroup_points(search_cyclic_lattice(3, 38, 6), degree=5, provenance="octahedral packing d=6")


def default_rows() -> List[TableRow]:
    rows = [
        TableRow("e8-eisenstein", "240 roots of E8", lambda: _vectors("e8-eisenstein"), 240, degree=7),
        TableRow("e8-gaussian", "240 roots of E8", lambda: _vectors("e8-gaussian"), 240, degree=7),
        TableRow("k12", "756 minimal vectors of K12", lambda: _vectors("k12"), 756, degree=5),
        TableRow("bw16", "4320 minimal vectors of BW16", lambda: _vectors("bw16"), 4320, degree=7, expensive=True),
        TableRow("tau2 e8-eisenstein", "8-point formula on the tetrahedron", lambda: _projected("e8-eisenstein"), 8, degree=3),
        TableRow("tau2 e8-gaussian", "11-point formula on the tetrahedron", lambda: _projected("e8-gaussian"), 11, degree=3),
        TableRow("tau2 k12", "16-point Stroud formula on the 5-simplex", lambda: _projected("k12"), 16, degree=3),
        TableRow("tau2 bw16", "51-point formula on the 7-simplex", lambda: _projected("bw16"), 51, degree=3, expensive=True),
        TableRow("rains-delta7-50", "50-point formula on the 7-simplex", lambda: named_formula("rains-delta7-50"), 50, degree=3),
        TableRow(
            "leech-delta11-276",
            "276-point 5-formula on the 11-simplex",
            lambda: named_formula("leech-delta11-276"),
            276,
            degree=5,
            expensive=True,
        ),
        TableRow("e8 hopf lines", "40-point 3-design on CP^3", lambda: hopf_lines(_vectors("e8-eisenstein")), cpn_bound(3, 1), degree=3),
        TableRow("e8 gaussian hopf lines", "60-point 3-design on CP^3", lambda: hopf_lines(_vectors("e8-gaussian")), 60, degree=3),
        TableRow(
            "mub-3 hopf lift",
            "(2t+2)|F| points, t=2",
            lambda: hopf_lift(mub_design(3), 2),
            72,
            degree=5,
            mode="float",
        ),
        TableRow(
            "e8 hopf lift",
            "(2t+2)|F| points, t=3",
            lambda: hopf_lift(hopf_lines(_vectors("e8-eisenstein")), 3),
            320,
            degree=7,
            mode="float",
        ),
        TableRow(
            "minkowski T^3",
            "additive 5-design on T(SO(6)) with 38 points",
            _minkowski_design,
            int(hight_bound(3, 6, Fraction(18, 19), Fraction(4, 3))),
            degree=5,
            mode="float",
            tol=1e-10,
        ),
    ]
    for s in range(1, 5):
        rows.append(TableRow(f"noskov even s={s}", "2s^2", lambda s=s: noskov_design(s, "even"), 2 * s * s, degree=2 * s - 1))
        rows.append(
            TableRow(f"noskov odd s={s}", "s^2+(s+1)^2", lambda s=s: noskov_design(s, "odd"), s * s + (s + 1) ** 2, degree=2 * s)
        )
        rows.append(TableRow(f"hex d={2 * s}", "3s^2", lambda s=s: hex_design(2 * s), 3 * s * s, degree=2 * s - 1))
        rows.append(
            TableRow(f"hex d={2 * s + 1}", "3s^2+3s+1", lambda s=s: hex_design(2 * s + 1), 3 * s * s + 3 * s + 1, degree=2 * s)
        )
    for s in range(1, 7):
        closed_form = "(s+1)(s^2+3)" if s % 2 else "(s+1)(s^2+s+2)"
        rows.append(
            TableRow(f"s3 family s={s}", closed_form, lambda s=s: s3_family(s), s3_expected_count(s), degree=2 * s + 1, mode="float")
        )
    rows.append(TableRow("ball4-7pt", "PI 7-cubature on B_4 with 64 points", ball4_7pt, PIPELINE_COUNTS["ball4-7pt"], degree=7, mode="float"))
    rows.append(
        TableRow(
            "gauss4-7pt",
            "7-cubature on R^4 with 190 points",
            gauss4_7pt,
            PIPELINE_COUNTS["gauss4-7pt"],
            degree=7,
            mode="float",
            tol=1e-6,
        )
    )
    for n in (4, 8, 12):
        rows.append(
            TableRow(
                f"sphere7 n={n}",
                "4n^4(1+o(1)) points",
                lambda n=n: sphere7_pipeline(n),
                window=(4 * n**4, 0.5, 3.0),
                degree=7,
                mode="float",
                expensive=n > 4,
            )
        )
    return rows


def _verify_row(row: TableRow, built: Any, log: logging.Logger) -> bool:
    if isinstance(built, ComplexVectorSet) and built.label.endswith("lines"):
        return cp_design_check(built.vectors, row.degree, weights=built.weights, norm=built.common_norm()).passed
    if isinstance(built, ComplexVectorSet):
        formula = built.sphere_formula()
    elif isinstance(built, TorusDesign):
        formula = built.formula
    else:
        formula = built
    mode = row.mode if formula.is_exact else "float"
    return verify(formula, row.degree, mode, row.tol if mode == "float" else None, logger=log).passed


def reproduction_table(
    *,
    full: bool = False,
    rows: Optional[List[TableRow]] = None,
    logger: Optional[logging.Logger] = None,
) -> pd.DataFrame:
    """Build every row, compare counts and verify degrees.

    Expensive rows are counted but only verified with ``full``.
    """

    log = logger or logging.getLogger(__name__)
    records: List[Dict[str, Any]] = []
    for row in rows if rows is not None else default_rows():
        t0 = perf_counter()
        built = row.build()
        achieved = len(built)
        ratio = None
        if row.window is not None:
            denominator, low, high = row.window
            ratio = achieved / denominator
            count_ok = low <= ratio <= high
        else:
            count_ok = achieved == row.expected
        verified: Optional[bool] = None
        if row.degree is not None and (full or not row.expensive):
            verified = _verify_row(row, built, log)
        passed = count_ok and verified is not False
        records.append(
            {
                "construction": row.construction,
                "anchor": row.anchor,
                "expected": row.expected,
                "achieved": achieved,
                "ratio": ratio,
                "degree": row.degree,
                "verified": verified,
                "passed": passed,
            }
        )
        log.info(
            "Row %s finished in %.2f s (%d points, %s).",
            row.construction,
            perf_counter() - t0,
            achieved,
            "ok" if passed else "MISMATCH",
        )
    return pd.DataFrame(records, columns=list(TABLE_COLUMNS))


__all__ = ["TABLE_COLUMNS", "TableRow", "default_rows", "reproduction_table"]
