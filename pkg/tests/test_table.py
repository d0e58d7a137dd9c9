import pytest

from fibrature.lib.catalog import named_formula
from fibrature.lib.fibration import hopf_lines
from fibrature.lib.roots import mub_design
from fibrature.lib.table import TABLE_COLUMNS, TableRow, default_rows, reproduction_table
from fibrature.lib.torus import noskov_design


def octahedron_row(**kwargs):
    return TableRow("octahedron", "6 vertices", lambda: named_formula("platonic-octa"), **kwargs)


def test_rows_cover_every_construction_once():
    rows = default_rows()
    names = [row.construction for row in rows]
    assert len(names) == len(set(names))
    assert any(row.expensive for row in rows)
    assert all(row.expected is not None or row.window is not None for row in rows)


def test_table_columns_and_pass():
    rows = [
        octahedron_row(expected=6, degree=3),
        TableRow("noskov even s=2", "8 points", lambda: noskov_design(2, "even"), 8, degree=3),
        TableRow("mub-3 lines", "12 lines", lambda: mub_design(3), 12),
    ]
    table = reproduction_table(rows=rows)
    assert tuple(table.columns) == TABLE_COLUMNS
    assert table["passed"].all()
    assert list(table["achieved"]) == [6, 8, 12]
    assert table["verified"].tolist() == [True, True, None]


def test_count_and_degree_mismatches():
    table = reproduction_table(rows=[octahedron_row(expected=7), octahedron_row(expected=6, degree=4)])
    assert table["passed"].tolist() == [False, False]
    assert table["verified"].tolist() == [None, False]


def test_windows():
    table = reproduction_table(
        rows=[octahedron_row(window=(4, 1.0, 2.0)), octahedron_row(window=(4, 2.0, 3.0))]
    )
    assert table["ratio"].tolist() == [1.5, 1.5]
    assert table["passed"].tolist() == [True, False]


def test_expensive_rows_are_only_counted():
    row = octahedron_row(expected=6, degree=3, expensive=True)
    assert reproduction_table(rows=[row])["verified"].tolist() == [None]
    assert reproduction_table(rows=[row], full=True)["verified"].tolist() == [True]


def test_line_rows_use_the_projective_check():
    row = TableRow("mub-3 lines", "12 lines", lambda: hopf_lines(mub_design(3)), 12, degree=2)
    assert reproduction_table(rows=[row])["passed"].all()
    row = TableRow("mub-3 lines", "12 lines", lambda: hopf_lines(mub_design(3)), 12, degree=3)
    assert not reproduction_table(rows=[row])["passed"].any()


@pytest.mark.slow
def test_default_table_passes():
    table = reproduction_table()
    assert table["passed"].all(), table.loc[~table["passed"], "construction"].tolist()
