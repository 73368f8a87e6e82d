import pytest
from hypothesis import given, strategies as st

from flaglab.errors import UndefinedBranch
from flaglab.qcount import (
    QFormulaReport,
    category_b_bound,
    chromatic_formula,
    example_family_size,
    f_bound,
    gamma_degree,
    gauss,
    hilton_milner_threshold,
)


def test_gauss_examples():
    assert gauss(5, 2, 2) == 155
    assert gauss(2, 3, 7) == 0
    assert gauss(5, 3, 3) == 1210


@given(st.integers(-3, 20), st.sampled_from([2, 3, 4, 5, 7, 16]))
def test_gauss_zero_column(b, q):
    assert gauss(b, 0, q) == (1 if b >= 0 else 0)


@given(st.integers(0, 14), st.integers(0, 14), st.sampled_from([2, 3, 4, 5, 9]))
def test_gauss_symmetry(b, a, q):
    assert gauss(b, a, q) == gauss(b, b - a, q)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_pascal_recurrence(q):
    for b in range(1, 13):
        for a in range(1, b + 1):
            assert gauss(b, a, q) == gauss(b - 1, a - 1, q) + q**a * gauss(b - 1, a, q)


def test_example_family_size():
    assert example_family_size(2, 2) == 133 == 15 * 7 + 7 * 4
    assert example_family_size(2, 3) == 637 == 40 * 13 + 13 * 9
    assert example_family_size(3, 2) == 11005 == 651 * 15 + 155 * 8


def test_f_bound():
    assert f_bound(3, 2) == 99
    assert f_bound(4, 4) == 23_738_715 == 3 * 85 * 93093
    with pytest.raises(UndefinedBranch):
        f_bound(4, 2)
    with pytest.raises(UndefinedBranch):
        f_bound(2, 5)


def test_chromatic_formula():
    assert [chromatic_formula(2, 2), chromatic_formula(2, 3), chromatic_formula(3, 2)] == [13, 37, 29]


def test_gamma_degree_values():
    assert [gamma_degree(2, 2), gamma_degree(2, 3), gamma_degree(1, 2)] == [256, 6561, 8]


def test_big_values_exact():
    v = gauss(30, 15, 16)
    assert v > 2**200 and v == gauss(30, 15, 16)


@pytest.mark.parametrize("n", [3, 4])
def test_non_pencil_ceiling_growth(n):
    ratios = [hilton_milner_threshold(n, q) / q ** (n * n - 2) for q in (2, 3, 4, 5, 7, 8, 9, 11, 13, 16)]
    assert all(r <= 4 for r in ratios)
    assert all(a >= b for a, b in zip(ratios, ratios[1:]))


@pytest.mark.parametrize("n", [3, 4, 5])
@pytest.mark.parametrize("q", [4, 5, 7, 8, 9])
def test_f_below_pencil_size(n, q):
    assert f_bound(n, q) < gauss(2 * n - 1, n - 1, q)


def test_category_b_bound():
    assert category_b_bound(2, 2) is None
    assert category_b_bound(3, 2) == gauss(6, 2, 2) * 15 + 99 * 8


def test_report_crosscheck():
    r = QFormulaReport("gauss", {"b": 5, "a": 2, "q": 2}, 155, crosscheck=155)
    assert r.to_json()["value"] == "155"
    with pytest.raises(ValueError):
        QFormulaReport("gauss", {"b": 5, "a": 2, "q": 2}, 155, crosscheck=154)
