import pytest

from knotcone.swap_decomposition import SwapDecomposition


def healthy(r):
    return (not r["span_missing"] and not r["G_subcomplex_failures"]
            and not r["Y_subcomplex_failures"] and r["Y_verify"] and r["I_chain"]
            and r["Pi_chain"] and r["I_equivariant"] and r["Pi_homotopy_found"]
            and r["closed_form_homotopy_ok"])


@pytest.mark.parametrize("n", [1, 3, 5])
def test_splitting_as_written(n):
    r = SwapDecomposition(n).splitting_report()
    total, y, g = r["ranks"]
    assert total == (4 * n - 1) ** 2
    assert y == 8 * n + 1
    assert g == 16 * n * n - 16 * n
    assert healthy(r)
    assert not r["absent_terms"]
    # the projection is equivariant only up to homotopy once n > 1
    assert r["Pi_strictly_equivariant"] == (n == 1)


def test_literal_families_break_at_seven_and_repair_fixes_them():
    literal = SwapDecomposition(7).splitting_report()
    assert literal["absent_terms"]
    assert literal["G_subcomplex_failures"]
    repaired = SwapDecomposition(7, repair=True).splitting_report()
    assert repaired["substituted_terms"]
    assert healthy(repaired)
    assert repaired["ranks"] == [729, 57, 672]


def test_even_or_bad_n_rejected():
    with pytest.raises(ValueError):
        SwapDecomposition(2)
