import pytest

from normalzeta.catalog import (
    InvalidPrime,
    adjudicate,
    catalog_entries,
    catalog_tsv,
    extend_by_center,
    formula,
    g42_variants,
    gnp8prime_variants,
    specialize,
)
from normalzeta.exactmath import Poly, RatFunc, euler_factor, ratfunc_equal, series_expand, var, zeta_Zpd
from normalzeta.fppoints import cubic_case_n, legendre
from normalzeta.lattice import direct_sum_with_abelian, ideal_coefficients_reduced
from normalzeta.liering import catalog_lookup

Y = var(1)


def oracle(cf, p, K):
    return ideal_coefficients_reduced(cf.presentation, p, K).a


def test_g32_has_no_placeholders():
    cf = formula("g32")
    assert cf.placeholders == []
    f = specialize(cf, 2)
    want = RatFunc(1 + Poly({(0, 3): 8}), (1 - Y) * (1 - 2 * Y) * (1 - 4 * Y) * (1 - Poly({(0, 5): 64})) * (1 - Poly({(0, 3): 16})))
    assert f == want


def test_placeholder_bindings():
    cf = formula("gnp8")
    assert cf.placeholders == ["n_V"]
    assert cf.counts["n_V"].count is cubic_case_n
    g = formula("g42", 0, 1)
    assert g.placeholders == ["n_f"]
    assert "t^2+1" in g.counts["n_f"].description
    for p in (3, 5, 7, 11, 13, 17):
        assert g.counts["n_f"](p) == 1 + legendre(-1, p)


def test_specialize_uses_counts():
    cf = formula("gnp8")
    assert specialize(cf, 7) == cf.rational({"n_V": 0}).substitute([Poly.const(7), Y])
    assert specialize(cf, 5) == cf.rational({"n_V": 1}).substitute([Poly.const(5), Y])


def test_invalid_primes():
    with pytest.raises(InvalidPrime):
        specialize(formula("gnp8"), 3)
    with pytest.raises(InvalidPrime):
        specialize(formula("g42", 0, 1), 2)
    with pytest.raises(InvalidPrime):
        specialize(formula("gnp8prime"), 3)
    with pytest.raises(InvalidPrime):
        specialize(formula("g32"), 4)


def test_unknown_and_bad_params():
    with pytest.raises(KeyError):
        formula("nonesuch")
    with pytest.raises(KeyError, match="oracle only"):
        formula("g33_free")
    with pytest.raises(ValueError):
        formula("g42", 0, -1)  # t^2 - 1 splits
    with pytest.raises(ValueError):
        formula("g42", 1)


@pytest.mark.parametrize("name,params,primes,K", [
    ("g32", (), [2, 3, 5, 7], 6),
    ("g52_indec", (), [2, 3, 5], 5),
    ("g42", (0, 1), [3, 5, 7, 13], 5),
    ("g42", (1, 1), [5, 7, 11], 4),
    ("g42", (2, 1), [3, 5, 7], 4),
    ("gnp8", (), [5, 7, 13], 4),
    ("gnp8prime", (), [5, 7, 13, 31], 5),
    ("heisenberg", (), [2, 3, 5], 6),
])
def test_formula_matches_oracle(name, params, primes, K):
    cf = formula(name, *params)
    for p in primes:
        assert series_expand(specialize(cf, p), p, K) == oracle(cf, p, K), p


def test_affine_in_placeholder():
    cf = formula("gnp8")
    f0, f1, f3 = (cf.rational({"n_V": v}) for v in (0, 1, 3))
    assert ratfunc_equal(f3 - f0, (f1 - f0) * 3)
    uniform = zeta_Zpd(5) * euler_factor(8, 15) * euler_factor(7, 12) * euler_factor(5, 7)
    W1 = Poly({(0, 0): 1, (5, 5): 1, (6, 5): 1, (10, 7): 1, (11, 7): 1, (16, 12): 1})
    assert ratfunc_equal(f0, uniform * W1)


def test_adjudication_g42():
    res = adjudicate(g42_variants(0, 1), catalog_lookup("g42", 0, 1), [5, 7], 4)
    assert res["sign+"] == [5, 7]
    assert res["sign-"] == [7]  # n_f(7) = 0 hides the sign
    assert "frozen" in formula("g42", 0, 1).adjudication


def test_adjudication_gnp8prime():
    # n_f = 1, 0, 3 at p = 5, 7, 31; the n_f term starts at T^5 and the two readings differ at T^6
    res = adjudicate(gnp8prime_variants(), catalog_lookup("gnp8prime"), [5, 7, 31], 6)
    assert res["sign+ X^6Y^7"] == [5, 7, 31]
    assert res["sign- X^6Y^7"] == [7]
    assert res["sign+ X^7Y^6"] == res["sign- X^7Y^6"] == []
    assert "X^6 Y^7" in formula("gnp8prime").adjudication


def test_extend_r0_is_identity():
    for name in ("gnp8", "heisenberg"):
        cf = formula(name)
        e = extend_by_center(cf, 0)
        for v in (0, 1, 3):
            vals = {k: v for k in cf.counts}
            assert ratfunc_equal(e.rational(vals), cf.rational(vals))


def test_extend_heisenberg():
    e = extend_by_center(formula("heisenberg"), 1)
    P = direct_sum_with_abelian(catalog_lookup("heisenberg"), 1)
    for p in (2, 5):
        assert series_expand(specialize(e, p), p, 5) == ideal_coefficients_reduced(P, p, 5).a


def test_extend_gnp8():
    cf = formula("gnp8")
    for r in (1, 2):
        e = extend_by_center(cf, r)
        assert e.placeholders == ["n_V"] and (e.d, e.dprime) == (5 + r, 3)
        for p in (5, 7):
            assert series_expand(specialize(e, p), p, 3) == oracle(e, p, 3)


def test_extend_needs_a_part():
    with pytest.raises(ValueError):
        extend_by_center(formula("g32"), 1)


def test_catalog_listing():
    rows = catalog_entries()
    assert len(rows) >= 10
    names = [r[0] for r in rows]
    assert "gnp8" in names and "gnp8prime" in names
    text = catalog_tsv()
    assert text.startswith("# name\td\tdprime")
    assert all(len(line.split("\t")) == 6 for line in text.splitlines())
