import pytest
from hypothesis import given, settings, strategies as st

from knotmf.ring import LaurentPoly, QQ
from knotmf.scalars import (REG_QA, RatFunc, RationalFunc1, S_ATOM, Scalar,
                            U_ATOM, qa_poly)


def test_loop_value_times_z_is_a():
    # (a - a^-1)/(q - q^-1) * (q - q^-1)/(1 - a^-2) = a
    d = Scalar.loop_value()
    z = Scalar.trace_z()
    assert (d * z).reduce() == Scalar(qa_poly({(0, 1): QQ(1)}))


def test_reduce_cancels_atoms():
    p = qa_poly({(2, 0): QQ(1), (0, 0): QQ(-3)})
    s = Scalar(p * S_ATOM, 1, 0)
    r = s.reduce()
    assert r.s_exp == 0 and r.num == p
    assert Scalar(p * S_ATOM, 1, 0) == Scalar(p)  # cross-multiplied equality


def test_normalizing_value():
    d = Scalar.loop_value()
    assert d.s_exp == 1 and d.u_exp == 0
    assert d.num == qa_poly({(0, 1): QQ(1), (0, -1): QQ(-1)})


@settings(max_examples=100, deadline=None)
@given(st.integers(-5, 5), st.integers(-5, 5), st.integers(0, 2),
       st.integers(0, 2))
def test_reduce_preserves_value(c1, c2, i, j):
    num = qa_poly({(1, 0): QQ(c1), (0, 2): QQ(c2)})
    s = Scalar(num * S_ATOM ** i * U_ATOM ** j, i, j)
    assert s.reduce() == s
    assert s.reduce().reduce() == s.reduce()


def test_series_examples():
    one_over = RationalFunc1({0: QQ(1)}, {0: QQ(1), 1: QQ(-1)})
    assert one_over.series(3) == {0: 1, 1: 1, 2: 1, 3: 1}
    f = RationalFunc1({1: QQ(1)}, {1: QQ(1), 0: QQ(-1)})  # z/(z-1)
    assert f.residue_at(QQ(1)) == 1
    g = RationalFunc1({0: QQ(1)}, {0: QQ(1), 2: QQ(-1)})  # 1/(1-q^2)
    assert g.series(4) == {0: 1, 2: 1, 4: 1}


def test_series_of_product_matches():
    f = RationalFunc1({0: QQ(1)}, {0: QQ(1), 1: QQ(-2)})
    g = RationalFunc1({0: QQ(3), 1: QQ(1)}, {0: QQ(1), 2: QQ(5)})
    order = 6
    prod = (f * g).series(order)
    fs, gs = f.series(order), g.series(order)
    direct = {}
    for i, a in fs.items():
        for j, b in gs.items():
            if i + j <= order:
                direct[i + j] = direct.get(i + j, QQ(0)) + a * b
    assert prod == {k: v for k, v in direct.items() if v}


def test_series_laurent_mode():
    # 1/(z(1-z)) has a simple pole at 0
    f = RationalFunc1({0: QQ(1)}, {1: QQ(1), 2: QQ(-1)})
    assert f.series(2) == {-1: 1, 0: 1, 1: 1, 2: 1}


def test_residue_rejects_higher_order():
    f = RationalFunc1({0: QQ(1)}, {0: QQ(1), 1: QQ(-2), 2: QQ(1)})
    with pytest.raises(ValueError):
        f.residue_at(QQ(1))


def test_ratfunc_sum_and_cancel():
    from knotmf.ring import VarRegistry
    reg = VarRegistry.make([("Q", 0, 0), ("T", 0, 0)])
    q = LaurentPoly.var(reg, "Q")
    t = LaurentPoly.var(reg, "T")
    one = LaurentPoly.const(reg, 1)
    f = RatFunc(one, [one - q])
    g = RatFunc(-1 * q, [one - q])
    total = RatFunc.sum([f, g])
    assert total == RatFunc(one)
    # symmetric pair whose cross denominators cancel
    h1 = RatFunc(one, [one - q * t])
    h2 = RatFunc(one, [one - q])
    s = h1 + h2
    assert s == RatFunc(2 * one - q - q * t, [one - q, one - q * t])


def test_scalar_evaluate():
    d = Scalar.loop_value()
    val = d.evaluate(QQ(2))
    # (a - 1/a)/(2 - 1/2) at q = 2
    expected = LaurentPoly(REG_QA, {(0, 1): QQ(2, 3), (0, -1): QQ(-2, 3)})
    assert val == expected
