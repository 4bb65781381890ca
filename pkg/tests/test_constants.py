from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oracles import scan_r_hat, spreadsheet
from limitcolor.constants import (
    R_minus,
    R_plus,
    ScheduleError,
    build_schedule,
    check_gamma_lemma,
    eta_bar,
    r_hat_condition,
    solve_r_hat,
)


def test_eta_bar_examples():
    sched = build_schedule("paper", 2, [1])
    assert eta_bar(0, 2058, sched) == 2
    assert eta_bar(0, 2049, sched) == 1
    assert eta_bar(0, 2056, sched) == 1
    assert eta_bar(0, 2057, sched) == 2
    assert eta_bar(0, 2048, sched) == Fraction(1, 2)
    assert eta_bar(0, 0, sched) < 1


def test_r_hat_level_zero():
    sched = build_schedule("paper", 2, [1])
    assert sched.levels[0].s == 28
    r0 = sched.levels[0].r_hat
    assert r0 > 2 ** 11
    assert r0 == scan_r_hat(2, 28)
    c, D = 2 ** 11 + 1, 8
    assert r_hat_condition(r0, c, D, 28, 1)
    assert not r_hat_condition(r0 - 1, c, D, 28, 1)
    assert sched.levels[0].r_bar == r0 * (3 * 28 + 1)


def test_r_hat_degree_three_matches_scan():
    sched = build_schedule("paper", 3, [2])
    assert sched.levels[0].s == 29
    assert sched.levels[0].r_hat == scan_r_hat(3, 29)


def test_paper_mode_blocks_after_first_level():
    sched = build_schedule("paper", 2, [1, 2, 3])
    assert len(sched) == 1
    assert sched.blocked is not None
    lv = sched.levels[0]
    assert sched.pending_s == 27 + 10 * lv.L_bar + 2 * lv.Gamma_plus_bar + 2
    assert lv.K is None
    with pytest.raises(ScheduleError):
        sched.level(1)


def test_desk_examples():
    assert (R_minus(3), R_plus(3, 28), 2 * R_plus(3, 28) + 1) == (11, 177, 355)
    sched = build_schedule("desk", 2, r=[3], s=[28], check_minima=False)
    lv = sched.levels[0]
    assert (lv.R_minus, lv.R_plus, lv.l) == (11, 177, 355)
    seed = sched.level(-1)
    assert (seed.L, seed.K, seed.l, seed.r, seed.s) == (1, 0, 1, 0, 0)
    with pytest.raises(ScheduleError):
        build_schedule("desk", 2, r=[3], s=[28])
    with pytest.raises(ScheduleError):
        build_schedule("desk", 2, r=[12], s=[2])
    with pytest.raises(ScheduleError):
        build_schedule("paper", 2, [2, 2])
    with pytest.raises(ScheduleError):
        build_schedule("paper", 2, [0, 1])


@pytest.mark.parametrize("degree", [2, 3])
def test_recursions_matchspreadsheet(degree):
    rs, ss = [12, 5, 4, 3], [3, 4, 5, 3]
    sched = build_schedule("desk", degree, r=rs, s=ss)
    sheet = spreadsheet(degree, rs, ss)
    for n in range(3):
        lv = sched.levels[n]
        for key in ("R_minus", "R_plus", "l", "L", "Gamma_minus", "Gamma_plus", "K_bar", "K", "r_bar"):
            assert getattr(lv, key) == sheet[key][n], (n, key)
        if lv.Delta is not None:
            assert lv.Delta == sheet["Delta"][n]
        assert lv.r_hat == rs[n]


def test_gamma_lemma_paper_levels():
    for degree in (2, 3):
        sched = build_schedule("paper", degree, [1, 2])
        assert check_gamma_lemma(sched, 0)
        assert check_gamma_lemma(sched, 1)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 6), st.lists(st.tuples(st.integers(1, 40), st.integers(3, 40)), min_size=1, max_size=4))
def test_schedule_monotone_and_positive(degree, rows):
    rs = [12 + rows[0][0]] + [r for r, _ in rows[1:]]
    ss = [s for _, s in rows]
    sched = build_schedule("desk", degree, r=rs, s=ss)
    prev = sched.level(-1)
    for lv in sched.levels:
        assert lv.L > prev.L
        assert lv.delta > prev.delta
        assert lv.Gamma_plus >= lv.R_plus and lv.Gamma_minus >= lv.R_minus
        for earlier in sched.levels[: lv.n]:
            assert lv.Gamma_plus >= earlier.R_plus and lv.Gamma_minus >= earlier.R_minus
        assert lv.r_minus <= lv.R_minus and lv.r_plus <= lv.R_plus
        assert lv.r_bar == lv.r_hat * (3 * lv.s + 1)
        assert min(lv.R_minus, lv.R_plus, lv.l, lv.K_bar, lv.Upsilon, lv.delta) > 0
        prev = lv
    again = build_schedule("desk", degree, r=rs, s=ss)
    assert again.to_dict() == sched.to_dict()
    assert type(sched).from_dict(sched.to_dict()).to_dict() == sched.to_dict()
