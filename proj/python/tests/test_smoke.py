from fractions import Fraction

import pytest

import kempner


def test_problem_sets():
    p = kempner.Problem(10, [9, 0, 9])
    assert p.excluded == [0, 9]
    assert p.admissible == list(range(1, 9))
    assert sorted(p.shifts) == [0, 1]
    assert not p.degenerate
    assert kempner.Problem(2, [1]).degenerate


def test_invalid_problem_is_value_error():
    with pytest.raises(ValueError):
        kempner.Problem(1, [0])
    with pytest.raises(ValueError):
        kempner.Problem(10, [10])
    with pytest.raises(kempner.InvalidProblem):
        kempner.Problem(10, [])


def test_exact_moments():
    p = kempner.Problem(2, [0])
    v = kempner.moments(p, 0, 2)
    assert v[1] == Fraction(-2, 3)
    assert v[2] == Fraction(10, 21)
    assert kempner.moments(p, 0, 6, method="alternate") == kempner.moments(p, 0, 6)


def test_kempner_value():
    r = kempner.kempner(kempner.Problem(10, [9]), tol=Fraction(1, 10**22), digits=20)
    assert r["value"].startswith("22.920676619264150348")
    assert r["lower"] <= 22.920676619264150 <= r["upper"]
    assert r["method"] == "series"
    u = kempner.kempner(kempner.Problem(10, [0, 9]), tol=1e-12, method="via_U")
    assert abs(u["mid"] - 11.4907851038244) < 1e-11


def test_bounds_enclose():
    p = kempner.Problem(10, [0])
    b = kempner.bounds(p)
    assert b["lo"] < 23.10344790942054 < b["hi"]
    assert [d["digit"] for d in b["digits"]] == [10]


def test_slow_refused():
    with pytest.raises(kempner.ConvergenceTooSlow):
        kempner.kempner(kempner.Problem(100, [1]), tol=1e-10)


def test_decay_fit():
    fit = kempner.fit_decay_order([(b, b**-3.0, 0.0) for b in (50.0, 100.0, 200.0)])
    assert abs(fit["slope"] + 3.0) < 1e-9
    assert fit["decaying"]


def test_cli_roundtrip():
    code, out, err = kempner.run_cli(["compute", "-b", "10", "-e", "0,9", "-d", "15"])
    assert code == 0, err
    assert out.splitlines()[0] == "11.4907851038244"
    code, _, err = kempner.run_cli(["compute", "-b", "10", "-e", "12"])
    assert code == 2
    assert "--exclude" in err
