"""Smoke test for the pyzhat extension: build with `maturin develop` in
crates/python, then run `python python/smoke_test.py`."""

import pathlib

import pyzhat

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"


def main():
    g = pyzhat.PlumbingGraph.load(str(DATA / "sigma237.plumb.json"))
    params = g.three_star_params()
    assert params["m"] == "42", params
    assert params["b"] == ["1", "-13", "-29", "41"], params

    lattice = pyzhat.zhat_negative_definite(g, "12")
    closed = pyzhat.zhat_three_star(g, "12")
    assert lattice == closed
    assert lattice.terms() == [("1/2", "1"), ("3/2", "-1"), ("11/2", "-1"), ("21/2", "1"), ("23/2", "-1")]

    rev = pyzhat.zhat_reversed(g, "8")
    f0 = pyzhat.mock_f0("9").shift("-1/2").truncate("8")
    assert rev == f0, (str(rev), str(f0))

    surg, guaranteed = pyzhat.surgery_zhat("-1", "20")
    assert guaranteed == "12"
    assert surg.truncate("12") == (-pyzhat.mock_f0("12")).truncate("12")

    one = pyzhat.QSeries([("0", "1")], "2000")
    rep = pyzhat.radial_extrapolate(one, "1/3", ["1/10", "1/20", "1/40"])
    assert rep["extrapolant"]["re"].startswith("1.0000000000"), rep

    pattern = [0] * 84
    for k in (1, 41, 55, 71):
        pattern[k - 1] = 1
    for k in (13, 29, 43, 83):
        pattern[k - 1] = -1
    alpha = pyzhat.asymptotic_coeffs(pattern, 42, 1)
    assert alpha == ["0", "(-4)*pi"], alpha

    try:
        pyzhat.asymptotic_coeffs([1], 1, 1)
    except ValueError as e:
        assert "divergent" in str(e)
    else:
        raise AssertionError("expected a divergent constant term")

    print("pyzhat smoke test: ok")
    print("Zhat_0(Sigma(2,3,7)) =", lattice)


if __name__ == "__main__":
    main()
