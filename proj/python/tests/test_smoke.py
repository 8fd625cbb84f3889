from fractions import Fraction
import math

import pytest

import bratteli


def test_fibonacci_heights_and_products():
    d = bratteli.Diagram.fibonacci(10)
    assert d.depth == 10
    assert d.heights(6) == [13, 8]
    assert d.product(1, 3) == [[2, 1], [1, 1]]
    assert d.word(2, 1) == "12"
    assert d.is_proper(1)


def test_big_integers_cross_as_python_ints():
    d = bratteli.Diagram.fibonacci(120)
    h = d.heights(120)
    a, b = 1, 1
    for _ in range(119):
        a, b = a + b, a
    assert h == [a, b]
    assert h[0] > 2**64


def test_return_times_follow_the_enumeration():
    d = bratteli.Diagram.fibonacci(6)
    prefixes = bratteli.enumerate_prefixes(d, 6)
    assert len(prefixes) == sum(d.heights(6))
    floor = {}
    for top, order in prefixes:
        r = bratteli.return_time(d, top, order)
        assert r == floor.get(top, 0)
        floor[top] = r + 1
        step = bratteli.vershik_step(d, top, order)
        if step is not None:
            assert bratteli.return_time(d, *step) == r + 1


def test_measure_candidates_are_fractions():
    d = bratteli.Diagram.fibonacci(20)
    rep = bratteli.measure_candidates(d, 1, 20)
    assert rep["unique_ergodicity"]
    for c in rep["candidates"]:
        assert all(isinstance(x, Fraction) for x in c)
        assert c[0] + c[1] == 1
    phi = (1 + math.sqrt(5)) / 2
    assert float(rep["candidates"][0][0]) == pytest.approx(phi / (phi + 1), rel=1e-8)


def test_stable_decomposition_of_inverse_golden_mean():
    bratteli.set_precision(256)
    try:
        d = bratteli.Diagram.fibonacci(45)
        s = bratteli.stable_decompose(d, "real:1/phi", 1, 40)
    finally:
        bratteli.set_precision(128)
    assert s["w"] == [1, 0]
    assert s["contracted"]
    r = [hi for _, hi in s["residuals"]]
    assert r[-1] < 1e-6
    assert r[20] / r[19] == pytest.approx(2 / (1 + math.sqrt(5)), rel=1e-9)


def test_toeplitz_rational_eigenvalues():
    d = bratteli.toeplitz_cyclic([1, 3, 9, 27, 81], 5, 3)
    series = bratteli.necessary_series(d, "5/27", 5)
    assert series["terms"][2:] == [0, 0, 0]
    assert bratteli.toeplitz_classify("1/27", [1, 3, 9, 27, 81], 3)["verdict"] == "continuous"
    assert bratteli.toeplitz_classify("1/5", [3, 3, 3, 3, 3], 3, True)["verdict"] == "excluded"


def test_minus_one_check_on_rank3_example():
    d = bratteli.toeplitz_rank3_example([0, 1, 2, 3], 5)
    rep = bratteli.minus_one_check(d, 5)
    assert rep["ok"]
    assert [lv["n"] for lv in rep["levels"]] == [1, 2, 3]


def test_dimension_group_witness():
    d = bratteli.Diagram.fibonacci(13)
    assert bratteli.dimension_group_witness(d, [2, -1], 1, 12) == (1, [2, -1])
    assert bratteli.dimension_group_witness(d, ["1/2", "1/2"], 1, 12) is None


def test_golden_construction_summary():
    rep = bratteli.golden_construction(4, 128)
    assert rep["ok"]
    assert [s["k"] for s in rep["steps"]][1:] == [12, 18, 22]
    assert rep["diagram"].depth == 4


def test_json_round_trip_and_errors(tmp_path):
    d = bratteli.Diagram.from_levels([1, 1], [([[1, 2], [1, 0]], ["221", "1"])])
    path = tmp_path / "d.json"
    d.save(str(path))
    again = bratteli.Diagram.load(str(path))
    assert again.word(2, 1) == "221"
    with pytest.raises(bratteli.BratteliError) as info:
        bratteli.Diagram.from_levels([1, 1], [([[1, 1], [1, 0]], ["11", "1"])])
    assert info.value.code == "invalid_diagram"
    with pytest.raises(bratteli.BratteliError):
        bratteli.Diagram.load(str(tmp_path / "missing.json"))
