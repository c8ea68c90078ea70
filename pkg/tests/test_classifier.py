import pytest

from parorbit.classifier import (MINIMAL_INFINITE, classify_P_on_Np, classify_levi, classify_algebra_type,
                                 commuting_dichotomy, hilbert_dim_report, replay_chain)
from parorbit.parabolic import compositions


@pytest.mark.parametrize("bv", MINIMAL_INFINITE)
def test_minimal_infinite_cases(bv):
    v = classify_P_on_Np(bv)
    assert v.verdict == "infinite" and v.witness["case"] == list(bv)
    # minimality: lowering any one entry (dropping it at zero) lands in the finite region
    for i in range(len(bv)):
        smaller = tuple(x - (k == i) for k, x in enumerate(bv) if x - (k == i) > 0)
        assert classify_P_on_Np(smaller).finite, smaller


@pytest.mark.parametrize("bv,expected", [((5, 4), "finite"), ((5, 100), "finite"), ((1, 3, 7, 1), "finite"),
                                         ((1, 1, 1, 9, 1), "finite"), ((6, 7), "infinite"), ((1, 2, 1, 2, 1), "infinite"),
                                         ((2, 2, 2), "infinite"), ((4, 4), "finite"), ((1, 1, 1, 1, 1), "finite")])
def test_examples(bv, expected):
    v = classify_P_on_Np(bv)
    assert v.verdict == expected
    assert replay_chain(v, bv)


def test_all_chains_replay():
    for n in range(1, 10):
        for c in compositions(n):
            assert replay_chain(classify_P_on_Np(c), c), c


def test_tampered_chain_rejected():
    v = classify_P_on_Np((2, 2, 3))
    assert replay_chain(v, (2, 2, 3))
    assert not replay_chain(v, (3, 2, 2, 1))


def test_levi():
    assert classify_levi((3, 5), "nilradical").finite
    assert not classify_levi((1, 1, 1), "nilradical").finite
    assert classify_levi((1, 4), "cone").finite
    assert not classify_levi((2, 2), "cone").finite
    with pytest.raises(ValueError):
        classify_levi((1,), "elsewhere")


def test_algebra_type():
    assert classify_algebra_type(2, 3) == "finite"
    assert classify_algebra_type(3, 3) == "infinite"
    assert classify_algebra_type(1, 9) == "finite"


def test_dichotomy_and_hilbert():
    assert commuting_dichotomy((2, 5)) == "dim_p_minus_1"
    assert commuting_dichotomy((6, 6)) == "at_least_dim_p"
    assert commuting_dichotomy((1, 1, 1, 1, 1, 1, 1)) == "unknown"
    assert hilbert_dim_report(2, 9)["report"] == "equals_n_minus_1"
    assert hilbert_dim_report(6, 12) == {"report": "at_least_n", "dimension": 12, "bound": "lower"}
    with pytest.raises(ValueError):
        hilbert_dim_report(4, 4)
