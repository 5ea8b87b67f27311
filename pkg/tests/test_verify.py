import pytest

from chamberfold.verify import UnsupportedSuite, run_suite


@pytest.mark.parametrize("name,suite,samples", [
    ("a2", "partition", 200),
    ("b2", "lemma1", 300),
    ("a1t", "lemma1", 300),
    ("t246", "lemma1", 300),
    ("g2", "lemma3", 300),
    ("t246", "lemma3", 300),
    ("a3", "lemma4", None),
    ("b2", "kostant", None),
    ("a3", "adjacency", None),
    ("g2", "detsum", None),
    ("t246", "theorem3-signs", None),
    ("t246", "partition", 20),
])
def test_suites_clean(grp, name, suite, samples):
    rep = run_suite(grp(name), suite, samples, seed=4)
    assert rep["suite"] == suite and rep["checked"] > 0
    assert rep["violations"] == [] and rep["ambiguous"] == []


def test_deterministic(grp):
    a = run_suite(grp("a2"), "partition", 50, seed=9)
    b = run_suite(grp("a2"), "partition", 50, seed=9)
    assert a == b


def test_unsupported(grp):
    with pytest.raises(UnsupportedSuite):
        run_suite(grp("t246"), "kostant")
    with pytest.raises(UnsupportedSuite):
        run_suite(grp("a2"), "nonsense")
