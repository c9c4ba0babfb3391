import pytest

from freeprod import FactorPair, make_cyclic, parse_word, subgroup_graph


@pytest.fixture(scope="session")
def z2z3():
    return FactorPair(make_cyclic(2, "a"), make_cyclic(3, "b"))


@pytest.fixture(scope="session")
def z4z6():
    return FactorPair(make_cyclic(4, "x"), make_cyclic(6, "y"))


@pytest.fixture(scope="session")
def psl2_words(z2z3):
    return [parse_word("a b a^-1 b^-1", z2z3), parse_word("b a b a b a", z2z3)]


@pytest.fixture(scope="session")
def psl2_sg(z2z3, psl2_words):
    return subgroup_graph(psl2_words, z2z3)
