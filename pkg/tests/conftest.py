import itertools

import pytest

from twcover import language

# Syntactic monoids over {a,b}, all of size <= 12; at least 20 distinct.
CORPUS_REGEXES = [
    "(ab)+", "b(ab)*", "(ab)*a", "a*", "b*", "(a|b)*", "1", "(a|b)+",
    "a(a|b)*", "(a|b)*b", "a*b*", "b*a*", "a*ba*", "b*ab*", "a*ba*ba*",
    "(a|b)*ab(a|b)*", "(a|b)*aa(a|b)*", "~((a|b)*aa(a|b)*)", "(aa)*",
    "(a|b)((a|b)(a|b))*", "a+b+", "a?b*", "(a|b)*a", "ab*a(a|b)*",
]


@pytest.fixture(scope="session")
def corpus():
    langs = [(regex, language(regex, "ab")) for regex in CORPUS_REGEXES]
    assert all(lang.monoid.size <= 12 for _, lang in langs)
    assert len({lang.monoid.key() for _, lang in langs}) >= 20
    return langs


def words_upto(alphabet, max_len):
    for length in range(max_len + 1):
        for combo in itertools.product(alphabet, repeat=length):
            yield "".join(combo)
