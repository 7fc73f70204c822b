import itertools
import random
from math import inf

import pytest

from twcover import (TransferFailure, alph, eval_ranker, is_n_long, is_subword,
                     language, long_markers, mu_minor, ramsey_bound,
                     rl_factorize, transfer_factorization, universality_index)
from conftest import words_upto


def brute_universality(word, letters, limit=6):
    """Independent oracle: largest k with every word over `letters` of length
    <= k a subword, by direct enumeration."""
    best = 0
    for k in range(1, limit + 1):
        if all(is_subword("".join(c), word)
               for c in itertools.product(sorted(letters), repeat=k)):
            best = k
        else:
            break
    return best


def test_alph():
    assert alph("") == frozenset()
    assert alph("bab") == frozenset("ab")
    assert alph("aaa") == frozenset("a")


def test_is_subword():
    assert is_subword("ab", "bab")
    assert not is_subword("ba", "aab")
    for w in ("", "a", "bab"):
        assert is_subword("", w)
    assert not is_subword("a", "")


def test_universality_examples():
    assert universality_index("abab", "ab") == 2
    assert brute_universality("abab", "ab") == 2
    assert universality_index("aab", "ab") == 1
    assert not is_subword("ba", "aab")
    assert universality_index("", "ab") == 0
    assert universality_index("", "") == inf


def test_universality_rejects_foreign_letters():
    with pytest.raises(ValueError):
        universality_index("abc", "ab")


def test_universality_matches_brute_force_small():
    for word in words_upto("ab", 8):
        assert universality_index(word, "ab") == brute_universality(word, "ab")
    rng = random.Random(5)
    for _ in range(300):
        word = "".join(rng.choice("abc") for _ in range(rng.randrange(11)))
        got = universality_index(word, "abc")
        assert min(got, 5) == brute_universality(word, "abc", limit=5)


def test_long_markers_trivial_cases():
    for word in ("", "a", "abab"):
        assert long_markers(word, 1) == (frozenset({0, len(word) + 1}),) * 2
    rset, lset = long_markers("a", 2)
    # maximal 2-long factors of "a" are the two empty factors
    assert rset == {0, 1, 2} and lset == {0, 1, 2}


def test_long_markers_interleaving_small():
    for word in words_upto("ab", 6):
        for n in (2, 3):
            rset, lset = long_markers(word, n)
            rs = sorted(rset)
            ls = sorted(lset)
            for i, j in zip(rs, rs[1:]):
                assert any(i < k <= j for k in lset)
            for i, j in zip(ls, ls[1:]):
                assert any(i <= k < j for k in rset)


def factorization_properties(fact):
    """Conditions the structural factorization must satisfy."""
    word = fact.word
    segments = fact.segments()
    assert fact.reconstruct() == word
    full = alph(word)
    for seg in segments:
        assert is_n_long(seg, fact.n)
    for i, (b, a) in enumerate(fact.pairs):
        u_i, u_next = segments[i], segments[i + 1]
        letter_b, letter_a = word[b - 1], word[a - 1]
        v = word[b:a - 1]
        # contained in both sides, strictly in each: the marker letters are
        # missing from v (adjacent long factors may have disjoint alphabets,
        # so strictness into the intersection itself can fail)
        assert alph(v) <= alph(u_i + letter_b) and letter_b not in alph(v)
        assert alph(v) <= alph(letter_a + u_next) and letter_a not in alph(v)
        if b != a:
            assert letter_a in alph(u_next) and letter_b in alph(u_i)
        assert eval_ranker(fact.x_rankers[i], word) == a
        assert eval_ranker(fact.y_rankers[i], word) == b
        bound = (fact.n + 1) * len(full - alph(v))
        assert fact.x_rankers[i].depth <= bound
        assert fact.y_rankers[i].depth <= bound


def test_factorize_long_word_single_segment():
    word = "abab" * 5  # 4-long, so (n+2)-long for n = 2
    fact = rl_factorize(word, 2)
    assert fact.k == 1 and fact.segments() == [word]


def test_factorize_ab_every_position_marked():
    fact = rl_factorize("ab", 2)
    assert [p for p in fact.pairs] == [(1, 1), (2, 2)]
    assert all(seg == "" for seg in fact.segments())
    factorization_properties(fact)


def test_factorize_properties_random():
    rng = random.Random(11)
    for _ in range(120):
        word = "".join(rng.choice("ab") for _ in range(rng.randrange(13)))
        for n in (1, 2):
            factorization_properties(rl_factorize(word, n))
    for _ in range(40):
        word = "".join(rng.choice("abc") for _ in range(rng.randrange(10)))
        factorization_properties(rl_factorize(word, 1))


def test_transfer_identity():
    fact = rl_factorize("aabab", 1)
    again = transfer_factorization(fact, "aabab")
    assert again.pairs == fact.pairs


def test_transfer_missing_letter_fails():
    fact = rl_factorize("ab", 1)
    assert fact.pairs
    with pytest.raises(TransferFailure):
        transfer_factorization(fact, "aaaa")


def test_transfer_within_comparison_class():
    # words equivalent under enough depth-1 comparisons admit the transfer,
    # and the transferred factorization satisfies the same properties
    from twcover import build_comparison_set, leq_words
    n = 1
    fact = rl_factorize("aabba", n)
    cset = build_comparison_set("RR1", 1, (n + 1) * 2 + n, "ab")
    for other in words_upto("ab", 7):
        if leq_words("aabba", other, cset) and leq_words(other, "aabba", cset):
            moved = transfer_factorization(fact, other)
            assert moved.reconstruct() == other
            for (b, a), (b2, a2) in zip(fact.pairs, moved.pairs):
                assert other[a2 - 1] == fact.word[a - 1]
                assert other[b2 - 1] == fact.word[b - 1]


def test_mu_minor():
    lang = language("(ab)+", "ab")
    mu = lang.morphism
    assert mu_minor("", mu) == ""
    rng = random.Random(7)
    for _ in range(200):
        word = "".join(rng.choice("ab") for _ in range(rng.randrange(15)))
        minor = mu_minor(word, mu)
        assert is_subword(minor, word)
        assert mu(minor) == mu(word)
        for i in range(len(minor)):
            assert mu(minor[:i] + minor[i + 1:]) != mu(word)


def test_mu_minor_ramsey_bound(corpus):
    rng = random.Random(13)
    langs = [lang for _, lang in corpus if lang.monoid.size <= 4]
    for _ in range(300):
        lang = rng.choice(langs)
        bound = ramsey_bound(lang.monoid.size) - 2
        word = "".join(rng.choice("ab") for _ in range(rng.randrange(25)))
        assert len(mu_minor(word, lang.morphism)) <= bound
