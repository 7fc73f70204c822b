"""Words, subwords, n-long factors, marker positions, structural
factorizations and morphism minors.

Positions are 1-based; word[i,j) denotes letters i..j-1, so [i,i) is empty.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import inf

from .rankers import Ranker, eval_ranker


class TransferFailure(Exception):
    """A factorization's marker rankers do not transfer to the given word."""


def alph(word):
    return frozenset(word)


def is_subword(v, u):
    it = iter(u)
    return all(a in it for a in v)


def universality_index(word, letters):
    """Largest k such that every word over `letters` of length <= k is a
    subword, counted by greedy arch cuts: scan until all letters appeared,
    cut, repeat. Returns inf for an empty letter set (word must be empty)."""
    letters = frozenset(letters)
    if not alph(word) <= letters:
        raise ValueError("word uses letters outside the given set")
    if not letters:
        return inf
    count = 0
    seen = set()
    for a in word:
        seen.add(a)
        if len(seen) == len(letters):
            count += 1
            seen.clear()
    return count


def is_n_long(word, n):
    """Whether every word of length <= n over the factor's own alphabet
    occurs as a subword; empty factors are n-long vacuously."""
    return universality_index(word, alph(word)) >= n


def long_markers(word, n):
    """(R_n, L_n): positions just after resp. just before some maximal
    n-long factor, with the sentinels 0 and len+1 always included."""
    size = len(word)
    longs = []
    for i in range(1, size + 2):
        for j in range(i, size + 2):
            if is_n_long(word[i - 1:j - 1], n):
                longs.append((i, j))
    maximal = [(i, j) for (i, j) in longs
               if not any((i2, j2) != (i, j) and i2 <= i and j <= j2
                          for (i2, j2) in longs)]
    rset = {0} | {j for (_, j) in maximal}
    lset = {size + 1} | {i - 1 for (i, _) in maximal}
    return frozenset(rset), frozenset(lset)


@dataclass(frozen=True)
class MarkedFactorization:
    """u = u_1 b_1 v_1 a_1 ... u_k with the markers and their reaching rankers.

    pairs[i] = (position of b_i, position of a_i); the two may coincide.
    x_rankers[i] reaches a_i, y_rankers[i] reaches b_i on the source word.
    """
    word: str
    n: int
    pairs: tuple
    x_rankers: tuple
    y_rankers: tuple

    @property
    def k(self):
        return len(self.pairs) + 1

    def segments(self):
        """The n-long pieces u_1 .. u_k."""
        w = self.word
        out = []
        prev_end = 0  # 0-based index after the previous a-marker
        for (b, a) in self.pairs:
            out.append(w[prev_end:b - 1])
            prev_end = a
        out.append(w[prev_end:])
        return out

    def gaps(self):
        """The pieces b_i v_i a_i (a single letter when the markers coincide)."""
        w = self.word
        return [w[b - 1:a] for (b, a) in self.pairs]

    def reconstruct(self):
        segs = self.segments()
        out = segs[0]
        for piece, seg in zip(self.gaps(), segs[1:]):
            out += piece + seg
        return out


def _x_reachable(word, depth):
    """pos -> shortest (then lexicographically least) letter word p with
    X_p landing there, for depths <= depth; includes the virtual start 0."""
    letters = sorted(set(word))
    reach = {0: ""}
    frontier = [(0, "")]
    for _ in range(depth):
        nxt = []
        for pos, p in sorted(frontier, key=lambda t: t[1]):
            for a in letters:
                hit = word.find(a, pos)
                if hit >= 0 and hit + 1 not in reach:
                    reach[hit + 1] = p + a
                    nxt.append((hit + 1, p + a))
        frontier = nxt
    return reach


def _ranker_word_to(word, target, n):
    """Letter word p with X_p(word) = target, built by the rightmost-reach
    recursion on shrinking alphabets."""
    reach = _x_reachable(word, n + 1)
    c = max(pos for pos in reach if pos <= target)
    p = reach[c]
    if c == target:
        return p
    letter = word[target - 1]
    middle = word[c:target - 1]
    if letter not in middle:
        return p + letter
    inner = middle + letter
    if not alph(inner) < alph(word):
        raise ValueError("marker-ranker recursion did not shrink the alphabet; "
                         "the target is not a long-factor marker")
    return p + _ranker_word_to(inner, len(inner), n)


def _marker_ranker_x(word, target, n):
    p = _ranker_word_to(word, target, n)
    ranker = Ranker(tuple(("X", a) for a in p))
    assert eval_ranker(ranker, word) == target
    return ranker


def _marker_ranker_y(word, target, n):
    rev = word[::-1]
    p = _ranker_word_to(rev, len(word) + 1 - target, n)
    ranker = Ranker(tuple(("Y", a) for a in p))
    assert eval_ranker(ranker, word) == target
    return ranker


def rl_factorize(word, n):
    """Factorization u = u_1 b_1 v_1 a_1 ... u_k with every u_i n-long,
    a-markers on R_{n+2}(u), b-markers on L_{n+2}(u), and reaching rankers."""
    if n < 1:
        raise ValueError("longness parameter must be at least 1")
    rset, lset = long_markers(word, n + 2)
    rs = sorted(p for p in rset if 1 <= p <= len(word))
    ls = sorted(p for p in lset if 1 <= p <= len(word))
    if len(rs) != len(ls):
        raise AssertionError("interleaving of long-factor markers failed")
    pairs = []
    for b, a in zip(ls, rs):
        if not b <= a:
            raise AssertionError("marker pairing out of order")
        pairs.append((b, a))
    for (_, a), (b2, _) in zip(pairs, pairs[1:]):
        if not a < b2:
            raise AssertionError("marker pairing out of order")
    xs = tuple(_marker_ranker_x(word, a, n) for (_, a) in pairs)
    ys = tuple(_marker_ranker_y(word, b, n) for (b, _) in pairs)
    return MarkedFactorization(word, n, tuple(pairs), xs, ys)


def transfer_factorization(fact, word):
    """Re-anchor a factorization on another word by evaluating its marker
    rankers there; fails when a ranker is undefined or the order breaks."""
    a_pos = []
    b_pos = []
    for xr, yr in zip(fact.x_rankers, fact.y_rankers):
        pa = eval_ranker(xr, word)
        pb = eval_ranker(yr, word)
        if pa is None or pb is None:
            raise TransferFailure("marker ranker undefined on the target word")
        a_pos.append(pa)
        b_pos.append(pb)
    pairs = list(zip(b_pos, a_pos))
    for b, a in pairs:
        if not b <= a:
            raise TransferFailure("marker order violated on the target word")
    for (_, a), (b2, _) in zip(pairs, pairs[1:]):
        if not a < b2:
            raise TransferFailure("marker order violated on the target word")
    return MarkedFactorization(word, fact.n, tuple(pairs),
                               fact.x_rankers, fact.y_rankers)


def mu_minor(word, morphism):
    """A shortest subword with the same image (lexicographically least among
    them). Shortest implies no strict subword shares the image, so this is a
    genuine minor; single-deletion descent can strand above the Ramsey bound,
    e.g. on parity monoids."""
    monoid = morphism.target
    best = {monoid.identity: ""}
    for letter in word:
        image = morphism.images[letter]
        for elt, via in sorted(best.items(), key=lambda kv: (len(kv[1]), kv[1])):
            nxt = monoid.mult(elt, image)
            cand = via + letter
            held = best.get(nxt)
            if held is None or (len(cand), cand) < (len(held), held):
                best[nxt] = cand
    return best[morphism(word)]
