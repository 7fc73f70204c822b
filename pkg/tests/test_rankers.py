import itertools
import random

import pytest

from twcover import (Ranker, ResourceCapError, build_comparison_set,
                     build_ranker_monoid, eval_ranker, is_in, leq_words,
                     signature, theorem_depth)
from twcover.rankers import (explicit_comparison_set, fits_template,
                             in_collection, ranker_pool, ranker_positions)
from conftest import words_upto


def naive_eval(ranker, word):
    """Reference semantics straight from the inductive definition."""
    pos = None
    for d, a in ranker.steps:
        hits = [i for i in range(1, len(word) + 1) if word[i - 1] == a]
        if d == "X":
            hits = [i for i in hits if pos is None or i > pos]
            pos = min(hits) if hits else None
        else:
            hits = [i for i in hits if pos is None or i < pos]
            pos = max(hits) if hits else None
        if pos is None:
            return None
    return pos


def test_eval_examples():
    assert eval_ranker(Ranker.parse("Xa Yb"), "bab") == 1
    assert eval_ranker(Ranker.parse("Yb Xa"), "bab") is None
    assert eval_ranker(Ranker.parse("Xa"), "") is None


def test_parse_rejects_garbage():
    for bad in ("", "Za", "X", "Xa Y"):
        with pytest.raises(ValueError):
            Ranker.parse(bad)


def test_eval_matches_naive_and_trie():
    rng = random.Random(3)
    cset = build_comparison_set("XYuYX", 2, 3, "ab")
    for _ in range(60):
        word = "".join(rng.choice("ab") for _ in range(rng.randrange(9)))
        pos = ranker_positions(cset, word)
        for i, r in enumerate(cset.rankers):
            assert pos[i] == naive_eval(r, word) == eval_ranker(r, word)


def test_collections_and_templates():
    r = Ranker.parse("Xa Xb")
    assert in_collection(r, 1, "X") and not in_collection(r, 1, "Y")
    assert not in_collection(r, 2, "X")  # R^X_2 words end with Y
    assert in_collection(r, 3, "X")
    assert fits_template(r, 1, "X") and not fits_template(r, 1, "Y")
    mixed = Ranker.parse("Xa Yb")
    assert in_collection(mixed, 2, "X")
    assert fits_template(mixed, 2, "X") and not fits_template(mixed, 1, "X")


def test_pool_counts():
    for n in (1, 2, 3):
        pool = ranker_pool(1, n, "X", "ab")
        assert len(pool) == sum(2 ** k for k in range(1, n + 1))
    # the template pools are subword closed, hence prefix closed
    pool = ranker_pool(2, 3, "X", "ab")
    have = set(pool)
    for r in pool:
        for sub in r.subwords():
            assert sub in have


def test_flavored_sets_are_subword_closed():
    for flavor, m in (("XX", 1), ("XX", 2), ("XY", 2), ("XYuYX", 2), ("RR1", 1)):
        cset = build_comparison_set(flavor, m, 2, "ab")
        pairs = set(cset.pairs)
        for r, s in cset.pairs:
            for r2 in r.subwords():
                for s2 in s.subwords():
                    assert (r2, s2) in pairs


def test_explicit_set_validator_rejects_unclosed():
    xaa = Ranker.parse("Xa Xa")
    yaa = Ranker.parse("Ya Ya")
    with pytest.raises(ValueError):
        explicit_comparison_set({(xaa, yaa)}, "a")
    closed = {(r, s) for r in xaa.subwords() | {xaa}
              for s in yaa.subwords() | {yaa}}
    got = explicit_comparison_set(closed, "a")
    assert len(got.rankers) == 4


def test_xx11_by_spec():
    cset = build_comparison_set("XX", 1, 1, "ab")
    assert len(cset.pair_slots) == 4
    sig = signature("ab", cset)
    defmask, lt, _ = sig
    assert defmask == 0b11
    assert lt  # X_a strictly before X_b somewhere
    empty = signature("", cset)
    assert empty[0] == 0


def test_leq_words_basics():
    cset = build_comparison_set("XX", 1, 2, "ab")
    for word in ("", "ab", "bba"):
        assert leq_words(word, word, cset)
    special = build_comparison_set("XY", 1, 2, "ab")
    for word in ("", "a", "abab"):
        assert leq_words("", word, special)


def test_signature_equality_is_mutual_leq():
    cset = build_comparison_set("XYuYX", 2, 2, "ab")
    words = list(words_upto("ab", 5))
    rng = random.Random(9)
    for _ in range(400):
        u, v = rng.choice(words), rng.choice(words)
        mutual = leq_words(u, v, cset) and leq_words(v, u, cset)
        assert mutual == (signature(u, cset) == signature(v, cset))


@pytest.mark.parametrize("flavor,m", [("XX", 1), ("YY", 1), ("XY", 1),
                                      ("YX", 1), ("XXuYY", 1), ("XYuYX", 1),
                                      ("XY", 2), ("YX", 2), ("XXuYY", 2),
                                      ("XYuYX", 2), ("RR1", 1)])
def test_stability_sampled(flavor, m):
    cset = build_comparison_set(flavor, m, 2, "ab")
    rng = random.Random(hash((flavor, m)) & 0xFFFF)
    for _ in range(300):
        u, v, x, y = ("".join(rng.choice("ab") for _ in range(rng.randrange(6)))
                      for _ in range(4))
        if leq_words(u, v, cset):
            assert leq_words(x + u + y, x + v + y, cset)


def test_ranker_monoid_xx11():
    monoid = build_ranker_monoid("XX", 1, 1, "ab")
    assert monoid.size == 5
    assert sorted(monoid.reps) == ["", "a", "ab", "b", "ba"]
    # exhaustively: words up to length 4 fall into exactly these classes
    seen = {monoid.image_of(w) for w in words_upto("ab", 4)}
    assert seen == set(range(5))


def test_ranker_monoid_morphism_property():
    monoid = build_ranker_monoid("XYuYX", 2, 2, "ab")
    rng = random.Random(17)
    for _ in range(200):
        u = "".join(rng.choice("ab") for _ in range(rng.randrange(6)))
        v = "".join(rng.choice("ab") for _ in range(rng.randrange(6)))
        assert monoid.image_of(u + v) == monoid.mult(monoid.image_of(u),
                                                     monoid.image_of(v))


def test_ranker_monoid_order_is_stable_preorder():
    from twcover import StablePreorder
    for flavor, m in (("XX", 1), ("XY", 1), ("XY", 2)):
        fm = build_ranker_monoid(flavor, m, 2, "ab").to_finite_monoid()
        StablePreorder(fm, fm.order)  # validates


def test_ranker_monoid_cap():
    with pytest.raises(ResourceCapError):
        build_ranker_monoid("XY", 1, 3, "ab", cap=100)


def test_special_identity_minimum():
    monoid = build_ranker_monoid("XY", 1, 1, "ab")
    assert monoid.identity_is_minimum()
    fm = monoid.to_finite_monoid()
    assert is_in("Si1", fm)


def _eval_from(word, start, steps):
    """Continue a ranker evaluation from a known position; None if it dies."""
    pos = start
    for d, a in steps:
        hits = range(pos + 1, len(word) + 1) if d == "X" else range(pos - 1, 0, -1)
        pos = next((i for i in hits if word[i - 1] == a), None)
        if pos is None:
            return None
    return pos


def test_move_last_alternation_lemma():
    # r = r' X_p with p the trailing X-block: comparing r against s equals
    # comparing r' against s Y_reversed(p), with the stated definedness rules
    rng = random.Random(23)
    shapes = ("Ya Xb", "Yb Xa", "Ya Xa Xb", "Yb Xb Xa", "Ya Yb Xa")
    others = ("Xa", "Xb", "Ya", "Yb", "Xa Yb", "Yb Xa")
    for _ in range(800):
        u = "".join(rng.choice("ab") for _ in range(rng.randrange(1, 9)))
        r = Ranker.parse(rng.choice(shapes))
        s = Ranker.parse(rng.choice(others))
        ru, su = eval_ranker(r, u), eval_ranker(s, u)
        if ru is None or su is None:
            continue
        k = 0
        while r.steps[-1 - k][0] == "X":
            k += 1
        head = Ranker(r.steps[:-k])
        tail = [a for _, a in r.steps[-k:]][::-1]
        moved = Ranker(s.steps + tuple(("Y", a) for a in tail))
        hu = eval_ranker(head, u)
        mv = eval_ranker(moved, u)
        assert hu is not None  # prefix of a defined ranker
        # strict form: at r(u) = s(u) the moved ranker may die on (or jump
        # over) the shared position, so the printed non-strict biconditionals
        # fail exactly there
        assert (ru < su) == (mv is not None and hu < mv)
        if mv is not None:
            assert (mv <= hu) == (su <= ru)


def test_defined_on_factor_lemma():
    # for u = x a v b y with the marked positions as anchors: a ranker t
    # starting with X is defined on v iff continuing it from the a-position
    # keeps every prefix strictly between the anchors
    rng = random.Random(29)
    for _ in range(400):
        x = "".join(rng.choice("ab") for _ in range(rng.randrange(4)))
        v = "".join(rng.choice("ab") for _ in range(rng.randrange(5)))
        y = "".join(rng.choice("ab") for _ in range(rng.randrange(4)))
        u = x + "a" + v + "b" + y
        r_pos = len(x) + 1
        s_pos = r_pos + len(v) + 1
        for t_text in ("Xa", "Xb", "Xa Xb", "Xb Xa", "Xa Yb"):
            t = Ranker.parse(t_text)
            inner = eval_ranker(t, v)
            outer_ok = True
            for k in range(1, t.depth + 1):
                got = _eval_from(u, r_pos, t.steps[:k])
                if got is None or not (r_pos < got < s_pos):
                    outer_ok = False
                    break
            assert (inner is not None) == outer_ok


def test_factor_transfer_lemma_base_case():
    # u <=^{YX}_{2,n} u' with bridging rankers X_p, Y_q transfers the inner
    # comparison class at one less alternation (subword semantics at level 1)
    n, k = 4, 1
    outer = build_comparison_set("YX", 2, n, "ab")
    inner = build_comparison_set("XY", 1, n - k, "ab")
    words = [w for w in words_upto("ab", 6) if len(w) >= 2]
    rng = random.Random(31)
    pairs = 0
    for _ in range(4000):
        u, u2 = rng.choice(words), rng.choice(words)
        if not leq_words(u, u2, outer):
            continue
        for letter_p in "ab":
            for letter_q in "ab":
                xp = Ranker.parse("X" + letter_p)
                yq = Ranker.parse("Y" + letter_q)
                pa, pa2 = eval_ranker(xp, u), eval_ranker(xp, u2)
                qb, qb2 = eval_ranker(yq, u), eval_ranker(yq, u2)
                if None in (pa, pa2, qb, qb2):
                    continue
                if not (qb < pa and qb2 < pa2):
                    continue
                v = u[qb:pa - 1]
                v2 = u2[qb2:pa2 - 1]
                assert leq_words(v, v2, inner)
                pairs += 1
    assert pairs > 50


def test_theorem_depths():
    assert theorem_depth("subword", 1, 2, 6) == 2
    assert theorem_depth("corner", 1, 2, 6) == 15
    assert theorem_depth("piecewise", 1, 2, 6) == 17
    assert theorem_depth("alternation", 2, 2, 6) == 37
    for kind in ("corner", "alternation", "piecewise"):
        assert theorem_depth(kind, 2, 2, 7) > theorem_depth(kind, 2, 2, 6)
        assert theorem_depth(kind, 2, 3, 6) > theorem_depth(kind, 2, 2, 6)
    for kind in ("corner", "alternation"):  # the J depth does not involve m
        assert theorem_depth(kind, 3, 2, 6) > theorem_depth(kind, 2, 2, 6)
