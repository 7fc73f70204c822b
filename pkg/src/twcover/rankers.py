"""Rankers, comparison families, signatures and the induced quotient monoids.

A signature packs everything the word preorder can see into bitmasks, so
comparing two words costs a few integer operations regardless of depth.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .monoid import FiniteMonoid, ResourceCapError

CLASS_CAP = 200_000
TABLE_CAP = 1500


@dataclass(frozen=True)
class Ranker:
    """Word over next-letter (X) and previous-letter (Y) instructions."""
    steps: tuple

    @classmethod
    def parse(cls, text):
        steps = []
        for tok in text.split():
            if len(tok) != 2 or tok[0] not in "XY" or not tok[1].isalpha():
                raise ValueError("bad ranker step %r (want e.g. 'Xa')" % tok)
            steps.append((tok[0], tok[1]))
        if not steps:
            raise ValueError("a ranker is a non-empty instruction word")
        return cls(tuple(steps))

    def __str__(self):
        return " ".join(d + a for d, a in self.steps)

    @property
    def depth(self):
        return len(self.steps)

    def blocks(self):
        """Maximal runs of equal direction, as a list of directions."""
        out = []
        for d, _ in self.steps:
            if not out or out[-1] != d:
                out.append(d)
        return out

    @property
    def alternation_depth(self):
        return len(self.blocks())

    def subwords(self):
        """All non-empty rankers obtained by deleting instructions."""
        out = set()
        n = len(self.steps)
        for mask in range(1, 1 << n):
            out.add(Ranker(tuple(self.steps[i] for i in range(n) if (mask >> i) & 1)))
        return out


def eval_ranker(ranker, word):
    """Position reached on the word (1-based), or None when undefined."""
    pos = None
    for d, a in ranker.steps:
        if d == "X":
            start = 0 if pos is None else pos
            pos = next((i for i in range(start + 1, len(word) + 1)
                        if word[i - 1] == a), None)
        else:
            start = len(word) + 1 if pos is None else pos
            pos = next((i for i in range(start - 1, 0, -1)
                        if word[i - 1] == a), None)
        if pos is None:
            return None
    return pos


def fits_template(ranker, m, start):
    """Whether the instruction blocks embed into m alternating slots whose
    first slot has direction `start` (the subword closure of R^X_m/R^Y_m)."""
    blocks = ranker.blocks()
    if blocks[0] == start:
        return len(blocks) <= m
    return len(blocks) <= m - 1


def in_collection(ranker, m, side):
    """Membership in the exact collection R^X_m (side 'X') resp. R^Y_m."""
    blocks = ranker.blocks()
    if len(blocks) > m:
        return False
    last_even = blocks[-1] == ("Y" if side == "X" else "X")
    return last_even == (m % 2 == 0)


def ranker_pool(m, n, start, alphabet):
    """All rankers of depth <= n fitting the m-slot template, shortest first."""
    out = []
    for depth in range(1, n + 1):
        for combo in itertools.product(
                [(d, a) for d in "XY" for a in alphabet], repeat=depth):
            r = Ranker(combo)
            if fits_template(r, m, start):
                out.append(r)
    return out


# -- comparison sets --------------------------------------------------------------

FLAVORS = ("XX", "YY", "XY", "YX", "XXuYY", "XYuYX", "RR1")


@dataclass(frozen=True)
class ComparisonSet:
    flavor: str
    m: int
    n: int
    alphabet: str
    special: bool                 # level-1 subword semantics for XY/YX/XYuYX
    rankers: tuple                # [C], deduplicated
    pair_slots: tuple             # ordered (i, j) index pairs into rankers

    @property
    def pairs(self):
        return tuple((self.rankers[i], self.rankers[j]) for i, j in self.pair_slots)

    def subword_bound(self):
        if not self.special:
            raise ValueError("only the level-1 XY/YX families use subword bounds")
        return 2 * self.n


def build_comparison_set(flavor, m, n, alphabet):
    """The flavored families of the comparison hierarchy; closed under ranker
    subwords by construction, so the induced preorder is stable."""
    alphabet = "".join(sorted(alphabet))
    if flavor not in FLAVORS:
        raise ValueError("unknown flavor %r" % flavor)
    if m < 1 or n < 1:
        raise ValueError("need m >= 1 and n >= 1")
    if flavor in ("XY", "YX", "XYuYX") and m == 1:
        return ComparisonSet(flavor, m, n, alphabet, True, (), ())
    if flavor == "RR1":
        if m != 1:
            raise ValueError("RR1 compares alternation-depth-1 rankers only")
        pool = [r for r in ranker_pool(1, n, "X", alphabet)] + \
               [r for r in ranker_pool(1, n, "Y", alphabet)]
        pool = list(dict.fromkeys(pool))
        index = {r: i for i, r in enumerate(pool)}
        slots = [(index[r], index[s]) for r in pool for s in pool]
        return ComparisonSet(flavor, m, n, alphabet, False, tuple(pool), tuple(slots))
    x_pool = ranker_pool(m, n, "X", alphabet)
    y_pool = ranker_pool(m, n, "Y", alphabet)
    if flavor == "XX":
        rankers, sides, slots_spec = x_pool, {"L": x_pool, "R": x_pool}, [("L", "L")]
    elif flavor == "YY":
        rankers, sides, slots_spec = y_pool, {"L": y_pool, "R": y_pool}, [("L", "L")]
    else:
        rankers = x_pool + y_pool
        sides = {"L": x_pool, "R": y_pool}
        slots_spec = {"XY": [("L", "R")], "YX": [("R", "L")],
                      "XXuYY": [("L", "L"), ("R", "R")],
                      "XYuYX": [("L", "R"), ("R", "L")]}[flavor]
    rankers = list(dict.fromkeys(rankers))
    index = {r: i for i, r in enumerate(rankers)}
    slots = []
    seen = set()
    for a, b in slots_spec:
        for r in sides[a]:
            for s in sides[b]:
                if (index[r], index[s]) not in seen:
                    seen.add((index[r], index[s]))
                    slots.append((index[r], index[s]))
    return ComparisonSet(flavor, m, n, alphabet, False, tuple(rankers), tuple(slots))


def explicit_comparison_set(pairs, alphabet):
    """Wrap an explicit pair set, insisting on ranker-subword closure (the
    stability proposition needs it; {(X_aa, Y_aa)} is the canonical reject)."""
    pairs = set(pairs)
    for r, s in pairs:
        for r2 in r.subwords():
            for s2 in s.subwords():
                if (r2, s2) not in pairs:
                    raise ValueError(
                        "pair set not closed under ranker subwords: missing (%s, %s)"
                        % (r2, s2))
    rankers = list(dict.fromkeys(r for p in pairs for r in p))
    index = {r: i for i, r in enumerate(rankers)}
    slots = tuple(sorted((index[r], index[s]) for r, s in pairs))
    n = max(r.depth for r in rankers)
    m = max(r.alternation_depth for r in rankers)
    alphabet = "".join(sorted(alphabet))
    return ComparisonSet("EXPLICIT", m, n, alphabet, False, tuple(rankers), slots)


# -- signatures -------------------------------------------------------------------


class SubwordUniverse:
    """Words of length 1..k over the alphabet, indexed, with append/prepend maps."""

    def __init__(self, alphabet, k):
        self.alphabet = alphabet
        self.k = k
        words = []
        for length in range(1, k + 1):
            words += ["".join(p) for p in itertools.product(alphabet, repeat=length)]
        self.words = words
        self.index = {w: i for i, w in enumerate(words)}
        self.append = {}
        self.prepend = {}
        for a in alphabet:
            app = [self.index[w + a] if len(w) < k else None for w in words]
            pre = [self.index[a + w] if len(w) < k else None for w in words]
            self.append[a] = app
            self.prepend[a] = pre

    def subword_mask(self, word):
        mask = 0
        for a in word:
            mask = self.extend_right(mask, a)
        return mask

    def extend_right(self, mask, a):
        out = mask | (1 << self.index[a])
        app = self.append[a]
        rest = mask
        while rest:
            low = rest & -rest
            i = low.bit_length() - 1
            if app[i] is not None:
                out |= 1 << app[i]
            rest &= rest - 1
        return out

    def extend_left(self, mask, a):
        out = mask | (1 << self.index[a])
        pre = self.prepend[a]
        rest = mask
        while rest:
            low = rest & -rest
            i = low.bit_length() - 1
            if pre[i] is not None:
                out |= 1 << pre[i]
            rest &= rest - 1
        return out


@lru_cache(maxsize=None)
def _universe(alphabet, k):
    return SubwordUniverse(alphabet, k)


def ranker_positions(cset, word):
    """Positions of every pool ranker on the word, via the prefix-closed trie."""
    n = len(word)
    letters = sorted(set(cset.alphabet))
    nxt = {a: [None] * (n + 2) for a in letters}
    prv = {a: [None] * (n + 2) for a in letters}
    for a in letters:
        arr = nxt[a]
        last = None
        for i in range(n, 0, -1):
            if word[i - 1] == a:
                last = i
            arr[i - 1] = last
        arr[n] = None
        parr = prv[a]  # last occurrence strictly before i
        seen = None
        for i in range(1, n + 2):
            parr[i] = seen
            if i <= n and word[i - 1] == a:
                seen = i
    ordering = sorted(range(len(cset.rankers)), key=lambda i: cset.rankers[i].depth)
    by_steps = {cset.rankers[i].steps: i for i in range(len(cset.rankers))}
    pos = [None] * len(cset.rankers)
    for i in ordering:
        steps = cset.rankers[i].steps
        d, a = steps[-1]
        if len(steps) == 1:
            base = 0 if d == "X" else n + 1
        else:
            parent = by_steps.get(steps[:-1])
            base = pos[parent] if parent is not None else None
            if base is None:
                continue
        if d == "X":
            pos[i] = nxt[a][base] if base <= n else None
        else:
            pos[i] = prv[a][base] if base >= 1 else None
    return pos


def signature(word, cset):
    """Hashable record of everything the comparison set sees on the word."""
    if cset.special:
        uni = _universe(cset.alphabet, cset.subword_bound())
        return uni.subword_mask(word)
    pos = ranker_positions(cset, word)
    defmask = 0
    for i, p in enumerate(pos):
        if p is not None:
            defmask |= 1 << i
    lt = 0
    le = 0
    for slot, (i, j) in enumerate(cset.pair_slots):
        pi, pj = pos[i], pos[j]
        if pi is None or pj is None:
            continue
        if pi < pj:
            lt |= 1 << slot
            le |= 1 << slot
        elif pi == pj:
            le |= 1 << slot
    return (defmask, lt, le)


def leq_signatures(cset, sig_u, sig_v):
    if cset.special:
        if cset.flavor == "XY":
            return sig_u & ~sig_v == 0
        if cset.flavor == "YX":
            return sig_v & ~sig_u == 0
        return sig_u == sig_v  # XYuYX: same subwords
    du, ltu, leu = sig_u
    dv, ltv, lev = sig_v
    return du == dv and ltu & ~ltv == 0 and leu & ~lev == 0


def leq_words(u, v, cset):
    """The word preorder u <=^C v."""
    return leq_signatures(cset, signature(u, cset), signature(v, cset))


def signature_rank(cset, sig):
    """Monotone proxy for the order: s <= t implies rank(s) <= rank(t)."""
    if cset.special:
        pop = bin(sig).count("1")
        return -pop if cset.flavor == "YX" else pop
    _, lt, le = sig
    return bin(lt).count("1") + bin(le).count("1")


# -- the quotient monoids ---------------------------------------------------------


class RankerMonoid:
    """A^* / <=^C, elements identified by signature, built by letter BFS.

    Exposes the right-action protocol (identity_key/step/key_leq) used by
    relational-morphism graphs, so big instances never need a full table.
    """

    def __init__(self, cset, cap=CLASS_CAP):
        self.cset = cset
        self.alphabet = cset.alphabet
        uni = _universe(cset.alphabet, cset.subword_bound()) if cset.special else None
        sigs = []
        reps = []
        index = {}

        def add(sig, rep):
            if sig in index:
                return index[sig]
            if len(sigs) >= cap:
                raise ResourceCapError(
                    "ranker monoid exceeded %d classes (reached depth-%d family)"
                    % (cap, cset.n))
            index[sig] = len(sigs)
            sigs.append(sig)
            reps.append(rep)
            return index[sig]

        add(signature("", cset), "")
        delta = []
        head = 0
        while head < len(sigs):
            rep = reps[head]
            row = []
            for a in self.alphabet:
                if cset.special:
                    child = uni.extend_right(sigs[head], a)
                else:
                    child = signature(rep + a, cset)
                row.append(add(child, rep + a))
            delta.append(row)
            head += 1
        self.sigs = sigs
        self.reps = reps
        self.index = index
        self.delta = delta
        self.size = len(sigs)
        self._letter_pos = {a: i for i, a in enumerate(self.alphabet)}
        self._mult_cache = {}
        self._lambda = None

    # right-action protocol
    def identity_key(self):
        return 0

    def step(self, key, letter):
        return self.delta[key][self._letter_pos[letter]]

    def key_leq(self, i, j):
        return leq_signatures(self.cset, self.sigs[i], self.sigs[j])

    def key_rank(self, i):
        return signature_rank(self.cset, self.sigs[i])

    def image_of(self, word):
        key = 0
        for a in word:
            key = self.step(key, a)
        return key

    def mult(self, i, j):
        got = self._mult_cache.get((i, j))
        if got is None:
            got = i
            for a in self.reps[j]:
                got = self.step(got, a)
            self._mult_cache[(i, j)] = got
        return got

    def _left_transitions(self):
        if self._lambda is not None:
            return self._lambda
        out = []
        uni = _universe(self.cset.alphabet, self.cset.subword_bound()) \
            if self.cset.special else None
        for a in self.alphabet:
            if self.cset.special:
                col = [self.index[uni.extend_left(s, a)] for s in self.sigs]
            else:
                col = [self.index[signature(a + rep, self.cset)] for rep in self.reps]
            out.append(col)
        self._lambda = out
        return out

    def is_j_trivial(self):
        """J-triviality via SCCs of the two-sided Cayley graph on letters."""
        left = self._left_transitions()
        n = self.size
        edges = [set() for _ in range(n)]
        for ai in range(len(self.alphabet)):
            for s in range(n):
                edges[s].add(self.delta[s][ai])
                edges[s].add(left[ai][s])
        # iterative Tarjan
        indexv = [-1] * n
        low = [0] * n
        onstack = [False] * n
        stack = []
        counter = [0]
        trivial = [True]

        for root in range(n):
            if indexv[root] >= 0:
                continue
            work = [(root, iter(edges[root]))]
            indexv[root] = low[root] = counter[0]
            counter[0] += 1
            stack.append(root)
            onstack[root] = True
            while work:
                v, it = work[-1]
                advanced = False
                for w in it:
                    if indexv[w] < 0:
                        indexv[w] = low[w] = counter[0]
                        counter[0] += 1
                        stack.append(w)
                        onstack[w] = True
                        work.append((w, iter(edges[w])))
                        advanced = True
                        break
                    elif onstack[w]:
                        low[v] = min(low[v], indexv[w])
                if advanced:
                    continue
                work.pop()
                if work:
                    low[work[-1][0]] = min(low[work[-1][0]], low[v])
                if low[v] == indexv[v]:
                    comp = []
                    while True:
                        w = stack.pop()
                        onstack[w] = False
                        comp.append(w)
                        if w == v:
                            break
                    if len(comp) > 1:
                        trivial[0] = False
        return trivial[0]

    def identity_is_minimum(self):
        return all(self.key_leq(0, i) for i in range(self.size))

    def to_finite_monoid(self, cap=TABLE_CAP):
        """Materialize the full ordered multiplication table (small instances)."""
        if self.size > cap:
            raise ResourceCapError(
                "ranker monoid with %d classes exceeds the table cap %d"
                % (self.size, cap))
        n = self.size
        table = [[self.mult(i, j) for j in range(n)] for i in range(n)]
        order = [0] * n
        for i in range(n):
            for j in range(n):
                if self.key_leq(i, j):
                    order[i] |= 1 << j
        names = [r if r else "1" for r in self.reps]
        return FiniteMonoid(table, 0, names=names, order=tuple(order), check=False)

    def morphism_into_table(self, finite):
        from .monoid import MonoidMorphism
        return MonoidMorphism(self.alphabet, finite,
                              {a: self.step(0, a) for a in self.alphabet})

    def __repr__(self):
        return "RankerMonoid(%s_{%d,%d}, size=%d)" % (
            self.cset.flavor, self.cset.m, self.cset.n, self.size)


def build_ranker_monoid(flavor, m, n, alphabet, cap=CLASS_CAP):
    return RankerMonoid(build_comparison_set(flavor, m, n, alphabet), cap=cap)


# -- theorem depths ----------------------------------------------------------------


def theorem_depth(kind, m, alphabet_size, ramsey):
    """Depth parameter the main theorem assigns to a separator.

    kind: 'corner' for XX/YY/XXuYY at ranker index m (Ramsey number of 2^M),
    'alternation' for XY/YX/XYuYX at index m >= 2 (Ramsey number of 2^M),
    'subword' for the level-1 Si/Pi separators (Ramsey number of M),
    'piecewise' for the J separator (Ramsey number of M).
    """
    if ramsey < 3:
        raise ValueError("a Ramsey bound is at least 3")
    if kind == "corner":
        return (m + alphabet_size) * (ramsey - 1)
    if kind == "alternation":
        return (m - 1 + 3 * alphabet_size) * (ramsey - 1) + alphabet_size
    if kind == "subword":
        return -(-ramsey // 2) - 1
    if kind == "piecewise":
        return alphabet_size * ramsey + ramsey - 1
    raise ValueError("unknown separator kind %r" % kind)
