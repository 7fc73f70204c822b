"""Finite monoid algebra: tables, Green's relations, stable preorders, quotients,
submonoid generation, content structures and relational-morphism graphs.

Element subsets are represented as int bitmasks throughout (bit i = element i).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from math import lcm


class ResourceCapError(Exception):
    """A configured size cap was exceeded; the instance is too large to handle."""


ASSOC_EXHAUSTIVE_LIMIT = 200
ASSOC_SAMPLES = 10**6
SUBMONOID_CAP = 100_000
RAMSEY_ARG_CAP = 10_000


def mask_iter(mask):
    """Yield the set bits of a mask in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask &= mask - 1


def mask_of(elements):
    out = 0
    for e in elements:
        out |= 1 << e
    return out


class FiniteMonoid:
    """A finite monoid given by its multiplication table.

    `order`, when present, is a stable partial order: order[s] is the mask of
    all t with s <= t. `names` are printable element names (display only).
    """

    def __init__(self, table, identity, names=None, order=None, check=True):
        self.table = tuple(tuple(row) for row in table)
        self.identity = identity
        self.size = len(self.table)
        self.names = tuple(names) if names is not None else None
        self.order = tuple(order) if order is not None else None
        self._cache = {}
        if check:
            self._check_axioms()

    def _check_axioms(self):
        n = self.size
        for row in self.table:
            if len(row) != n or any(not (0 <= x < n) for x in row):
                raise ValueError("malformed multiplication table")
        e = self.identity
        for s in range(n):
            if self.table[e][s] != s or self.table[s][e] != s:
                raise ValueError("identity law fails at element %d" % s)
        t = self.table
        if n <= ASSOC_EXHAUSTIVE_LIMIT:
            triples = itertools.product(range(n), repeat=3)
        else:
            rng = random.Random(0)
            triples = ((rng.randrange(n), rng.randrange(n), rng.randrange(n))
                       for _ in range(ASSOC_SAMPLES))
        for a, b, c in triples:
            if t[t[a][b]][c] != t[a][t[b][c]]:
                raise ValueError("table is not associative at (%d,%d,%d)" % (a, b, c))

    def mult(self, a, b):
        return self.table[a][b]

    def name(self, s):
        if self.names is not None:
            return self.names[s]
        return str(s)

    def set_name(self, mask):
        return "{" + ",".join(sorted(self.name(s) for s in mask_iter(mask))) + "}"

    def key(self):
        """Hashable identity of the monoid (table, identity, order)."""
        return (self.table, self.identity, self.order)

    def power(self, s, k):
        out = self.identity
        acc = s
        while k:
            if k & 1:
                out = self.table[out][acc]
            acc = self.table[acc][acc]
            k >>= 1
        return out

    @property
    def idempotent_mask(self):
        if "idem" not in self._cache:
            self._cache["idem"] = mask_of(s for s in range(self.size)
                                          if self.table[s][s] == s)
        return self._cache["idem"]

    @property
    def omega_exponent(self):
        """Smallest k >= 1 with s^k idempotent for every element s."""
        if "omega" in self._cache:
            return self._cache["omega"]
        need_lcm = 1
        max_tail = 1
        for s in range(self.size):
            seen = {}
            x = s
            k = 1
            while x not in seen:
                seen[x] = k
                x = self.table[x][s]
                k += 1
            tail = seen[x]
            cycle = k - seen[x]
            need_lcm = lcm(need_lcm, cycle)
            max_tail = max(max_tail, tail)
        omega = need_lcm
        while omega < max_tail:
            omega += need_lcm
        self._cache["omega"] = omega
        return omega

    def element_omega(self, s):
        return self.power(s, self.omega_exponent)

    # -- subsets (the power monoid, kept lazy) ------------------------------

    def set_mult(self, p, q):
        out = 0
        t = self.table
        for a in mask_iter(p):
            row = t[a]
            for b in mask_iter(q):
                out |= 1 << row[b]
        return out

    def set_power_idempotent(self, p):
        """U^theta for theta the idempotent power of 2^M, computed per subset."""
        seen = {}
        powers = []  # powers[i] = p^(i+1)
        x = p
        while x not in seen:
            seen[x] = len(powers)
            powers.append(x)
            x = self.set_mult(x, p)
        tail = seen[x] + 1  # first exponent on the cycle
        cycle = len(powers) - seen[x]
        exp = cycle
        while exp < tail:
            exp += cycle
        return powers[exp - 1]

    def is_subidempotent_set(self, p):
        return p & ~self.set_mult(p, p) == 0

    # -- Green's relations ---------------------------------------------------

    def right_ideal(self, s):
        return mask_of(self.table[s])

    def left_ideal(self, s):
        return mask_of(self.table[x][s] for x in range(self.size))

    def two_sided_ideal(self, s):
        out = 0
        for x in range(self.size):
            out |= self.right_ideal(self.table[x][s])
        return out

    def _ideals(self):
        if "ideals" not in self._cache:
            n = self.size
            r = [mask_of(row) for row in self.table]
            l = [self.left_ideal(s) for s in range(n)]
            j = []
            for s in range(n):
                out = 0
                for u in mask_iter(l[s]):
                    out |= r[u]
                j.append(out)
            self._cache["ideals"] = (r, l, j)
        return self._cache["ideals"]

    def leq_r(self, s, t):
        return (self._ideals()[0][t] >> s) & 1 == 1

    def leq_l(self, s, t):
        return (self._ideals()[1][t] >> s) & 1 == 1

    def leq_j(self, s, t):
        return (self._ideals()[2][t] >> s) & 1 == 1

    def lt_j(self, s, t):
        return self.leq_j(s, t) and not self.leq_j(t, s)

    def _classes_from(self, ideals):
        cls = [-1] * self.size
        reps = []
        for s in range(self.size):
            for i, r in enumerate(reps):
                if ideals[s] == ideals[r]:
                    cls[s] = i
                    break
            else:
                cls[s] = len(reps)
                reps.append(s)
        return cls

    @property
    def r_class(self):
        if "rcls" not in self._cache:
            self._cache["rcls"] = self._classes_from(self._ideals()[0])
        return self._cache["rcls"]

    @property
    def l_class(self):
        if "lcls" not in self._cache:
            self._cache["lcls"] = self._classes_from(self._ideals()[1])
        return self._cache["lcls"]

    @property
    def j_class(self):
        if "jcls" not in self._cache:
            self._cache["jcls"] = self._classes_from(self._ideals()[2])
        return self._cache["jcls"]

    def is_j_trivial(self):
        return len(set(self.j_class)) == self.size

    def is_idempotent_commutative(self):
        t = self.table
        n = self.size
        return (all(t[s][s] == s for s in range(n))
                and all(t[a][b] == t[b][a] for a in range(n) for b in range(n)))

    # -- order helpers ---------------------------------------------------------

    def with_order(self, rows):
        return FiniteMonoid(self.table, self.identity, names=self.names,
                            order=rows, check=False)

    def order_reversed(self):
        if self.order is None:
            raise ValueError("monoid carries no order")
        rows = [0] * self.size
        for s in range(self.size):
            for t in mask_iter(self.order[s]):
                rows[t] |= 1 << s
        return self.with_order(tuple(rows))

    def leq(self, s, t):
        if self.order is None:
            raise ValueError("monoid carries no order")
        return (self.order[s] >> t) & 1 == 1

    def opposite(self):
        n = self.size
        table = [[self.table[b][a] for b in range(n)] for a in range(n)]
        return FiniteMonoid(table, self.identity, names=self.names,
                            order=self.order, check=False)

    # -- text exchange format --------------------------------------------------

    def to_table_text(self):
        lines = ["%d %d" % (self.size, self.identity)]
        lines += [" ".join(map(str, row)) for row in self.table]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_table_text(cls, text, names=None):
        lines = [ln for ln in text.splitlines() if ln.strip()]
        n, identity = map(int, lines[0].split())
        table = [list(map(int, ln.split())) for ln in lines[1:1 + n]]
        return cls(table, identity, names=names)

    def eggbox_ascii(self):
        """J-classes from top (identity) to bottom, one R-class per row,
        one L-class per column."""
        jc = self.j_class
        groups = {}
        for s in range(self.size):
            groups.setdefault(jc[s], []).append(s)
        reps = {j: members[0] for j, members in groups.items()}

        def depth(j):
            return sum(1 for k in groups if k != j
                       and self.leq_j(reps[j], reps[k]) and not self.leq_j(reps[k], reps[j]))

        out = []
        for j in sorted(groups, key=lambda j: (depth(j), reps[j])):
            members = groups[j]
            rows = sorted({self.r_class[s] for s in members})
            cols = sorted({self.l_class[s] for s in members})
            grid = [["" for _ in cols] for _ in rows]
            for s in members:
                grid[rows.index(self.r_class[s])][cols.index(self.l_class[s])] += \
                    ("," if grid[rows.index(self.r_class[s])][cols.index(self.l_class[s])] else "") + self.name(s)
            width = max(len(c) for row in grid for c in row)
            sep = "+" + "+".join(["-" * (width + 2)] * len(cols)) + "+"
            out.append(sep)
            for row in grid:
                out.append("| " + " | ".join(c.ljust(width) for c in row) + " |")
                out.append(sep)
            out.append("")
        return "\n".join(out).rstrip() + "\n"

    def __repr__(self):
        return "FiniteMonoid(size=%d)" % self.size


# -- stable preorders ----------------------------------------------------------


class StablePreorder:
    """A reflexive, transitive relation on a monoid compatible with products.

    rows[s] is the mask of all t with s `below` t.
    """

    def __init__(self, carrier, rows, validate=True):
        self.carrier = carrier
        self.rows = tuple(rows)
        if validate:
            self.validate()

    def below(self, s, t):
        return (self.rows[s] >> t) & 1 == 1

    STABILITY_EXHAUSTIVE_LIMIT = 128

    def validate(self):
        m = self.carrier
        n = m.size
        rows = self.rows
        for s in range(n):
            if not (rows[s] >> s) & 1:
                raise ValueError("preorder not reflexive at %d" % s)
        for s in range(n):
            acc = rows[s]
            for t in mask_iter(rows[s]):
                if rows[t] & ~acc:
                    raise ValueError("preorder not transitive at (%d,%d)" % (s, t))
        # stability: compatibility with one-sided multiplication suffices,
        # two-sided follows by transitivity; sampled above the size limit
        t = m.table
        if n <= self.STABILITY_EXHAUSTIVE_LIMIT:
            triples = (((s, u, x) for s in range(n)
                        for u in mask_iter(rows[s]) for x in range(n)))
        else:
            rng = random.Random(1)
            def sampled():
                for _ in range(ASSOC_SAMPLES):
                    s = rng.randrange(n)
                    picks = rows[s]
                    u = rng.randrange(n)
                    if not (picks >> u) & 1:
                        continue
                    yield s, u, rng.randrange(n)
            triples = sampled()
        for s, u, x in triples:
            if not (rows[t[x][s]] >> t[x][u]) & 1:
                raise ValueError("preorder unstable on the left")
            if not (rows[t[s][x]] >> t[u][x]) & 1:
                raise ValueError("preorder unstable on the right")

    def equivalence_classes(self):
        n = self.carrier.size
        cls = [-1] * n
        count = 0
        for s in range(n):
            if cls[s] >= 0:
                continue
            cls[s] = count
            for t in mask_iter(self.rows[s]):
                if (self.rows[t] >> s) & 1:
                    cls[t] = count
            count += 1
        return cls, count


def equality_preorder(m):
    return StablePreorder(m, tuple(1 << s for s in range(m.size)), validate=False)


def quotient(pre):
    """Quotient of the carrier by a stable preorder: reduced ordered monoid
    plus the projection (element -> class index)."""
    pre.validate()
    m = pre.carrier
    cls, count = pre.equivalence_classes()
    reps = [None] * count
    for s in range(m.size):
        if reps[cls[s]] is None:
            reps[cls[s]] = s
    table = [[cls[m.mult(reps[a], reps[b])] for b in range(count)] for a in range(count)]
    # well-definedness spot check (guaranteed by stability)
    for s in range(m.size):
        for t in range(m.size):
            if cls[m.mult(s, t)] != table[cls[s]][cls[t]]:
                raise ValueError("relation is not a congruence")
    order = [0] * count
    for a in range(count):
        for b in range(count):
            if pre.below(reps[a], reps[b]):
                order[a] |= 1 << b
    names = None
    if m.names is not None:
        names = []
        for a in range(count):
            best = min((m.names[s] for s in range(m.size) if cls[s] == a),
                       key=lambda w: (len(w), w))
            names.append(best)
    q = FiniteMonoid(table, cls[m.identity], names=names, order=tuple(order), check=False)
    return q, tuple(cls)


def quotient_by_partition(m, cls):
    """Quotient by a congruence given as element -> class id (unordered)."""
    count = max(cls) + 1
    rows = [0] * m.size
    for s in range(m.size):
        for t in range(m.size):
            if cls[s] == cls[t]:
                rows[s] |= 1 << t
    q, proj = quotient(StablePreorder(m, rows, validate=False))
    return FiniteMonoid(q.table, q.identity, names=q.names, check=False), proj


def direct_product(m, n):
    sm, sn = m.size, n.size

    def idx(a, b):
        return a * sn + b

    table = [[0] * (sm * sn) for _ in range(sm * sn)]
    for a in range(sm):
        for b in range(sn):
            for c in range(sm):
                for d in range(sn):
                    table[idx(a, b)][idx(c, d)] = idx(m.mult(a, c), n.mult(b, d))
    names = None
    if m.names is not None and n.names is not None:
        names = ["(%s,%s)" % (m.names[a], n.names[b])
                 for a in range(sm) for b in range(sn)]
    order = None
    if m.order is not None and n.order is not None:
        order = [0] * (sm * sn)
        for a in range(sm):
            for b in range(sn):
                for c in mask_iter(m.order[a]):
                    for d in mask_iter(n.order[b]):
                        order[idx(a, b)] |= 1 << idx(c, d)
    return FiniteMonoid(table, idx(m.identity, n.identity), names=names,
                        order=order, check=False)


# -- generated submonoids --------------------------------------------------------


@dataclass
class Submonoid:
    """Closure of a generator set inside some ambient product structure."""
    elements: list
    index: dict
    words: list
    monoid: FiniteMonoid | None

    def __len__(self):
        return len(self.elements)


def generate_submonoid(identity, generators, mult, cap=SUBMONOID_CAP, build_table=True):
    """BFS closure under right multiplication by the generators.

    `generators` is a list of (value, letter_label); numbering is discovery
    order, which makes element words shortlex-minimal representatives.
    """
    elements = [identity]
    index = {identity: 0}
    words = [""]
    queue = [0]
    gen_list = []
    for value, label in generators:
        if value not in index:
            index[value] = len(elements)
            elements.append(value)
            words.append(label)
            queue.append(index[value])
        gen_list.append((index[value], label))
    head = 0
    while head < len(queue):
        cur = queue[head]
        head += 1
        for gi, label in gen_list:
            val = mult(elements[cur], elements[gi])
            if val not in index:
                if len(elements) >= cap:
                    raise ResourceCapError(
                        "submonoid closure exceeded %d elements" % cap)
                index[val] = len(elements)
                elements.append(val)
                words.append(words[cur] + label)
                queue.append(index[val])
    monoid = None
    if build_table:
        n = len(elements)
        table = [[index[mult(elements[a], elements[b])] for b in range(n)]
                 for a in range(n)]
        names = [w if w else "1" for w in words]
        monoid = FiniteMonoid(table, 0, names=names, check=False)
    return Submonoid(elements, index, words, monoid)


# -- morphisms and content -------------------------------------------------------


class MonoidMorphism:
    """Morphism from a free monoid over `alphabet` into a table monoid."""

    def __init__(self, alphabet, target, images):
        self.alphabet = "".join(sorted(alphabet))
        self.target = target
        self.images = dict(images)
        for a in self.alphabet:
            if a not in self.images:
                raise ValueError("no image for letter %r" % a)

    def __call__(self, word):
        out = self.target.identity
        for a in word:
            out = self.target.mult(out, self.images[a])
        return out

    @property
    def is_surjective(self):
        sub = generate_submonoid(
            self.target.identity,
            [(self.images[a], a) for a in self.alphabet],
            self.target.mult, build_table=False)
        return len(sub) == self.target.size

    # right-action protocol shared with ranker monoids, for graph building
    def identity_key(self):
        return self.target.identity

    def step(self, key, letter):
        return self.target.mult(key, self.images[letter])

    def key_leq(self, k1, k2):
        return self.target.leq(k1, k2)


@dataclass
class ContentStructure:
    """Monoid together with a content morphism into the subsets of `alphabet`.

    contents[s] is a bitmask over alphabet positions.
    """
    monoid: FiniteMonoid
    alphabet: str
    contents: tuple

    def content(self, s):
        return self.contents[s]

    def set_content(self, mask):
        out = 0
        for s in mask_iter(mask):
            out |= self.contents[s]
        return out

    def content_letters(self, cmask):
        return "".join(self.alphabet[i] for i in mask_iter(cmask))

    def validate(self, morphism=None):
        m = self.monoid
        for s in range(m.size):
            for t in range(m.size):
                if self.contents[m.mult(s, t)] != self.contents[s] | self.contents[t]:
                    raise ValueError("content is not a morphism into J_A")
        if morphism is not None:
            for i, a in enumerate(self.alphabet):
                if self.contents[morphism.images[a]] != 1 << i:
                    raise ValueError("content(mu(%s)) != {%s}" % (a, a))


def j_monoid(alphabet):
    """J_A: subsets of the alphabet under union, ordered by inclusion."""
    alphabet = "".join(sorted(alphabet))
    k = len(alphabet)
    n = 1 << k
    table = [[a | b for b in range(n)] for a in range(n)]
    names = ["1" if s == 0 else "".join(alphabet[i] for i in range(k) if (s >> i) & 1)
             for s in range(n)]
    order = [0] * n
    for a in range(n):
        for b in range(n):
            if a & ~b == 0:
                order[a] |= 1 << b
    m = FiniteMonoid(table, 0, names=names, order=tuple(order), check=False)
    structure = ContentStructure(m, alphabet, tuple(range(n)))
    morphism = MonoidMorphism(alphabet, m, {a: 1 << i for i, a in enumerate(alphabet)})
    return m, structure, morphism


def alphabetize(morphism):
    """Submonoid of M x J_A generated by (mu(a), {a}): a content structure for M
    plus the surjection pi back onto M and the lifted letter morphism."""
    if not morphism.is_surjective:
        raise ValueError("alphabetization needs a surjective morphism")
    alphabet = morphism.alphabet
    m = morphism.target

    def mult(p, q):
        return (m.mult(p[0], q[0]), p[1] | q[1])

    gens = [((morphism.images[a], 1 << i), a) for i, a in enumerate(alphabet)]
    sub = generate_submonoid((m.identity, 0), gens, mult)
    prime = sub.monoid
    contents = tuple(val[1] for val in sub.elements)
    pi = tuple(val[0] for val in sub.elements)
    structure = ContentStructure(prime, alphabet, contents)
    lifted = MonoidMorphism(alphabet, prime,
                            {a: sub.index[(morphism.images[a], 1 << i)]
                             for i, a in enumerate(alphabet)})
    return structure, pi, lifted


# -- relational-morphism graphs ---------------------------------------------------


class RelationalMorphismGraph:
    """Graph of tau = nu o mu^-1: the submonoid of M x N generated by the
    letter image pairs. N is addressed through the right-action protocol
    (identity_key/step), so table monoids and ranker monoids both fit."""

    def __init__(self, mu, nu, cap=SUBMONOID_CAP):
        if mu.alphabet != nu.alphabet:
            raise ValueError("mu and nu must share an alphabet")
        self.left = mu.target
        self.mu = mu
        self.nu = nu
        pairs = set()
        queue = [(mu.target.identity, nu.identity_key())]
        pairs.add(queue[0])
        head = 0
        while head < len(queue):
            cur_m, cur_n = queue[head]
            head += 1
            for a in mu.alphabet:
                nxt = (mu.target.mult(cur_m, mu.images[a]), nu.step(cur_n, a))
                if nxt not in pairs:
                    if len(pairs) >= cap:
                        raise ResourceCapError("relational graph exceeded %d pairs" % cap)
                    pairs.add(nxt)
                    queue.append(nxt)
        self.pairs = pairs
        keys = sorted({k for _, k in pairs}, key=repr)
        self.key_index = {k: i for i, k in enumerate(keys)}
        self.keys = keys
        self.tau_masks = [0] * self.left.size
        for s, k in pairs:
            self.tau_masks[s] |= 1 << self.key_index[k]
        if any(t == 0 for t in self.tau_masks):
            raise ValueError("projection to M is not surjective")

    def tau_image(self, s):
        return [self.keys[i] for i in mask_iter(self.tau_masks[s])]

    def pointlike_witnesses(self, set_mask):
        """Mask of key indices witnessing that the subset is tau-pointlike."""
        out = ~0
        for s in mask_iter(set_mask):
            out &= self.tau_masks[s]
            if not out:
                return 0
        return out & ((1 << len(self.keys)) - 1)

    def is_pointlike(self, set_mask):
        return self.pointlike_witnesses(set_mask) != 0

    def is_conelike(self, s, set_mask):
        """True if some x in tau(s) has the whole set inside tau^-1(up x).

        If x <= x' then up x' is contained in up x, so only <=-minimal
        elements of tau(s) can witness; for large tau(s) we fall back to
        testing all candidates in ascending rank order.
        """
        leq = self.nu.key_leq
        rank = getattr(self.nu, "key_rank", lambda k: 0)
        candidates = sorted((self.keys[i] for i in mask_iter(self.tau_masks[s])),
                            key=rank)
        if len(candidates) <= 64:
            candidates = [x for x in candidates
                          if not any(y is not x and leq(y, x) and not leq(x, y)
                                     for y in candidates)]
        targets = [self.tau_image(t) for t in mask_iter(set_mask)]
        for x in candidates:
            if all(any(leq(x, y) for y in ys) for ys in targets):
                return True
        return False


# -- Ramsey bounds and factorizations ---------------------------------------------


def ramsey_bound(k, cap=RAMSEY_ARG_CAP):
    """Upper bound floor(k! e) + 1 on the triangle Ramsey number for k colors.

    Exact for k <= 3 (3, 6, 17). Computed as sum_{i<=k} k!/i! + 1.
    """
    if k < 1:
        raise ValueError("need at least one color")
    if k > cap:
        raise ResourceCapError(
            "Ramsey bound for %d colors exceeds the configured cap %d; "
            "reduce the instance size" % (k, cap))
    total = 0
    term = 1  # k!/k!
    for i in range(k, 0, -1):
        total += term
        term *= i
    total += term  # i = 0
    return total + 1


def r_factorization(word, morphism):
    """Blocks and cut letters of the R-factorization: cuts exactly where the
    image of the growing prefix strictly descends in <=_R."""
    m = morphism.target
    blocks = [""]
    cuts = []
    prefix = m.identity
    for a in word:
        nxt = m.mult(prefix, morphism.images[a])
        if m.leq_r(prefix, nxt) and m.leq_r(nxt, prefix):
            blocks[-1] += a
        else:
            cuts.append(a)
            blocks.append("")
        prefix = nxt
    return blocks, cuts


def l_factorization(word, morphism):
    """Dual of r_factorization, via the reversed word and opposite monoid."""
    opp = morphism.target.opposite()
    rev = MonoidMorphism(morphism.alphabet, opp, morphism.images)
    blocks, cuts = r_factorization(word[::-1], rev)
    return [b[::-1] for b in reversed(blocks)], list(reversed(cuts))


def find_subidempotent_factor(monoid, blocks):
    """First (i, j), inclusive 0-based, with product(blocks[i..j]) subidempotent.

    Guaranteed to exist once len(blocks) >= ramsey_bound(#colors) - 1."""
    n = len(blocks)
    for i in range(n):
        prod = blocks[i]
        for j in range(i, n):
            if j > i:
                prod = monoid.set_mult(prod, blocks[j])
            if monoid.is_subidempotent_set(prod):
                return i, j
    raise ValueError("no subidempotent factor found; "
                     "the Ramsey precondition does not hold")
