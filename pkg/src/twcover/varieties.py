"""Membership deciders for every level of the two hierarchies, the relations
~K, ~D, ~KD and the stable preorder they induce, and omega-identity checking.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

from .monoid import (FiniteMonoid, StablePreorder, mask_iter, quotient,
                     quotient_by_partition)

MAX_LEVEL_INDEX = 6

_LEVEL_RE = re.compile(r"^(J1|J|DA|RvL(\d+)|RcapL(\d+)|FO2_(\d+)|R(\d+)|L(\d+)|Si(\d+)|Pi(\d+))$")


@dataclass(frozen=True)
class Level:
    tag: str
    m: int | None = None

    @classmethod
    def parse(cls, text):
        got = _LEVEL_RE.match(text)
        if not got:
            raise ValueError("unknown level %r (examples: J1, DA, R2, RvL2, "
                             "RcapL2, FO2_2, Si1, Pi3)" % text)
        head = got.group(1)
        for tag in ("RvL", "RcapL", "FO2_", "R", "L", "Si", "Pi"):
            if head.startswith(tag) and head[len(tag):].isdigit():
                m = int(head[len(tag):])
                if not 1 <= m <= MAX_LEVEL_INDEX:
                    raise ValueError("level index %d outside 1..%d"
                                     % (m, MAX_LEVEL_INDEX))
                return cls(tag.rstrip("_"), m)
        return cls(head)

    def __str__(self):
        if self.m is None:
            return self.tag
        if self.tag == "FO2":
            return "FO2_%d" % self.m
        return "%s%d" % (self.tag, self.m)

    @property
    def ordered_only(self):
        return self.tag in ("Si", "Pi", "RvL")

    @property
    def unordered(self):
        """Full (complement-closed) levels, where conelikes reduce to pointlikes."""
        return self.tag in ("J1", "J", "DA", "R", "L", "RvL", "RcapL", "FO2")


# -- omega-terms --------------------------------------------------------------------

ONE = ("one",)


def var(name):
    return ("var", name)


def prod(*terms):
    out = terms[0]
    for t in terms[1:]:
        out = ("prod", out, t)
    return out


def omega(term):
    return ("omega", term)


def term_vars(term):
    if term[0] == "var":
        return {term[1]}
    if term[0] == "prod":
        return term_vars(term[1]) | term_vars(term[2])
    if term[0] == "omega":
        return term_vars(term[1])
    return set()


def eval_term(term, monoid, assignment):
    if term[0] == "one":
        return monoid.identity
    if term[0] == "var":
        return assignment[term[1]]
    if term[0] == "prod":
        return monoid.mult(eval_term(term[1], monoid, assignment),
                           eval_term(term[2], monoid, assignment))
    return monoid.element_omega(eval_term(term[1], monoid, assignment))


def check_identity(monoid, lhs, rhs, relation="="):
    """Whether the monoid satisfies the omega-identity under every
    interpretation of its variables."""
    if relation not in ("=", "<="):
        raise ValueError("relation must be '=' or '<='")
    if relation == "<=" and monoid.order is None:
        raise ValueError("ordered identity on an unordered monoid")
    names = sorted(term_vars(lhs) | term_vars(rhs))
    for values in itertools.product(range(monoid.size), repeat=len(names)):
        assignment = dict(zip(names, values))
        a = eval_term(lhs, monoid, assignment)
        b = eval_term(rhs, monoid, assignment)
        if relation == "=":
            if a != b:
                return False
        elif not monoid.leq(a, b):
            return False
    return True


_X, _Z, _Y = var("x"), var("z"), var("y")
DA_IDENTITY = (omega(prod(_X, _Z, _Y)),
               prod(omega(prod(_X, _Z, _Y)), _Z, omega(prod(_X, _Z, _Y))))


# -- the K and D relations -----------------------------------------------------------


def k_congruence(monoid):
    """s ~K t iff for every idempotent e, either both es, et drop strictly
    J-below e or es = et. Returns element -> class id."""
    return _side_congruence(monoid, left=True)


def d_congruence(monoid):
    return _side_congruence(monoid, left=False)


def _side_congruence(monoid, left):
    n = monoid.size
    idems = list(mask_iter(monoid.idempotent_mask))

    def related(s, t):
        for e in idems:
            es = monoid.mult(e, s) if left else monoid.mult(s, e)
            et = monoid.mult(e, t) if left else monoid.mult(t, e)
            if es == et:
                continue
            if not (monoid.lt_j(es, e) and monoid.lt_j(et, e)):
                return False
        return True

    cls = [-1] * n
    count = 0
    for s in range(n):
        if cls[s] >= 0:
            continue
        cls[s] = count
        for t in range(s + 1, n):
            if cls[t] < 0 and related(s, t):
                cls[t] = count
        count += 1
    _assert_congruence(monoid, cls)
    return cls


def kd_join_congruence(monoid):
    """Smallest equivalence containing ~K and ~D."""
    parent = list(range(monoid.size))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for cls in (k_congruence(monoid), d_congruence(monoid)):
        first = {}
        for s, c in enumerate(cls):
            if c in first:
                parent[find(s)] = find(first[c])
            else:
                first[c] = s
    roots = {}
    out = []
    for s in range(monoid.size):
        out.append(roots.setdefault(find(s), len(roots)))
    _assert_congruence(monoid, out)
    return out


def _assert_congruence(monoid, cls):
    n = monoid.size
    if n <= StablePreorder.STABILITY_EXHAUSTIVE_LIMIT:
        pairs = ((s, t) for s in range(n) for t in range(s + 1, n)
                 if cls[s] == cls[t])
        checks = ((s, t, x) for s, t in pairs for x in range(n))
    else:
        import random as _random
        rng = _random.Random(2)
        by_class = {}
        for s, c in enumerate(cls):
            by_class.setdefault(c, []).append(s)
        multi = [v for v in by_class.values() if len(v) > 1]

        def sampled():
            if not multi:
                return
            for _ in range(10**5):
                group = rng.choice(multi)
                yield rng.choice(group), rng.choice(group), rng.randrange(n)
        checks = sampled()
    for s, t, x in checks:
        if cls[monoid.mult(x, s)] != cls[monoid.mult(x, t)] or \
                cls[monoid.mult(s, x)] != cls[monoid.mult(t, x)]:
            raise ValueError("relation is not a congruence")


def kd_preorder(monoid):
    """The stable preorder below-KD on an ordered monoid:
    s below t iff (i) x R xty => x R xsy, (ii) xty L y => xsy L y,
    (iii) x R xt and ty L y => xsy <= xty, quantified over all x, y."""
    if monoid.order is None:
        raise ValueError("the KD-preorder needs an ordered monoid")
    n = monoid.size
    t = monoid.table
    # G[z] = {x : x R xz},  C[z] = {y : zy L y}
    G = [0] * n
    C = [0] * n
    for z in range(n):
        for x in range(n):
            if monoid.leq_r(x, t[x][z]):  # x R xz (xz <=_R x always)
                G[z] |= 1 << x
        for y in range(n):
            if monoid.leq_l(y, t[z][y]):
                C[z] |= 1 << y
    row_leq_cache = {}

    def row_leq(u, v):
        got = row_leq_cache.get((u, v))
        if got is None:
            got = 0
            ru, rv = t[u], t[v]
            for y in range(n):
                if monoid.leq(ru[y], rv[y]):
                    got |= 1 << y
            row_leq_cache[(u, v)] = got
        return got

    rows = [0] * n
    for s in range(n):
        for tt in range(n):
            ok = True
            for y in range(n):
                if G[t[tt][y]] & ~G[t[s][y]]:
                    ok = False
                    break
            if ok:
                for x in range(n):
                    if C[t[x][tt]] & ~C[t[x][s]]:
                        ok = False
                        break
            if ok:
                ct = C[tt]
                for x in mask_iter(G[tt]):
                    if ct & ~row_leq(t[x][s], t[x][tt]):
                        ok = False
                        break
            if ok:
                rows[s] |= 1 << tt
    return StablePreorder(monoid, rows)


# -- membership ----------------------------------------------------------------------

_memo = {}


def _subject_monoid(subject):
    if isinstance(subject, FiniteMonoid):
        return subject
    return subject.monoid  # RecognizedLanguage


def is_in(level, subject):
    """Decide membership of a monoid or recognized language in the level."""
    if isinstance(level, str):
        level = Level.parse(level)
    monoid = _subject_monoid(subject)
    key = (str(level), monoid.key())
    if key in _memo:
        return _memo[key]
    out = _decide(level, monoid)
    _memo[key] = out
    return out


def _require_order(level, monoid):
    if monoid.order is None:
        raise ValueError("level %s needs an ordered monoid (use a syntactic "
                         "ordered monoid)" % level)


def _decide(level, monoid):
    tag, m = level.tag, level.m
    if tag == "J1":
        return monoid.is_idempotent_commutative()
    if tag == "J":
        return monoid.is_j_trivial()
    if tag == "DA":
        return check_identity(monoid, *DA_IDENTITY)
    if tag == "R":
        if m == 1:
            return monoid.is_idempotent_commutative()
        q, _ = quotient_by_partition(monoid, k_congruence(monoid))
        return is_in(Level("L", m - 1), q)
    if tag == "L":
        if m == 1:
            return monoid.is_idempotent_commutative()
        q, _ = quotient_by_partition(monoid, d_congruence(monoid))
        return is_in(Level("R", m - 1), q)
    if tag == "RcapL":
        return is_in(Level("R", m), monoid) and is_in(Level("L", m), monoid)
    if tag == "FO2":
        return (is_in(Level("R", m + 1), monoid)
                and is_in(Level("L", m + 1), monoid))
    if tag == "RvL":
        _require_order(level, monoid)
        if m == 1:
            # Si_1 cap Pi_1 would force a trivial monoid; R_1 v L_1 is J_1
            return monoid.is_idempotent_commutative()
        return is_in(Level("Si", m), monoid) and is_in(Level("Pi", m), monoid)
    if tag == "Si":
        _require_order(level, monoid)
        if m == 1:
            e = monoid.identity
            return all(monoid.leq(e, z) for z in range(monoid.size))
        q, _ = quotient(kd_preorder(monoid))
        return is_in(Level("Si", m - 1), q)
    if tag == "Pi":
        _require_order(level, monoid)
        return is_in(Level("Si", m), monoid.order_reversed())
    raise ValueError("unknown level tag %r" % tag)
