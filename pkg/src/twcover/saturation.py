"""The computable closed families: Sat_J1, the corner saturations Sat_{R_m} and
Sat_{L_m}, RL_m-factors, Sat_J, the join families and the cone families pSat.

Families are kept as inclusion-antichains of element bitmasks; subsets of
members and all singletons are denoted implicitly.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .monoid import ResourceCapError, mask_iter

MEMBER_CAP = 50_000


def antichain_insert(members, mask):
    """Add a set unless dominated; drops members it dominates. True if added."""
    if mask == 0:
        return False
    for m in members:
        if mask & ~m == 0:
            return False
    members[:] = [m for m in members if m & ~mask != 0]
    members.append(mask)
    return True


def dominated(mask, members):
    return any(mask & ~m == 0 for m in members)


@dataclass(frozen=True)
class SubsetFamily:
    structure: object  # ContentStructure
    members: tuple

    def denotes(self, mask):
        return mask != 0 and dominated(mask, self.members)

    def member_lines(self):
        m = self.structure.monoid
        return sorted(m.set_name(x) for x in self.members)


@dataclass(frozen=True)
class ConeFamily:
    structure: object
    entries: dict  # element -> tuple of masks (antichain)

    def denotes(self, s, mask):
        return dominated(mask, self.entries.get(s, ()))

    def entry_lines(self):
        m = self.structure.monoid
        out = []
        for s in sorted(self.entries, key=lambda s: (len(m.name(s)), m.name(s))):
            for mask in self.entries[s]:
                out.append("%s : %s" % (m.name(s), m.set_name(mask)))
        return out


class Saturations:
    """All saturation families over one content structure, memoized."""

    def __init__(self, structure, schedule="fifo"):
        self.structure = structure
        self.monoid = structure.monoid
        self.schedule = schedule
        self._memo = {}
        self._below = {}

    def elements_with_content_below(self, cmask):
        got = self._below.get(cmask)
        if got is None:
            got = 0
            for s in range(self.monoid.size):
                if self.structure.contents[s] & ~cmask == 0:
                    got |= 1 << s
            self._below[cmask] = got
        return got

    def _close_sets(self, seeds, rule=None):
        """Least family containing singletons and seeds, closed under products
        and under `rule` (new member -> extra masks)."""
        m = self.monoid
        members = []
        pending = deque()
        for s in range(m.size):
            pending.append(1 << s)
        for mask in seeds:
            pending.append(mask)
        while pending:
            mask = pending.popleft() if self.schedule == "fifo" else pending.pop()
            if not antichain_insert(members, mask):
                continue
            if len(members) > MEMBER_CAP:
                raise ResourceCapError("saturation family exceeded %d members"
                                       % MEMBER_CAP)
            for other in list(members):
                pending.append(m.set_mult(mask, other))
                pending.append(m.set_mult(other, mask))
            if rule is not None:
                pending.extend(rule(mask))
        return tuple(sorted(members))

    # -- the families ---------------------------------------------------------

    def j1(self):
        if "j1" not in self._memo:
            fibers = {}
            for s, c in enumerate(self.structure.contents):
                fibers[c] = fibers.get(c, 0) | (1 << s)
            self._memo["j1"] = SubsetFamily(self.structure,
                                            tuple(sorted(fibers.values())))
        return self._memo["j1"]

    def corner(self, side, m):
        """Sat_{R_m} (side 'R') resp. Sat_{L_m} (side 'L')."""
        if side not in ("R", "L") or m < 1:
            raise ValueError("side must be R or L with m >= 1")
        key = ("corner", side, m)
        if key in self._memo:
            return self._memo[key]
        if m == 1:
            out = self.j1()
        else:
            other = self.corner("L" if side == "R" else "R", m - 1)
            zs = [(z, self.structure.set_content(z)) for z in other.members]
            mon = self.monoid

            def rule(new):
                e = mon.set_power_idempotent(new)
                ce = self.structure.set_content(e)
                for z, cz in zs:
                    if cz & ~ce == 0:
                        yield mon.set_mult(e, z) if side == "R" \
                            else mon.set_mult(z, e)

            out = SubsetFamily(self.structure, self._close_sets([], rule))
        self._memo[key] = out
        return out

    def rl_factors(self, m):
        """Antichain of RL_m-factor product sets S E W F T; the m = 1 case is
        computed with the level-2 corner families (see the decisions notes)."""
        key = ("rl", m)
        if key in self._memo:
            return self._memo[key]
        mm = max(m, 2)
        mon = self.monoid
        r_members = self.corner("R", mm).members
        l_members = self.corner("L", mm).members
        es = {}
        for u in r_members:
            e = mon.set_power_idempotent(u)
            es[e] = self.structure.set_content(e)
        fs = {}
        for v in l_members:
            f = mon.set_power_idempotent(v)
            fs[f] = self.structure.set_content(f)
        out = []
        for e, ce in es.items():
            w = self.elements_with_content_below(ce)
            for f, cf in fs.items():
                if cf != ce:
                    continue
                core = mon.set_mult(mon.set_mult(e, w), f)
                lefts = [s for s in r_members
                         if self.structure.set_content(s) & ~ce == 0]
                rights = [t for t in l_members
                          if self.structure.set_content(t) & ~ce == 0]
                for s in lefts:
                    part = mon.set_mult(s, core)
                    for t in rights:
                        antichain_insert(out, mon.set_mult(part, t))
        self._memo[key] = tuple(sorted(out))
        return self._memo[key]

    def j(self):
        """Sat_J: closure under X E Y for idempotent constant-content E and
        content-dominated X, Y (maximal X = Y = everything below)."""
        if "j" in self._memo:
            return self._memo["j"]
        mon = self.monoid

        def rule(new):
            e = mon.set_power_idempotent(new)
            contents = {self.structure.contents[s] for s in mask_iter(e)}
            if len(contents) != 1:
                return
            w = self.elements_with_content_below(contents.pop())
            yield mon.set_mult(mon.set_mult(w, e), w)

        out = SubsetFamily(self.structure, self._close_sets([], rule))
        self._memo["j"] = out
        return out

    def _chain_products(self, factors, lowers):
        """Reachable products of chains U_1 V_1 U_2 ... V_{n-1} U_n.

        factors: RL-factor product sets; lowers: the antichain the V_i come
        from, or None for the base case V_i in 2^M. Every element of V_i must
        have content below both neighbouring factors.
        """
        mon = self.monoid
        fac = [(u, self.structure.set_content(u)) for u in factors]
        states = {}
        pending = deque()

        def push(p, lastc):
            bucket = states.setdefault(lastc, [])
            if antichain_insert(bucket, p):
                pending.append((p, lastc))

        for u, cu in fac:
            push(u, cu)
        reached = []
        while pending:
            p, lastc = pending.popleft()
            reached.append(p)
            for u2, cu2 in fac:
                combined = lastc & cu2
                allowed = self.elements_with_content_below(combined)
                if lowers is None:
                    vs = [allowed]
                else:
                    vs = [v & allowed for v in lowers]
                for v in vs:
                    if v == 0:
                        continue
                    push(mon.set_mult(mon.set_mult(p, v), u2), cu2)
        return reached

    def join(self, kind, m):
        """Sat_{FO}/Sat_{SP} at level m >= 2: closure of alternating chains of
        RL_m-factors with lower-level families between."""
        if kind not in ("FO", "SP") or m < 2:
            raise ValueError("join families need kind FO or SP and m >= 2")
        key = ("join", kind, m)
        if key in self._memo:
            return self._memo[key]
        factors = self.rl_factors(m)
        if m == 2:
            lowers = self.j().members if kind == "FO" else None
        else:
            lowers = self.join(kind, m - 1).members
        chains = self._chain_products(factors, lowers)
        out = SubsetFamily(self.structure, self._close_sets(chains))
        self._memo[key] = out
        return out

    # -- cone families ----------------------------------------------------------

    def _close_pairs(self, seeds):
        mon = self.monoid
        entries = {}
        pending = deque()
        for s in range(mon.size):
            pending.append((s, 1 << s))
        pending.extend(seeds)
        total = 0
        while pending:
            s, mask = pending.popleft() if self.schedule == "fifo" else pending.pop()
            bucket = entries.setdefault(s, [])
            if mask == 0 or not antichain_insert(bucket, mask):
                continue
            total += 1
            if total > MEMBER_CAP:
                raise ResourceCapError("cone family exceeded %d entries"
                                       % MEMBER_CAP)
            for t, masks in list(entries.items()):
                for other in list(masks):
                    pending.append((mon.mult(s, t), mon.set_mult(mask, other)))
                    pending.append((mon.mult(t, s), mon.set_mult(other, mask)))
        return {s: tuple(sorted(masks)) for s, masks in entries.items()}

    def psat(self, kind, m):
        """pSat_{Si_m} / pSat_{Pi_m} as a cone family."""
        if kind not in ("Si", "Pi") or m < 1:
            raise ValueError("cone families need kind Si or Pi and m >= 1")
        key = ("psat", kind, m)
        if key in self._memo:
            return self._memo[key]
        mon = self.monoid
        if m == 1:
            full = (1 << mon.size) - 1
            if kind == "Si":
                seeds = [(mon.identity, full)]
            else:
                seeds = [(s, (1 << mon.identity) | (1 << s))
                         for s in range(mon.size)]
            out = ConeFamily(self.structure, self._close_pairs(seeds))
        else:
            factors = [(u, self.structure.set_content(u))
                       for u in self.rl_factors(m)]
            lower = self.psat(kind, m - 1)
            lower_entries = [(v, mask) for v, masks in lower.entries.items()
                             for mask in masks]
            states = {}
            pending = deque()

            def push(p, pmask, lastc):
                bucket = states.setdefault((p, lastc), [])
                if antichain_insert(bucket, pmask):
                    pending.append((p, pmask, lastc))

            for u, cu in factors:
                for p in mask_iter(u):
                    push(p, u, cu)
            reached = []
            while pending:
                p, pmask, lastc = pending.popleft()
                reached.append((p, pmask))
                for u2, cu2 in factors:
                    combined = lastc & cu2
                    allowed = self.elements_with_content_below(combined)
                    for v, vmask in lower_entries:
                        if not (allowed >> v) & 1:
                            continue
                        vmask2 = vmask & allowed
                        if vmask2 == 0:
                            continue
                        step = self.monoid.set_mult(
                            self.monoid.set_mult(pmask, vmask2), u2)
                        for u_elt in mask_iter(u2):
                            mid = mon.mult(mon.mult(p, v), u_elt)
                            push(mid, step, cu2)
            out = ConeFamily(self.structure, self._close_pairs(reached))
        self._memo[key] = out
        return out


def saturations(structure, schedule="fifo"):
    """Shared Saturations instance for a content structure."""
    got = getattr(structure, "_saturations", None)
    if got is None or got.schedule != schedule:
        got = Saturations(structure, schedule=schedule)
        if schedule == "fifo":
            structure._saturations = got
    return got


def close_family(family):
    """Closure of an arbitrary seed family (idempotent on closed input)."""
    if isinstance(family, ConeFamily):
        sats = Saturations(family.structure)
        seeds = [(s, mask) for s, masks in family.entries.items() for mask in masks]
        return ConeFamily(family.structure, sats._close_pairs(seeds))
    sats = Saturations(family.structure)
    return SubsetFamily(family.structure, sats._close_sets(family.members))
