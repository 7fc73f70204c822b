"""Regular expressions, minimal DFAs and syntactic ordered monoids.

Regexes compile to complete DFAs through Brzozowski derivatives, which
handle complement (~) and intersection (&) without a detour through NFAs.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .monoid import (FiniteMonoid, MonoidMorphism, StablePreorder,
                     generate_submonoid, mask_iter)


class RegexSyntaxError(ValueError):
    def __init__(self, message, position):
        super().__init__("%s at offset %d" % (message, position))
        self.position = position


# -- regex AST with ACI-normalizing constructors -----------------------------------

EMPTY = ("empty",)
EPS = ("eps",)


def lit(a):
    return ("lit", a)


def cat(r, s):
    if r == EMPTY or s == EMPTY:
        return EMPTY
    if r == EPS:
        return s
    if s == EPS:
        return r
    left = r[1] if r[0] == "cat" else (r,)
    right = s[1] if s[0] == "cat" else (s,)
    return ("cat", left + right)


def alt(*parts):
    flat = set()
    for p in parts:
        if p[0] == "alt":
            flat |= set(p[1])
        elif p != EMPTY:
            flat.add(p)
    if not flat:
        return EMPTY
    if len(flat) == 1:
        return next(iter(flat))
    return ("alt", tuple(sorted(flat)))


def conj(*parts):
    flat = set()
    for p in parts:
        if p[0] == "and":
            flat |= set(p[1])
        elif p == EMPTY:
            return EMPTY
        else:
            flat.add(p)
    if len(flat) == 1:
        return next(iter(flat))
    return ("and", tuple(sorted(flat)))


def star(r):
    if r[0] == "star" or r == EPS:
        return r if r[0] == "star" else EPS
    if r == EMPTY:
        return EPS
    return ("star", r)


def neg(r):
    if r[0] == "not":
        return r[1]
    return ("not", r)


def regex_literals(r):
    kind = r[0]
    if kind == "lit":
        return {r[1]}
    if kind in ("alt", "and"):
        return set().union(*(regex_literals(p) for p in r[1]))
    if kind == "cat":
        return set().union(*(regex_literals(p) for p in r[1]))
    if kind in ("star", "not"):
        return regex_literals(r[1])
    return set()


def nullable(r):
    kind = r[0]
    if kind == "eps" or kind == "star":
        return True
    if kind == "empty" or kind == "lit":
        return False
    if kind == "cat":
        return all(nullable(p) for p in r[1])
    if kind == "alt":
        return any(nullable(p) for p in r[1])
    if kind == "and":
        return all(nullable(p) for p in r[1])
    return not nullable(r[1])  # not


def derivative(r, a):
    kind = r[0]
    if kind in ("empty", "eps"):
        return EMPTY
    if kind == "lit":
        return EPS if r[1] == a else EMPTY
    if kind == "cat":
        parts = r[1]
        head, tail = parts[0], parts[1:]
        rest = tail[0] if len(tail) == 1 else ("cat", tail)
        first = cat(derivative(head, a), rest)
        if nullable(head):
            return alt(first, derivative(rest, a))
        return first
    if kind == "alt":
        return alt(*(derivative(p, a) for p in r[1]))
    if kind == "and":
        return conj(*(derivative(p, a) for p in r[1]))
    if kind == "star":
        return cat(derivative(r[1], a), r)
    return neg(derivative(r[1], a))  # not


# -- parser -------------------------------------------------------------------------

# precedence: postfix * + ?  >  ~  >  concatenation  >  &  >  |


class _Parser:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def peek(self):
        return self.text[self.pos] if self.pos < len(self.text) else None

    def error(self, message):
        raise RegexSyntaxError(message, self.pos)

    def parse(self):
        r = self.union()
        if self.peek() is not None:
            self.error("unexpected %r" % self.peek())
        return r

    def union(self):
        parts = [self.intersection()]
        while self.peek() == "|":
            self.pos += 1
            parts.append(self.intersection())
        return alt(*parts)

    def intersection(self):
        parts = [self.concat()]
        while self.peek() == "&":
            self.pos += 1
            parts.append(self.concat())
        return conj(*parts)

    def concat(self):
        out = None
        while True:
            c = self.peek()
            if c is None or c in "|&)":
                break
            piece = self.complement()
            out = piece if out is None else cat(out, piece)
        if out is None:
            self.error("expected an expression")
        return out

    def complement(self):
        if self.peek() == "~":
            self.pos += 1
            return neg(self.complement())
        return self.postfix()

    def postfix(self):
        r = self.atom()
        while self.peek() in ("*", "+", "?"):
            op = self.peek()
            self.pos += 1
            if op == "*":
                r = star(r)
            elif op == "+":
                r = cat(r, star(r))
            else:
                r = alt(r, EPS)
        return r

    def atom(self):
        c = self.peek()
        if c is None:
            self.error("unexpected end of input")
        if c == "(":
            self.pos += 1
            r = self.union()
            if self.peek() != ")":
                self.error("expected ')'")
            self.pos += 1
            return r
        if c == "1":
            self.pos += 1
            return EPS
        if c == "0":
            self.pos += 1
            return EMPTY
        if c.isalpha() and c.islower():
            self.pos += 1
            return lit(c)
        self.error("unexpected %r" % c)


def parse_regex(text):
    """Parse the regex grammar (letters a-z, 1 for the empty word, 0 for the
    empty language, | & ~ * + ? and parentheses)."""
    return _Parser(text).parse()


# -- DFAs ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Dfa:
    """Complete deterministic automaton; transitions[s][i] follows the i-th
    alphabet letter."""
    alphabet: str
    transitions: tuple
    initial: int
    accepting: frozenset
    minimal: bool = False

    @property
    def size(self):
        return len(self.transitions)

    def step(self, state, letter):
        return self.transitions[state][self.alphabet.index(letter)]

    def accepts(self, word):
        s = self.initial
        for a in word:
            s = self.step(s, a)
        return s in self.accepting

    def complement(self):
        return Dfa(self.alphabet, self.transitions, self.initial,
                   frozenset(range(self.size)) - self.accepting, self.minimal)

    def minimize(self):
        """Moore refinement plus canonical BFS renumbering."""
        n = self.size
        reachable = [self.initial]
        seen = {self.initial}
        for s in reachable:
            for t in self.transitions[s]:
                if t not in seen:
                    seen.add(t)
                    reachable.append(t)
        block = {s: (s in self.accepting) for s in reachable}
        while True:
            sig = {s: (block[s],) + tuple(block[self.transitions[s][i]]
                                          for i in range(len(self.alphabet)))
                   for s in reachable}
            relabel = {}
            new = {}
            for s in reachable:
                new[s] = relabel.setdefault(sig[s], len(relabel))
            if new == block:
                break
            block = new
        # canonical numbering by BFS from the initial block
        succ = {}
        for s in reachable:
            succ[block[s]] = tuple(block[self.transitions[s][i]]
                                   for i in range(len(self.alphabet)))
        order = [block[self.initial]]
        pos = {block[self.initial]: 0}
        for b in order:
            for t in succ[b]:
                if t not in pos:
                    pos[t] = len(order)
                    order.append(t)
        transitions = tuple(tuple(pos[t] for t in succ[b]) for b in order)
        accepting = frozenset(pos[block[s]] for s in reachable
                              if s in self.accepting)
        return Dfa(self.alphabet, transitions, 0, accepting, minimal=True)

    def to_text(self):
        lines = ["%d %d" % (self.size, self.initial),
                 " ".join(map(str, sorted(self.accepting)))]
        lines += [" ".join(map(str, row)) for row in self.transitions]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text, alphabet):
        alphabet = "".join(sorted(alphabet))
        lines = [ln for ln in text.splitlines() if ln.strip()]
        n, initial = map(int, lines[0].split())
        accepting = frozenset(map(int, lines[1].split())) if lines[1].strip() else frozenset()
        rows = [tuple(map(int, ln.split())) for ln in lines[2:2 + n]]
        if len(rows) != n or any(len(r) != len(alphabet) for r in rows):
            raise ValueError("malformed DFA text")
        return cls(alphabet, tuple(rows), initial, accepting)


def compile_min_dfa(regex, alphabet):
    """Minimal complete DFA of the regex over the declared alphabet."""
    alphabet = "".join(sorted(alphabet))
    extra = regex_literals(regex) - set(alphabet)
    if extra:
        raise ValueError("regex uses letters outside the alphabet: %s"
                         % "".join(sorted(extra)))
    states = {regex: 0}
    rows = []
    queue = [regex]
    for r in queue:
        row = []
        for a in alphabet:
            d = derivative(r, a)
            if d not in states:
                states[d] = len(queue)
                queue.append(d)
            row.append(states[d])
        rows.append(tuple(row))
    accepting = frozenset(states[r] for r in queue if nullable(r))
    return Dfa(alphabet, tuple(rows), 0, accepting).minimize()


# -- syntactic monoids ----------------------------------------------------------------


@dataclass
class RecognizedLanguage:
    """Minimal DFA with its syntactic ordered monoid and syntactic morphism."""
    dfa: Dfa
    monoid: FiniteMonoid
    morphism: MonoidMorphism
    accepting_elements: frozenset

    @property
    def alphabet(self):
        return self.dfa.alphabet

    def accepts(self, word):
        return self.dfa.accepts(word)

    def contains_element(self, s):
        return s in self.accepting_elements


def syntactic_ordered_monoid(dfa):
    """Transition monoid of the minimal DFA with the syntactic order
    s <= t iff every accepting context of s also accepts t."""
    if not dfa.minimal:
        dfa = dfa.minimize()
    n = dfa.size
    letters = dfa.alphabet

    def compose(f, g):
        return tuple(g[f[q]] for q in range(n))

    gens = [(tuple(dfa.transitions[q][i] for q in range(n)), letters[i])
            for i in range(len(letters))]
    sub = generate_submonoid(tuple(range(n)), gens, compose)
    monoid = sub.monoid
    size = monoid.size
    accepting = frozenset(i for i, f in enumerate(sub.elements)
                          if f[dfa.initial] in dfa.accepting)
    acc_mask = 0
    for i in accepting:
        acc_mask |= 1 << i
    contexts = [0] * size
    for p in range(size):
        row = monoid.table[p]
        for q in range(size):
            ctx_id = p * size + q
            for s in range(size):
                if (acc_mask >> monoid.table[row[s]][q]) & 1:
                    contexts[s] |= 1 << ctx_id
    order = [0] * size
    for s in range(size):
        for t in range(size):
            if contexts[s] & ~contexts[t] == 0:
                order[s] |= 1 << t
    ordered = monoid.with_order(tuple(order))
    StablePreorder(ordered, ordered.order)  # syntactic order must be stable
    morphism = MonoidMorphism(letters, ordered,
                              {letters[i]: sub.index[gens[i][0]]
                               for i in range(len(letters))})
    return RecognizedLanguage(dfa, ordered, morphism, accepting)


@lru_cache(maxsize=None)
def language(regex_text, alphabet=None):
    """Parse, compile and package a regular language for the deciders."""
    regex = parse_regex(regex_text)
    if alphabet is None:
        alphabet = "".join(sorted(regex_literals(regex)))
    if not alphabet:
        raise ValueError("declare a non-empty alphabet for this regex")
    return syntactic_ordered_monoid(compile_min_dfa(regex, alphabet))


def find_word(dfa, morphism, targets, require_accept=True):
    """Shortest word accepted by the DFA whose image lies in `targets`
    (an iterable of element indices), or None. BFS over state x element."""
    target_set = set(targets)
    m = morphism.target
    start = (dfa.initial, m.identity)
    parents = {start: None}
    queue = [start]
    for node in queue:
        state, elt = node
        if elt in target_set and (not require_accept or state in dfa.accepting):
            out = []
            cur = node
            while parents[cur] is not None:
                cur, a = parents[cur]
                out.append(a)
            return "".join(reversed(out))
        for a in dfa.alphabet:
            nxt = (dfa.step(state, a), m.mult(elt, morphism.images[a]))
            if nxt not in parents:
                parents[nxt] = (node, a)
                queue.append(nxt)
    return None


def intersect_nonempty(dfa, morphism, element):
    """Whether the language meets the morphism's preimage of the element."""
    return find_word(dfa, morphism, [element]) is not None
