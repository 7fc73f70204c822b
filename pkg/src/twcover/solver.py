"""Pointlike/conelike computation per level, brute-force oracles over
relational-morphism graphs, separator construction, and the covering and
separation deciders with replayable certificates.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .monoid import (MonoidMorphism, RelationalMorphismGraph, ResourceCapError,
                     alphabetize, generate_submonoid, j_monoid, mask_iter,
                     ramsey_bound)
from .rankers import RankerMonoid, build_comparison_set, theorem_depth
from .saturation import ConeFamily, SubsetFamily, antichain_insert, dominated, saturations
from .syntactic import RecognizedLanguage, find_word
from .varieties import Level, is_in

POINTLIKE_TAGS = ("J1", "J", "R", "L", "RvL", "RcapL", "FO2")
CONELIKE_TAGS = ("Si", "Pi")


def _as_level(level):
    return Level.parse(level) if isinstance(level, str) else level


def product_morphism(languages):
    """Surjective morphism onto the image submonoid of the product of the
    languages' syntactic monoids."""
    if not languages:
        raise ValueError("need at least one language")
    alphabet = languages[0].alphabet
    if any(lang.alphabet != alphabet for lang in languages):
        raise ValueError("all languages must share one declared alphabet")
    monoids = [lang.monoid for lang in languages]

    def mult(p, q):
        return tuple(m.mult(a, b) for m, a, b in zip(monoids, p, q))

    gens = [(tuple(lang.morphism.images[a] for lang in languages), a)
            for a in alphabet]
    sub = generate_submonoid(tuple(m.identity for m in monoids), gens, mult)
    return MonoidMorphism(alphabet, sub.monoid,
                          {a: sub.index[g] for g, a in gens})


def morphism_of(target):
    if isinstance(target, MonoidMorphism):
        return target
    if isinstance(target, RecognizedLanguage):
        return target.morphism
    return product_morphism(list(target))


# -- families per level ----------------------------------------------------------


def _family_for(level, sats):
    tag, m = level.tag, level.m
    if tag == "J1" or (tag in ("R", "L", "RvL", "RcapL") and m == 1):
        return sats.j1()
    if tag == "R":
        return sats.corner("R", m)
    if tag == "L":
        return sats.corner("L", m)
    if tag == "J":
        return sats.j()
    if tag == "FO2":
        return sats.j() if m == 1 else sats.join("FO", m)
    if tag == "RvL":
        return sats.join("SP", m)
    if tag == "RcapL":
        # R_m cap L_m is the FO2_(m-1) variety for m >= 2
        return sats.j() if m == 2 else sats.join("FO", m - 1)
    raise ValueError("level %s has no pointlike family" % level)


@dataclass
class PointlikeFamily:
    level: Level
    morphism: MonoidMorphism
    members: tuple  # antichain of masks over the target monoid

    @property
    def monoid(self):
        return self.morphism.target

    def denotes(self, mask):
        return mask != 0 and dominated(mask, self.members)

    def member_lines(self):
        return sorted(self.monoid.set_name(x) for x in self.members)


@dataclass
class ConelikeFamily:
    level: Level
    morphism: MonoidMorphism
    entries: dict  # element -> antichain of masks

    @property
    def monoid(self):
        return self.morphism.target

    def denotes(self, s, mask):
        return dominated(mask, self.entries.get(s, ()))

    def entry_lines(self):
        m = self.monoid
        out = []
        for s in sorted(self.entries, key=lambda s: (len(m.name(s)), m.name(s))):
            for mask in self.entries[s]:
                out.append("%s : %s" % (m.name(s), m.set_name(mask)))
        return out


def _project_mask(mask, pi):
    out = 0
    for s in mask_iter(mask):
        out |= 1 << pi[s]
    return out


def _alphabetized(morphism):
    """Alphabetization cached on the morphism, so the saturation families of
    one monoid are shared across levels."""
    got = getattr(morphism, "_alphabetized", None)
    if got is None:
        structure, pi, lifted = alphabetize(morphism)
        got = morphism._alphabetized = (structure, pi, lifted)
    return got


def pointlikes(level, target):
    """Pointlike family of the level over the target monoid: alphabetize,
    saturate, project back."""
    level = _as_level(level)
    if level.tag not in POINTLIKE_TAGS:
        raise ValueError("level %s is not an unordered (pointlike) level; "
                         "use conelikes for Si/Pi" % level)
    morphism = morphism_of(target)
    structure, pi, _ = _alphabetized(morphism)
    family = _family_for(level, saturations(structure))
    members = []
    for mask in family.members:
        antichain_insert(members, _project_mask(mask, pi))
    return PointlikeFamily(level, morphism, tuple(sorted(members)))


def conelikes(level, target):
    """Conelike family of an ordered level over the target monoid."""
    level = _as_level(level)
    if level.tag not in CONELIKE_TAGS:
        raise ValueError("level %s is not an ordered (conelike) level" % level)
    morphism = morphism_of(target)
    structure, pi, _ = _alphabetized(morphism)
    family = saturations(structure).psat(level.tag, level.m)
    entries = {}
    for s, masks in family.entries.items():
        bucket = entries.setdefault(pi[s], [])
        for mask in masks:
            antichain_insert(bucket, _project_mask(mask, pi))
    return ConelikeFamily(level, morphism,
                          {s: tuple(sorted(b)) for s, b in entries.items()})


# -- separators -------------------------------------------------------------------


@dataclass
class Separator:
    """A codomain monoid for the level's optimal relational morphism.

    handle is either a RankerMonoid or the J_A letter morphism; depth is the
    ranker depth actually used, theorem_n the depth the theorem asks for
    (None with a reason when it is too large to even compute).
    """
    level: Level
    flavor: str | None
    index: int | None
    depth: int | None
    theorem_n: object
    handle: object
    sub_theorem: bool

    def describe(self):
        if self.flavor is None:
            return "J_A"
        mark = " (sub-theorem)" if self.sub_theorem else ""
        return "N^%s_{%d,%d}%s" % (self.flavor, self.index, self.depth, mark)


def _separator_shape(level):
    """(flavor, ranker index, depth kind, ramsey argument kind) or None for J_A."""
    tag, m = level.tag, level.m
    if tag == "J1" or (tag in ("R", "L", "RvL", "RcapL") and m == 1):
        return None
    if tag == "R":
        return ("XX", m - 1, "corner", "power")
    if tag == "L":
        return ("YY", m - 1, "corner", "power")
    if tag == "RvL":
        return ("XXuYY", m - 1, "alternation", "power")
    if tag == "RcapL":
        return _separator_shape(Level("FO2", m - 1))
    if tag == "FO2":
        if m == 1:
            return ("XYuYX", 1, "piecewise", "plain")
        return ("XYuYX", m, "alternation", "power")
    if tag == "J":
        return ("XYuYX", 1, "piecewise", "plain")
    if tag == "Si":
        if m == 1:
            return ("XY", 1, "subword", "plain")
        return ("XY" if m % 2 else "YX", m, "alternation", "power")
    if tag == "Pi":
        if m == 1:
            return ("YX", 1, "subword", "plain")
        return ("YX" if m % 2 else "XY", m, "alternation", "power")
    raise ValueError("no separator for level %s" % level)


def separator(level, target, depth=None, class_cap=None):
    """Separator monoid for the level, at the theorem's depth by default or at
    an explicitly requested sub-theorem depth."""
    level = _as_level(level)
    morphism = morphism_of(target)
    alphabet = morphism.alphabet
    shape = _separator_shape(level)
    if shape is None:
        _, _, letter_morphism = j_monoid(alphabet)
        return Separator(level, None, None, None, None, letter_morphism, False)
    flavor, index, depth_kind, ramsey_kind = shape
    size = morphism.target.size
    try:
        colors = size if ramsey_kind == "plain" else 2 ** size
        theorem_n = theorem_depth(depth_kind, index, len(alphabet),
                                  ramsey_bound(colors))
    except (ResourceCapError, OverflowError) as exc:
        theorem_n = "infeasible (%s)" % exc
    use = depth
    if use is None:
        if not isinstance(theorem_n, int):
            raise ResourceCapError(
                "theorem depth for %s is not computable at this size: %s; "
                "pass an explicit sub-theorem depth" % (level, theorem_n))
        use = theorem_n
    cset = build_comparison_set(flavor, index, use, alphabet)
    kwargs = {} if class_cap is None else {"cap": class_cap}
    handle = RankerMonoid(cset, **kwargs)
    sub = not (isinstance(theorem_n, int) and use >= theorem_n)
    return Separator(level, flavor, index, use, theorem_n, handle, sub)


def separator_graph(sep, target):
    return RelationalMorphismGraph(morphism_of(target), sep.handle)


# -- brute-force oracles ------------------------------------------------------------


def brute_pointlikes(graph):
    """Exact tau-pointlikes as an antichain: the preimages of single points."""
    cols = {}
    for s in range(graph.left.size):
        for ki in mask_iter(graph.tau_masks[s]):
            cols[ki] = cols.get(ki, 0) | (1 << s)
    members = []
    for mask in sorted(cols.values()):
        antichain_insert(members, mask)
    return tuple(sorted(members))


def brute_conelikes(graph):
    """Exact tau-conelikes: entry (s, tau^-1(up x)) per witness x in tau(s).

    Quadratic in the codomain; intended for small oracle instances.
    """
    leq = graph.nu.key_leq
    n_keys = len(graph.keys)
    up_member = []
    for i in range(n_keys):
        mask = 0
        for s in range(graph.left.size):
            if any(leq(graph.keys[i], graph.keys[j])
                   for j in mask_iter(graph.tau_masks[s])):
                mask |= 1 << s
        up_member.append(mask)
    entries = {}
    for s in range(graph.left.size):
        bucket = entries.setdefault(s, [])
        for i in mask_iter(graph.tau_masks[s]):
            antichain_insert(bucket, up_member[i])
    return {s: tuple(sorted(b)) for s, b in entries.items()}


# -- covering and separation ---------------------------------------------------------


@dataclass
class Certificate:
    """Witness that a cover instance is impossible: a conelike (s, S) with a
    target word in the preimage of s and per-language words mapping into S."""
    level: Level
    morphism: MonoidMorphism
    element: int
    element_set: tuple
    target: RecognizedLanguage
    target_word: str
    others: list = field(default_factory=list)  # (language, word, element)

    def replay(self):
        mu = self.morphism
        if mu(self.target_word) != self.element:
            return False
        if not self.target.accepts(self.target_word):
            return False
        for lang, word, elt in self.others:
            if mu(word) != elt or elt not in self.element_set:
                return False
            if not lang.accepts(word):
                return False
        return True

    def lines(self):
        m = self.morphism.target
        out = ["conelike: (%s, %s)" % (m.name(self.element),
                                       "{" + ",".join(sorted(m.name(t) for t in self.element_set)) + "}"),
               "target word: %s -> %s" % (self.target_word or '""',
                                          m.name(self.element))]
        for lang, word, elt in self.others:
            out.append("list word: %s -> %s" % (word or '""', m.name(elt)))
        return out


@dataclass
class CoverResult:
    coverable: bool
    certificate: Certificate | None


def _cover_entries(level, morphism):
    """(s, S-mask) candidates in the spec's deterministic search order."""
    m = morphism.target

    def by_name(s):
        return (len(m.name(s)), m.name(s))

    if level.tag in CONELIKE_TAGS:
        fam = conelikes(level, morphism)
        for s in sorted(fam.entries, key=by_name):
            for mask in sorted(fam.entries[s],
                               key=lambda x: (-bin(x).count("1"), x)):
                yield s, mask
    else:
        fam = pointlikes(level, morphism)
        for s in sorted(range(m.size), key=by_name):
            for mask in sorted((x for x in fam.members if (x >> s) & 1),
                               key=lambda x: (-bin(x).count("1"), x)):
                yield s, mask


def decide_cover(level, target, others):
    """Whether some cover of the target by level-definable languages separates
    it from every language in the list; NOT-coverable comes with a certificate."""
    level = _as_level(level)
    others = list(others)
    if not others:
        raise ValueError("the language list must be non-empty")
    alphabet = target.alphabet
    if any(lang.alphabet != alphabet for lang in others):
        raise ValueError("all languages must share one declared alphabet")
    if len(others) == 1:
        morphism = others[0].morphism
    else:
        morphism = product_morphism(others)
    for s, mask in _cover_entries(level, morphism):
        word = find_word(target.dfa, morphism, [s])
        if word is None:
            continue
        witnesses = []
        elements = list(mask_iter(mask))
        for lang in others:
            got = find_word(lang.dfa, morphism, elements)
            if got is None:
                break
            witnesses.append((lang, got, morphism(got)))
        else:
            cert = Certificate(level, morphism, s, tuple(elements),
                               target, word, witnesses)
            return CoverResult(False, cert)
    return CoverResult(True, None)


@dataclass
class SeparationResult:
    separable: bool
    certificate: Certificate | None
    reverse_separable: bool | None = None  # reported for full levels


def decide_separation(level, lang, other):
    """L separable from L' by a level language; reduces to covering with a
    singleton list. Full levels also report the symmetric direction."""
    level = _as_level(level)
    forward = decide_cover(level, lang, [other])
    reverse = None
    if level.tag not in CONELIKE_TAGS:
        reverse = decide_cover(level, other, [lang]).coverable
    return SeparationResult(forward.coverable, forward.certificate, reverse)
