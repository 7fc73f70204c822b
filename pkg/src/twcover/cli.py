"""Command-line front end with deterministic, machine-parseable output.

Decisions are printed on stdout, never encoded in exit codes: 0 means the
command ran, 2 is a usage or parse error, 3 a resource cap.
"""

from __future__ import annotations

import argparse
import sys

from .monoid import ResourceCapError, mask_iter
from .rankers import FLAVORS, Ranker, build_ranker_monoid, eval_ranker
from .solver import (brute_pointlikes, conelikes, decide_cover,
                     decide_separation, pointlikes, product_morphism,
                     separator, separator_graph)
from .syntactic import Dfa, language, syntactic_ordered_monoid
from .varieties import Level, is_in
from .words import rl_factorize

USAGE_EXIT = 2
RESOURCE_EXIT = 3


def load_language(spec, alphabet):
    """A language argument: a regex string, or @file.dfa in the text format."""
    if spec.startswith("@"):
        if not alphabet:
            raise ValueError("@file.dfa languages need --alphabet")
        with open(spec[1:], encoding="ascii") as handle:
            dfa = Dfa.from_text(handle.read(), alphabet)
        return syntactic_ordered_monoid(dfa.minimize())
    return language(spec, alphabet or None)


def _emit_family(args, lines):
    if args.format == "tsv":
        for line in lines:
            print(line.replace(" : ", "\t").replace("{", "").replace("}", "")
                  .replace(",", "\t"))
    else:
        for line in lines:
            print(line)


def cmd_membership(args):
    lang = load_language(args.language, args.alphabet)
    print("YES" if is_in(Level.parse(args.level), lang) else "NO")


def cmd_separate(args):
    lang = load_language(args.language, args.alphabet)
    other = load_language(args.other, args.alphabet)
    res = decide_separation(Level.parse(args.level), lang, other)
    print("SEPARABLE" if res.separable else "NOT-SEPARABLE")
    if res.certificate is not None:
        for line in res.certificate.lines():
            print(line)
    if res.reverse_separable is not None:
        print("symmetric: %s" % ("SEPARABLE" if res.reverse_separable
                                 else "NOT-SEPARABLE"))


def cmd_cover(args):
    target = load_language(args.target, args.alphabet)
    others = [load_language(s, args.alphabet) for s in args.languages]
    res = decide_cover(Level.parse(args.level), target, others)
    print("COVERABLE" if res.coverable else "NOT-COVERABLE")
    if res.certificate is not None:
        for line in res.certificate.lines():
            print(line)


def _pointlike_args(args):
    langs = [load_language(s, args.alphabet) for s in args.languages]
    return Level.parse(args.level), product_morphism(langs)


def cmd_pointlikes(args):
    level, morphism = _pointlike_args(args)
    if args.via_separator:
        sep = separator(level, morphism, depth=args.depth)
        print("# separator %s" % sep.describe())
        graph = separator_graph(sep, morphism)
        m = morphism.target
        _emit_family(args, sorted(m.set_name(x) for x in brute_pointlikes(graph)))
        return
    fam = pointlikes(level, morphism)
    _emit_family(args, fam.member_lines())


def cmd_conelikes(args):
    level, morphism = _pointlike_args(args)
    fam = conelikes(level, morphism)
    _emit_family(args, fam.entry_lines())


def cmd_monoid(args):
    lang = load_language(args.language, args.alphabet)
    m = lang.monoid
    print("size %d" % m.size)
    print("elements %s" % " ".join(m.names))
    print("accepting %s" % " ".join(sorted(m.name(s)
                                           for s in lang.accepting_elements)))
    print(m.eggbox_ascii(), end="")
    if args.table:
        print(m.to_table_text(), end="")


def cmd_ranker_eval(args):
    ranker = Ranker.parse(args.ranker)
    pos = eval_ranker(ranker, args.word)
    print("undefined" if pos is None else str(pos))


def cmd_ranker_monoid(args):
    if not args.alphabet:
        raise ValueError("ranker-monoid needs --alphabet")
    monoid = build_ranker_monoid(args.flavor, args.m, args.n, args.alphabet)
    print("size %d" % monoid.size)
    if args.elements:
        for rep in monoid.reps:
            print(rep if rep else "1")


def cmd_factorize(args):
    fact = rl_factorize(args.word, args.n)
    segments = fact.segments()
    print("k %d" % fact.k)
    for i, seg in enumerate(segments):
        print("u%d %s" % (i + 1, seg or '""'))
        if i < len(fact.pairs):
            b, a = fact.pairs[i]
            if b == a:
                print("marker %d %s (b=a)" % (a, fact.word[a - 1]))
            else:
                print("markers b@%d %s, a@%d %s  v %s"
                      % (b, fact.word[b - 1], a, fact.word[a - 1],
                         fact.word[b:a - 1] or '""'))
            print("rankers X: %s | Y: %s" % (fact.x_rankers[i], fact.y_rankers[i]))


def build_parser():
    parser = argparse.ArgumentParser(
        prog="twcover",
        description="Membership, separation and covering for the Trotter-Weil "
                    "and FO2 quantifier-alternation hierarchies.",
        epilog="Levels: J1, J, DA, R2, L3, RvL2, RcapL2, FO2_2, Si1, Pi3. "
               "Languages are regexes over a-z with | & ~ * + ? ( ), 1 for the "
               "empty word and 0 for the empty language, or @file.dfa. "
               "Rankers read like 'Xa Yb'.")
    parser.add_argument("--jobs", type=int, default=1,
                        help="accepted for compatibility; output is identical "
                             "for any value")
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(p, languages="*"):
        p.add_argument("--alphabet", default="",
                       help="ambient alphabet (defaults to the regex literals)")
        p.add_argument("--format", choices=("text", "tsv"), default="text")

    p = sub.add_parser("membership", help="is the language in the level?")
    p.add_argument("level")
    p.add_argument("language")
    common(p)
    p.set_defaults(func=cmd_membership)

    p = sub.add_parser("separate", help="is L separable from L' at the level?")
    p.add_argument("level")
    p.add_argument("language")
    p.add_argument("other")
    common(p)
    p.set_defaults(func=cmd_separate)

    p = sub.add_parser("cover", help="covering problem for (target, list)")
    p.add_argument("level")
    p.add_argument("target")
    p.add_argument("languages", nargs="+")
    common(p)
    p.set_defaults(func=cmd_cover)

    p = sub.add_parser("pointlikes", help="pointlike family over the product "
                                          "of the languages' syntactic monoids")
    p.add_argument("level")
    p.add_argument("languages", nargs="+")
    p.add_argument("--via-separator", action="store_true",
                   help="brute-force against the level separator instead")
    p.add_argument("--depth", type=int, default=None,
                   help="sub-theorem separator depth (with --via-separator)")
    common(p)
    p.set_defaults(func=cmd_pointlikes)

    p = sub.add_parser("conelikes", help="conelike family for Si/Pi levels")
    p.add_argument("level")
    p.add_argument("languages", nargs="+")
    common(p)
    p.set_defaults(func=cmd_conelikes)

    p = sub.add_parser("monoid", help="syntactic ordered monoid of a language")
    p.add_argument("language")
    p.add_argument("--table", action="store_true",
                   help="also print the exchange-format table")
    common(p)
    p.set_defaults(func=cmd_monoid)

    p = sub.add_parser("ranker-eval", help="evaluate a ranker on a word")
    p.add_argument("ranker")
    p.add_argument("word", nargs="?", default="")
    p.set_defaults(func=cmd_ranker_eval)

    p = sub.add_parser("ranker-monoid", help="build a comparison quotient monoid")
    p.add_argument("flavor", choices=FLAVORS)
    p.add_argument("m", type=int)
    p.add_argument("n", type=int)
    p.add_argument("--alphabet", default="")
    p.add_argument("--elements", action="store_true",
                   help="print one representative per element")
    p.set_defaults(func=cmd_ranker_monoid)

    p = sub.add_parser("factorize", help="structural factorization of a word")
    p.add_argument("word")
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_factorize)

    return parser


def run_command(argv):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_EXIT if exc.code else 0
    try:
        args.func(args)
    except ResourceCapError as exc:
        print("resource error: %s" % exc, file=sys.stderr)
        return RESOURCE_EXIT
    except (ValueError, OSError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return USAGE_EXIT
    return 0


def main():
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
