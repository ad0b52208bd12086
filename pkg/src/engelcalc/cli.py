"""Command-line front end.

Exit codes: 0 on success (including reported non-trivial results), 1 on
domain errors, 2 on usage or parse errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any

import yaml

from . import engel, lie, links
from .magnus import expand, expand_reduced, format_series
from .milnor import MilnorContext, lcs_degree
from .syntax import Alphabet, WordSyntaxError, format_word, meridians, parse_word
from .words import gen

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class DomainError(Exception):
    pass


def _alphabet(args) -> Alphabet:
    if getattr(args, "names", None):
        return Alphabet([s.strip() for s in args.names.split(",")])
    return Alphabet()


def _word(args, text: str | None = None):
    return parse_word(args.word if text is None else text, _alphabet(args))


def _need_gens(u, n: int):
    if u.letters and u.max_generator() > n:
        raise UsageError(f"word uses generator {u.max_generator()} but --gens is {n}")


def _load_link(path: str) -> links.LinkPresentation:
    try:
        return links.load_link(path)
    except FileNotFoundError:
        raise UsageError(f"no such link file: {path}") from None
    except yaml.YAMLError as e:
        raise UsageError(f"{path}: not a valid link document: {e}") from None


def _parse_mu_index(text: str) -> links.MuIndex:
    src, sep, tgt = text.partition(";")
    if not sep:
        raise UsageError(f"mu index must look like '23;1' or '2,3;1', got {text!r}")
    try:
        sources = [int(t) for t in src.split(",")] if "," in src else [int(c) for c in src]
        return links.MuIndex(tuple(sources), int(tgt))
    except ValueError as e:
        raise UsageError(f"bad mu index {text!r}: {e}") from None


# --- subcommands ---------------------------------------------------------------

def cmd_expand(args) -> tuple[dict, str]:
    u = _word(args)
    _need_gens(u, args.gens)
    alpha = _alphabet(args)
    names = {i: alpha.name(i) for i in range(1, args.gens + 1)}
    if args.reduced:
        s = expand_reduced(u, args.gens)
        if args.degree is not None:
            s = type(s)(s.num_gens, s.max_degree,
                        {m: c for m, c in s.coeffs.items() if len(m) <= args.degree})
    else:
        if args.degree is None:
            raise UsageError("--degree is required unless --reduced is given")
        s = expand(u, args.gens, args.degree)
    data = {"gens": args.gens, "degree": s.max_degree, "reduced": s.reduced,
            "terms": [{"monomial": list(m), "coefficient": c} for m, c in s.terms()]}
    return data, format_series(s, names)


def cmd_mu(args):
    L = _load_link(args.link)
    idx = _parse_mu_index(args.index)
    value, ok = links.mu_bar(L, idx)
    data = {"index": str(idx), "value": value, "well_defined": ok}
    text = f"mu({idx})={value}" + ("" if ok else " (not well-defined: a shorter invariant is nonzero)")
    return data, text


def cmd_trivial(args):
    L = _load_link(args.link)
    res = links.homotopically_trivial(L)
    data = {"trivial": res.trivial, "witness": str(res.witness) if res.witness else None,
            "value": res.value}
    return data, res.format()


def cmd_certify(args):
    u = _word(args)
    _need_gens(u, args.gens)
    ctx = MilnorContext(args.gens)
    try:
        cert = engel.engel_decompose(u, ctx)
    except engel.NotInFourthTerm as e:
        raise DomainError(str(e)) from None
    alpha = _alphabet(args)
    text = engel.format_certificate(cert, alpha)
    if args.output:
        Path(args.output).write_text(text)
    data = {"gens": cert.n, "target": format_word(cert.target, alpha),
            "terms": [{"id": k, "type": t.type, "exponent": t.exponent,
                       "bracket": engel.format_term(t, alpha)}
                      for k, t in enumerate(cert.terms, 1)],
            "type_counts": cert.type_counts, "verified": engel.verify_certificate(cert, ctx)}
    summary = (f"{len(cert)} terms, types a:{cert.type_counts['a']} b:{cert.type_counts['b']} "
               f"c:{cert.type_counts['c']}")
    return data, text + summary


def cmd_verify_cert(args):
    try:
        text = Path(args.cert).read_text()
    except FileNotFoundError:
        raise UsageError(f"no such certificate file: {args.cert}") from None
    try:
        cert = engel.parse_certificate(text, _alphabet(args))
    except (engel.CertificateFormatError, ValueError) as e:
        raise UsageError(str(e)) from None
    ok = engel.verify_certificate(cert)
    return {"valid": ok, "terms": len(cert)}, "VALID" if ok else "INVALID"


def cmd_lie_report(args):
    if args.max_degree > args.gens:
        raise UsageError(f"--max-degree {args.max_degree} exceeds --gens {args.gens}")
    if args.engel < 1:
        raise UsageError("--engel must be >= 1")
    rep = lie.quotient_report(args.gens, args.max_degree, args.engel)
    return rep.to_dict(), rep.to_text()


def _gbr_spec(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise UsageError(f"GBR spec is not JSON: {e}") from None


def _link_payload(L: links.LinkPresentation) -> dict:
    return links.link_to_dict(L)


def cmd_gbr(args):
    try:
        L = links.build_gbr(_gbr_spec(args.spec))
    except links.LinkError as e:
        raise UsageError(str(e)) from None
    level = links.filtration_level(L)
    if args.output:
        Path(args.output).write_text(links.dump_link(L))
    data = {"link": _link_payload(L), "filtration_level": level}
    return data, links.dump_link(L) + f"# filtration level: {level}"


def cmd_band_sum(args):
    L = _load_link(args.link)
    u = parse_word(args.word, meridians())
    L2 = links.band_sum(L, args.component, u, args.exponent)
    if args.output:
        Path(args.output).write_text(links.dump_link(L2))
    return {"link": _link_payload(L2)}, links.dump_link(L2).rstrip()


def cmd_stabilize(args):
    L = _load_link(args.link)
    res = links.stabilize_and_trivialize(L)
    final = links.homotopically_trivial(res.result)
    alpha = meridians()
    data = {
        "plan": res.plan.to_list(alpha),
        "certificates": [{"component": i, "terms": len(c), "type_counts": c.type_counts}
                         for i, c in res.proof],
        "passes": res.passes,
        "term_count": res.term_count,
        "type_counts": res.type_counts,
        "result_trivial": final.trivial,
    }
    if args.output:
        Path(args.output).write_text(links.dump_link(res.result))
    lines = [f"pass {k}: component {i}, degree {d}, {len(c)} terms"
             for k, ((i, c), d) in enumerate(zip(res.proof, res.passes), 1)]
    tc = res.type_counts
    lines.append(f"{res.term_count} certificate terms (a:{tc['a']} b:{tc['b']} c:{tc['c']}), "
                 f"{len(res.plan)} band sums")
    lines.append(f"result: {final.format()}")
    return data, "\n".join(lines)


def cmd_kinky(args):
    if args.order < 1:
        raise UsageError("--order must be >= 1")
    alpha = Alphabet(["x", "y"])
    w = engel.kinky_relation(args.order)
    degree = 2 * args.order + 1
    s = expand(w, 2, degree)
    engel_part = expand(engel.n_engel_word(2 * args.order, gen(1), gen(2)),
                        2, degree).degree_part(degree)
    part = s.degree_part(degree)
    if part == engel_part:
        sign = 1
    elif part == {m: -c for m, c in engel_part.items()}:
        sign = -1
    else:
        sign = 0
    data = {"order": args.order, "word": format_word(w, alpha), "lcs_degree": s.lowest_degree(),
            "matches_engel_word": sign}
    rel = {1: "equals", -1: "equals minus", 0: "differs from"}[sign]
    text = (f"word: {format_word(w, alpha)}\nlower central degree: {s.lowest_degree()}\n"
            f"degree-{degree} part {rel} that of [y,{','.join(['x'] * (2 * args.order))}]")
    return data, text


# --- parser --------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="engelcalc", description="Milnor-group and Engel-relation calculator.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.set_defaults(func=func)
        return sp

    def names(sp):
        sp.add_argument("--names", help="comma-separated generator names (default x,y,z,w / x1,x2,...)")

    sp = add("expand", cmd_expand, "Magnus expansion of a word")
    sp.add_argument("--word", required=True)
    sp.add_argument("--gens", type=int, required=True)
    sp.add_argument("--degree", type=int)
    sp.add_argument("--reduced", action="store_true", help="expand in the reduced ring")
    names(sp)

    sp = add("mu", cmd_mu, "a mu-bar invariant of a link")
    sp.add_argument("--link", required=True)
    sp.add_argument("--index", required=True, help="e.g. '23;1' or '2,3;1'")

    sp = add("trivial", cmd_trivial, "decide link-homotopy triviality")
    sp.add_argument("--link", required=True)

    sp = add("certify", cmd_certify, "2-Engel certificate of a word in the 4th lower central term")
    sp.add_argument("--word", required=True)
    sp.add_argument("--gens", type=int, required=True)
    sp.add_argument("--output")
    names(sp)

    sp = add("verify-cert", cmd_verify_cert, "check a certificate file")
    sp.add_argument("--cert", required=True)
    names(sp)

    sp = add("lie-report", cmd_lie_report, "graded Engel quotient of the reduced free Lie ring")
    sp.add_argument("--gens", type=int, required=True)
    sp.add_argument("--engel", type=int, default=2)
    sp.add_argument("--max-degree", type=int)

    sp = add("gbr", cmd_gbr, "build a generalized Borromean ring")
    sp.add_argument("--spec", required=True, help="JSON pair of trees, e.g. '[1,[[1,1],[1,1]]]'")
    sp.add_argument("--output")

    sp = add("band-sum", cmd_band_sum, "band a word into one component")
    sp.add_argument("--link", required=True)
    sp.add_argument("--component", type=int, required=True)
    sp.add_argument("--word", required=True)
    sp.add_argument("--exponent", type=int, choices=(1, -1), default=1)
    sp.add_argument("--output")

    sp = add("stabilize", cmd_stabilize, "band-sum elementary links until trivial")
    sp.add_argument("--link", required=True)
    sp.add_argument("--output")

    sp = add("kinky", cmd_kinky, "relation from an iterated kinky handle")
    sp.add_argument("--order", type=int, required=True)
    return p


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.command == "lie-report" and args.max_degree is None:
            args.max_degree = args.gens
        data, text = args.func(args)
    except (UsageError, WordSyntaxError) as e:
        print(f"error: {e}", file=err)
        return EXIT_USAGE
    except (DomainError, links.LinkError, ValueError) as e:
        print(f"error: {e}", file=err)
        return EXIT_DOMAIN
    if args.format == "json":
        print(json.dumps(data, indent=2, ensure_ascii=False), file=out)
    else:
        print(text.rstrip("\n"), file=out)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
