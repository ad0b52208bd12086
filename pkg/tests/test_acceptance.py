"""Acceptance suite: nine end-to-end criteria, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -s`` or ``python tests/test_acceptance.py``.
"""
import io
import itertools
import json
import random
import sys
import time
from math import comb
from pathlib import Path

import pytest

from engelcalc.cli import run
from engelcalc.engel import engel_decompose, kinky_relation, n_engel_word, verify_certificate
from engelcalc.lie import (build_basis, engel_relations, left_normed_bracket, lie_polynomial,
                           straighten)
from engelcalc.links import (MuIndex, build_gbr, bing5_link, filtration_level,
                             homotopically_trivial, hopf, load_link, mu_bar, mu_indices,
                             stabilize_and_trivialize)
from engelcalc.magnus import expand, expand_reduced
from engelcalc.milnor import MilnorContext, milnor_trivial
from engelcalc.words import (IDENTITY, GroupWord, commutator, conjugate, gen, invert,
                             left_normed, multiply)

DATA = Path(__file__).resolve().parent.parent / "data" / "links"
RESULTS: dict[int, tuple[bool, str]] = {}


def record(number: int, title: str):
    def wrap(fn):
        def test():
            start = time.perf_counter()
            try:
                detail = fn()
            except BaseException as e:
                RESULTS[number] = (False, f"{title}: {type(e).__name__}: {e}")
                raise
            RESULTS[number] = (True, f"{title}: {detail} ({time.perf_counter() - start:.1f} s)")
        test.__name__ = fn.__name__
        return test
    return wrap


def cli_json(*argv):
    out = io.StringIO()
    code = run(list(argv) + ["--format", "json"], out, io.StringIO())
    assert code == 0, f"exit code {code} for {argv}"
    return out.getvalue()


@record(1, "2-Engel quotient has class <= 3")
def test_criterion_1_engel_nilpotency():
    start = time.perf_counter()
    for n in (4, 5, 6):
        data = json.loads(cli_json("lie-report", "--gens", str(n), "--engel", "2"))
        deg = {d["degree"]: d for d in data["degrees"]}
        assert deg[3]["torsion"] == [3] * comb(n, 3), deg[3]
        assert deg[3]["free_rank"] == 0
        for d in range(4, n + 1):
            assert deg[d]["free_rank"] == 0 and deg[d]["torsion"] == [], deg[d]
            assert set(deg[d]["invariant_factors"]) == {1}
        assert data["nilpotency_class_upper_bound"] == 3
    elapsed = time.perf_counter() - start
    assert elapsed < 10, f"took {elapsed:.1f} s"
    return "n=4,5,6: degree 3 is (Z/3)^C(n,3), degrees 4..n vanish"


@record(2, "free Milnor group has class exactly n")
def test_criterion_2_milnor_class():
    start = time.perf_counter()
    rng = random.Random(2)
    checked = 0
    for n in range(2, 7):
        ctx = MilnorContext(n)
        perms = list(itertools.permutations(range(1, n + 1)))
        if n == 6:
            perms = rng.sample(perms, 120)
        for p in perms:
            u = left_normed([gen(i) for i in p])
            assert not milnor_trivial(u, ctx), p
            for g in range(1, n + 1):
                assert milnor_trivial(commutator(u, gen(g)), ctx), (p, g)
            checked += 1
        for _ in range(100):
            seq = [rng.randint(1, n) for _ in range(n + 1)]
            assert milnor_trivial(left_normed([gen(i) for i in seq]), ctx), seq
    elapsed = time.perf_counter() - start
    assert elapsed < 30, f"took {elapsed:.1f} s"
    return f"{checked} distinct-index n-fold commutators non-trivial, all (n+1)-fold trivial"


@record(3, "commutator identities")
def test_criterion_3_identities():
    rng = random.Random(3)

    def rw():
        return GroupWord([rng.choice([1, -1]) * rng.randint(1, 4)
                          for _ in range(rng.randint(0, 10))])

    for _ in range(1000):
        x, y, z = rw(), rw(), rw()
        hw = multiply(left_normed([x, y, conjugate(z, x)]), left_normed([z, x, conjugate(y, z)]),
                      left_normed([y, z, conjugate(x, y)]))
        assert hw == IDENTITY
        assert commutator(x, y * z) == commutator(x, z) * conjugate(commutator(x, y), z)
        assert commutator(x * z, y) == conjugate(commutator(x, y), z) * commutator(z, y)
        assert commutator(invert(x), y) == conjugate(commutator(y, x), invert(x))
    return "Hall-Witt and product identities exact on 1000 random triples"


@record(4, "Engel certificate counts")
def test_criterion_4_certificate_counts():
    c1 = engel_decompose(left_normed([gen(1), gen(2), gen(3), gen(4)]), 4)
    assert c1.type_counts == {"a": 3, "b": 2, "c": 1} and len(c1) == 6
    assert verify_certificate(c1)
    l1 = commutator(commutator(gen(2), gen(3)), commutator(gen(4), gen(5)))
    c2 = engel_decompose(l1, 5)
    assert c2.type_counts == {"a": 6, "b": 4, "c": 2} and len(c2) == 12
    assert verify_certificate(c2)
    return "[x,y,z,w] -> a:3 b:2 c:1; [[m2,m3],[m4,m5]] -> a:6 b:4 c:2; both verified"


@record(5, "mu-bar values")
def test_criterion_5_mu_values():
    assert mu_bar(hopf(), MuIndex((2,), 1))[0] == 1
    B = load_link(DATA / "borromean.link")
    assert abs(mu_bar(B, MuIndex((2, 3), 1))[0]) == 1
    F = bing5_link()
    for length in range(2, 5):
        for idx in mu_indices(F.n, length):
            assert mu_bar(F, idx)[0] == 0, idx
    value, ok = mu_bar(F, MuIndex((2, 3, 4, 5), 1))
    direct = expand(F.longitudes[0], 5, 4).coefficient((2, 3, 4, 5))
    assert abs(value) == 1 and ok and value == direct
    return f"Hopf 1, Borromean {mu_bar(B, MuIndex((2, 3), 1))[0]}, Bing-5 mu(2345;1)={value}"


@record(6, "stabilize-and-trivialize pipeline")
def test_criterion_6_pipeline():
    start = time.perf_counter()
    details = []
    for spec in ([1, [[1, 1], [1, 1]]], [[1, 1], [[1, 1], 1]], [2, [[1, 1], [1, 1]]]):
        L = build_gbr(spec)
        assert filtration_level(L) == 5
        res = stabilize_and_trivialize(L)
        assert homotopically_trivial(res.result)
        details.append(f"{spec}: {res.term_count} terms")
    b5 = stabilize_and_trivialize(bing5_link())
    assert b5.term_count == 12 and b5.type_counts == {"a": 6, "b": 4, "c": 2}
    for name in ("band_a", "band_b", "band_c"):
        assert homotopically_trivial(load_link(DATA / f"{name}.link"))
    elapsed = time.perf_counter() - start
    assert elapsed < 60, f"took {elapsed:.1f} s"
    return "; ".join(details) + "; band-curve links trivial"


@record(7, "kinky handle relation")
def test_criterion_7_kinky():
    x, y = gen(1), gen(2)
    s = expand(kinky_relation(2), 2, 5)
    e = expand(n_engel_word(4, x, y), 2, 5)
    assert s.lowest_degree() == 5
    part, epart = s.degree_part(5), e.degree_part(5)
    if part == epart:
        sign = "+"
    else:
        assert part == {k: -v for k, v in epart.items()}
        sign = "-"
    return f"lower central degree 5, degree-5 part = {sign}[y,x,x,x,x]"


@record(8, "n-Engel experiment harness")
def test_criterion_8_harness():
    tables = []
    for e in (3, 4):
        for n in range(e + 1, 6):
            first = cli_json("lie-report", "--gens", str(n), "--engel", str(e))
            assert first == cli_json("lie-report", "--gens", str(n), "--engel", str(e))
            data = json.loads(first)
            assert [d["degree"] for d in data["degrees"]] == list(range(1, n + 1))
            for d in data["degrees"]:
                assert d["basis_rank"] == len(build_basis(n, d["degree"]))
                assert d["relation_rank"] + d["free_rank"] == d["basis_rank"]
                assert len(d["invariant_factors"]) == d["relation_rank"]
                if d["degree"] <= e:
                    assert d["relation_rank"] == 0
            ctx = MilnorContext(n)
            for r in engel_relations(n, e + 1, e).sources:
                y, *xs = r.parts
                xprod = multiply(*(left_normed([gen(g) for g in w]) if len(w) > 1 else gen(w[0])
                                   for w in xs))
                ys = left_normed([gen(g) for g in y]) if len(y) > 1 else gen(y[0])
                word = left_normed([ys] + [xprod] * e)
                assert ctx.expansion(word).degree_part(e + 1) == lie_polynomial(r.as_dict())
            tables.append(f"e={e},n={n}")
    return "deterministic tables for " + ", ".join(tables)


@record(9, "straighten vs Magnus oracle")
def test_criterion_9_cross_oracle():
    rng = random.Random(9)

    def random_bracket(gs):
        if len(gs) == 1:
            return gs[0]
        k = rng.randint(1, len(gs) - 1)
        return (random_bracket(gs[:k]), random_bracket(gs[k:]))

    def realize(expr):
        if isinstance(expr, int):
            return gen(expr)
        return commutator(realize(expr[0]), realize(expr[1]))

    for _ in range(200):
        n = rng.randint(2, 5)
        d = rng.randint(2, n)
        gs = rng.sample(range(1, n + 1), d)
        expr = random_bracket(gs)
        coords = straighten(expr)
        s = expand_reduced(realize(expr), n)
        for w in build_basis(n, d).elements:
            if set(w) == set(gs):
                assert coords.get(w, 0) == s.coefficient(w), (expr, w)
        assert s.degree_part(d) == lie_polynomial(coords)
    return "200 random multilinear brackets agree exactly"


def summary_lines() -> list[str]:
    return [f"[{'PASS' if ok else 'FAIL'}] criterion {k}: {msg}"
            for k, (ok, msg) in sorted(RESULTS.items())]


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    for t in tests:
        try:
            t()
        except BaseException:
            pass
    print("\n".join(summary_lines()))
    sys.exit(0 if all(ok for ok, _ in RESULTS.values()) else 1)
