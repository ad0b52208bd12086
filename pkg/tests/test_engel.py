import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from engelcalc.engel import (FOUR_FOLD_SCRIPT, ElementaryCommutator, EngelCertificate,
                             NotInFourthTerm, basic_commutator, basic_decompose,
                             engel_decompose, format_certificate, kinky_relation, n_engel_word,
                             parse_certificate, script_terms, verify_certificate)
from engelcalc.lie import engel_relations, lie_polynomial
from engelcalc.magnus import expand
from engelcalc.milnor import MilnorContext, lcs_degree, milnor_equal, milnor_trivial
from engelcalc.syntax import parse_word
from engelcalc.words import (IDENTITY, commutator, conjugate, gen, invert, left_normed,
                             multiply)

x, y, z, w = (gen(i) for i in range(1, 5))
m = {i: gen(i) for i in range(1, 8)}
L1 = commutator(commutator(m[2], m[3]), commutator(m[4], m[5]))


def test_four_fold_certificate():
    cert = engel_decompose(left_normed([x, y, z, w]), 4)
    assert len(cert) == 6
    assert cert.type_counts == {"a": 3, "b": 2, "c": 1}
    assert verify_certificate(cert)
    # two type-a terms, then one a, two b, one c
    assert [t.type for t in cert.terms] == ["a", "a", "a", "b", "b", "c"]


def test_script_is_an_identity_in_mf4():
    prod = multiply(*(ElementaryCommutator(e, s).realize() for e, s in FOUR_FOLD_SCRIPT))
    assert milnor_equal(prod, left_normed([x, y, z, w]), 4)


def test_bing5_longitude_certificate():
    cert = engel_decompose(L1, 5)
    assert len(cert) == 12
    assert cert.type_counts == {"a": 6, "b": 4, "c": 2}
    assert verify_certificate(cert)


def test_empty_certificate_for_trivial_word():
    u = commutator(x, conjugate(x, y))
    cert = engel_decompose(u, 3)
    assert cert.terms == ()
    assert verify_certificate(cert)
    assert verify_certificate(EngelCertificate(IDENTITY, 2, ()))


def test_flipped_exponent_fails():
    cert = engel_decompose(left_normed([x, y, z, w]), 4)
    t0 = cert.terms[0]
    bad = EngelCertificate(cert.target, 4, (t0.inverted(),) + cert.terms[1:])
    assert not verify_certificate(bad)


def test_low_degree_word_is_rejected_with_witness():
    with pytest.raises(NotInFourthTerm) as err:
        engel_decompose(left_normed([x, y, z]), 4)
    assert err.value.degree == 3
    assert len(err.value.monomial) == 3 and err.value.coefficient != 0


def test_basic_decompose_examples():
    assert basic_decompose(commutator(x, y) * commutator(z, w), 4) == [
        (commutator(x, y), 1), (commutator(z, w), 1)]
    assert basic_decompose(IDENTITY, 4) == []
    assert basic_decompose(L1, 5) == [
        (basic_commutator([2, 3, 4, 5]), 1), (basic_commutator([2, 3, 5, 4]), -1)]


def test_l1_basic_form():
    right = multiply(basic_commutator([2, 3, 4, 5]), invert(basic_commutator([2, 3, 5, 4])))
    assert milnor_equal(L1, right, 5)
    # the alternative [m2,m3,m4,m5]·[m3,m2,m4,m5]^-1 is the square of the first factor
    alt = multiply(basic_commutator([2, 3, 4, 5]), invert(basic_commutator([3, 2, 4, 5])))
    assert not milnor_equal(L1, alt, 5)
    assert milnor_equal(alt, basic_commutator([2, 3, 4, 5]) ** 2, 5)


@pytest.mark.parametrize("seed", range(20))
def test_basic_decompose_reconstructs(seed):
    rng = random.Random(seed)
    n = rng.randint(3, 6)
    factors = []
    for _ in range(rng.randint(1, 4)):
        k = rng.randint(2, n)
        b = basic_commutator(rng.sample(range(1, n + 1), k))
        factors.append(b if rng.random() < 0.5 else invert(b))
    u = multiply(*factors)
    ctx = MilnorContext(n)
    parts = basic_decompose(u, ctx)
    prod = multiply(*(b if e == 1 else invert(b) for b, e in parts))
    assert milnor_equal(prod, u, ctx)
    lead = basic_decompose(u, ctx, single_degree=True)
    k = lcs_degree(u, ctx)
    if k is not None:
        prod = multiply(*(b if e == 1 else invert(b) for b, e in lead))
        r = multiply(invert(prod), u)
        assert lcs_degree(r, ctx) is None or lcs_degree(r, ctx) > k


@pytest.mark.parametrize("seed", range(25))
def test_soundness_random(seed):
    rng = random.Random(100 + seed)
    n = rng.randint(4, 6)
    factors = []
    for _ in range(rng.randint(1, 3)):
        k = rng.randint(4, n)
        b = basic_commutator(rng.sample(range(1, n + 1), k))
        if rng.random() < 0.5:
            b = conjugate(b, gen(rng.randint(1, n)))
        factors.append(b if rng.random() < 0.5 else invert(b))
    u = multiply(*factors)
    ctx = MilnorContext(n)
    cert = engel_decompose(u, ctx)
    assert verify_certificate(cert, ctx)
    for t in cert.terms:
        j, mm = t.doubled_positions
        assert 1 <= j < mm <= 4
        assert t.entries[j - 1] == t.entries[mm - 1] and len(t.entries[j - 1]) == 2
        singles = [e for p, e in enumerate(t.entries, 1) if p not in (j, mm)]
        assert all(len(e) == 1 for e in singles)
        flat = [g for e in singles for g in e] + list(t.entries[j - 1])
        assert len(set(flat)) == len(flat)
        if t.length == 4:
            assert t.type in "abc"


def test_elementary_commutator_validation():
    with pytest.raises(ValueError):
        ElementaryCommutator(((1,), (2,), (3,), (4,)))
    with pytest.raises(ValueError):
        ElementaryCommutator(((1,), (2, 3), (2, 4), (5,)))
    with pytest.raises(ValueError):
        ElementaryCommutator(((1,), (1, 3), (1, 3), (5,)))
    with pytest.raises(ValueError):
        ElementaryCommutator(((1,), (2, 3), (2, 3), (4,)), 2)
    with pytest.raises(ValueError):
        ElementaryCommutator(((1,), (2,), (3,), (4, 5), (4, 5)))
    assert ElementaryCommutator(((1,), (2, 4), (3,), (2, 4))).type == "c"


def entry_word(entry):
    return multiply(*(gen(g) for g in entry))


@pytest.mark.parametrize("entries", [((1,), (2, 3), (2, 3), (4,)), ((1,), (2,), (3, 4), (3, 4)),
                                     ((1,), (2, 4), (3,), (2, 4))])
def test_orientation_rule(entries):
    t = ElementaryCommutator(entries)
    for p, e in enumerate(entries):
        if len(e) != 1:
            continue
        flipped = [entry_word(f) for f in entries]
        flipped[p] = invert(flipped[p])
        assert milnor_equal(left_normed(flipped), invert(t.realize()), 4)


def test_script_terms_extend_with_trailing_generators():
    terms = script_terms([1, 2, 3, 4, 5])
    assert all(t.entries[-1] == (5,) for t in terms)
    prod = multiply(*(t.realize() for t in terms))
    assert milnor_equal(prod, basic_commutator([1, 2, 3, 4, 5]), 5)
    with pytest.raises(ValueError):
        script_terms([1, 2, 3])


def test_certificate_text_round_trip():
    cert = engel_decompose(L1, 5)
    text = format_certificate(cert)
    back = parse_certificate(text)
    assert back == cert
    assert "term 1 a -1 [x2,x3x4,x3x4,x5]" in text


def test_n_engel_word():
    assert n_engel_word(2, x, y) == left_normed([y, x, x])
    assert n_engel_word(4, x, y) == left_normed([y, x, x, x, x])
    assert n_engel_word(1, x, y) == commutator(y, x)
    with pytest.raises(ValueError):
        n_engel_word(0, x, y)


def test_kinky_relations():
    assert kinky_relation(1) == commutator(x, conjugate(x, y))
    assert kinky_relation(2) == parse_word("[[x^y,[x,[y,x]]], x]")
    s = expand(kinky_relation(2), 2, 5)
    e = expand(n_engel_word(4, x, y), 2, 5)
    assert s.lowest_degree() == 5
    part, epart = s.degree_part(5), e.degree_part(5)
    assert part == epart or part == {k: -v for k, v in epart.items()}
    for order in (1, 2, 3, 4):
        assert expand(kinky_relation(order), 2, 2 * order + 1).lowest_degree() == 2 * order + 1
    with pytest.raises(ValueError):
        kinky_relation(0)


@pytest.mark.parametrize("e", [2, 3])
def test_symmetrized_engel_word_matches_relation_row(e):
    n = e + 1
    ys = (1,)
    xs = tuple(range(2, n + 1))
    prod = multiply(*(gen(g) for g in xs))
    word = n_engel_word(e, prod, gen(1))
    part = expand(word, n, n).degree_part(n)
    multilinear = {k: v for k, v in part.items() if len(set(k)) == n}
    rows = [r for r in engel_relations(n, n, e).sources
            if r.kind == "engel" and r.parts[0] == ys]
    assert len(rows) == 1
    assert multilinear == lie_polynomial(rows[0].as_dict())
