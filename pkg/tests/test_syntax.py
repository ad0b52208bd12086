import pytest
from hypothesis import given

from conftest import words
from engelcalc.syntax import (Alphabet, UnknownGenerator, WordSyntaxError, format_word,
                              meridians, parse_word)
from engelcalc.words import IDENTITY, commutator, conjugate, gen, invert, left_normed, power

x, y, z, w = (gen(i) for i in range(1, 5))


def test_examples():
    assert parse_word("[m2,m3]", meridians()) == commutator(gen(2), gen(3))
    assert parse_word("[[m2,m3],[m4,m5]]") == commutator(commutator(gen(2), gen(3)),
                                                         commutator(gen(4), gen(5)))
    assert parse_word("[y,x,x]") == left_normed([y, x, x])


def test_operators():
    assert parse_word("x^y") == conjugate(x, y)
    assert parse_word("x^-1") == invert(x)
    assert parse_word("(x y)^3") == power(x * y, 3)
    assert parse_word("xy") == x * y
    assert parse_word("1") == IDENTITY
    assert parse_word("x 1 y") == x * y
    assert parse_word("[x,yz,yz,w]") == left_normed([x, y * z, y * z, w])
    assert parse_word("x^(y z)") == conjugate(x, y * z)


def test_named_alphabet():
    a = Alphabet(["a", "b", "c"])
    assert parse_word("[a,c]", a) == commutator(x, z)
    with pytest.raises(UnknownGenerator):
        parse_word("x", a)
    assert format_word(commutator(x, y), a) == "a^-1 b^-1 a b"
    with pytest.raises(ValueError):
        Alphabet(["a", "a"])


@pytest.mark.parametrize("text,pos", [("[x]", 0), ("[x,", 3), ("x!", 1), ("x^", 2), ("", 0),
                                      ("(x", 2), ("x]", 1), ("2", 0)])
def test_syntax_errors(text, pos):
    with pytest.raises(WordSyntaxError) as err:
        parse_word(text)
    assert err.value.position == pos


def test_unknown_generator():
    with pytest.raises(UnknownGenerator):
        parse_word("[x,q]")


@given(words(6, 12))
def test_round_trip(u):
    assert parse_word(format_word(u)) == u
    assert parse_word(format_word(u, meridians()), meridians()) == u
