from fractions import Fraction

import pytest

from ttour import fixture, format_instance, gen_random, parse_instance
from ttour.instances import ParseError

F = Fraction


def test_parse_fixture_texts():
    assert parse_instance("3 3 2\n0 2\n0 1 1\n1 2 1\n0 2 1\n") == fixture("FIX-TRI-PATH")
    assert parse_instance("2 1 2\n0 1\n0 1 1\n") == fixture("FIX-EDGE")


def test_parse_errors_carry_line_numbers():
    with pytest.raises(ParseError) as err:
        parse_instance("3 2 2\n0 2\n0 1 1\n")
    assert err.value.line is not None
    with pytest.raises(ParseError):
        parse_instance("2 1 2\n0 1\n0 1 -1\n")
    with pytest.raises(ParseError):
        parse_instance("2 1 2\n0 1\n0 1 x\n")


def test_parse_semantic_errors():
    with pytest.raises(ValueError):
        parse_instance("3 1 0\n\n0 1 1\n")  # disconnected
    with pytest.raises(ValueError):
        parse_instance("2 1 1\n0\n0 1 1\n")  # odd |T|


def test_parse_comments_decimals_and_rationals():
    text = "# triangle\n3 3 0\n\n0 1 0.5\n# middle\n1 2 3/4\n0 2 2\n"
    inst = parse_instance(text)
    assert inst.lengths == (F(1, 2), F(3, 4), F(2)) and not inst.terminals


def test_format_round_trip():
    inst = gen_random(6, 9, 5, t_size=4)
    assert parse_instance(format_instance(inst)) == inst


def test_gen_random_examples():
    assert gen_random(4, 5, 1) == gen_random(4, 5, 1)
    inst = gen_random(2, 1, 0, (1, 1), 2)
    assert inst.graph.edges == ((0, 1),) and inst.terminals == {0, 1} and inst.lengths == (1,)
    with pytest.raises(ValueError):
        gen_random(5, 3, 0)
    with pytest.raises(ValueError):
        gen_random(4, 5, 0, t_size=3)
