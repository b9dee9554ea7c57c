import pytest

from pargoids.errors import InputError
from pargoids.types import (Arrow, Ground, format_type, parse_type,
                            strict_closure_check, subterms, type_from_json,
                            type_size, type_to_json)

g0, g1, g2 = Ground("g0"), Ground("g1"), Ground("g2")


def test_structural_equality():
    assert Ground("g0") == g0
    assert Arrow(g0, g1) == Arrow(g0, g1)
    assert Arrow(g0, g1) != Arrow(g1, g0)
    assert g0 != Arrow(g0, g0)
    assert len({g0, Ground("g0"), Arrow(g0, g1), Arrow(g0, g1)}) == 2


def test_type_size():
    assert type_size(g0) == 1
    assert type_size(Arrow(g0, g1)) == 3
    assert type_size(Arrow(Arrow(g0, g1), g2)) == 5


def test_format_right_association():
    assert format_type(g0) == "g0"
    assert format_type(Arrow(g0, Arrow(g1, g1))) == "g0 -> g1 -> g1"
    assert format_type(Arrow(Arrow(g0, g1), g2)) == "(g0 -> g1) -> g2"


def test_parse_type():
    assert parse_type("b -> d -> d") == Arrow(Ground("b"), Arrow(Ground("d"), Ground("d")))
    assert parse_type("(g0 -> g1) -> g2") == Arrow(Arrow(g0, g1), g2)
    assert parse_type("  g0  ") == g0
    assert parse_type("((g0))") == g0


def test_parse_format_round_trip():
    for t in (g0, Arrow(g0, g1), Arrow(Arrow(g0, g1), Arrow(g1, g2)),
              Arrow(g0, Arrow(Arrow(g1, g1), g2))):
        assert parse_type(format_type(t)) == t


def test_parse_type_errors():
    with pytest.raises(InputError):
        parse_type("-> a")
    with pytest.raises(InputError):
        parse_type("a ->")
    with pytest.raises(InputError):
        parse_type("(a -> b")
    with pytest.raises(InputError):
        parse_type("a b")
    with pytest.raises(InputError) as exc:
        parse_type("")
    assert exc.value.column == 1


def test_subterms():
    t = Arrow(Arrow(g0, g1), g2)
    assert subterms(t) == {t, Arrow(g0, g1), g0, g1, g2}
    assert subterms(g0) == {g0}


def test_strict_closure_check():
    assert strict_closure_check({g0, g1, Arrow(g0, g1)})
    assert not strict_closure_check({Arrow(g0, g1), g0})
    assert strict_closure_check(set())
    assert strict_closure_check({g0})


def test_type_json_round_trip():
    for t in (g0, Arrow(g0, g1), Arrow(Arrow(g0, g1), g2)):
        assert type_from_json(type_to_json(t)) == t
    assert type_to_json(Arrow(g0, g1)) == ["g0", "g1"]
    with pytest.raises(InputError):
        type_from_json(["g0"])
    with pytest.raises(InputError):
        type_from_json("not a name!")
    with pytest.raises(InputError):
        type_from_json(7)
