import json

import pytest
from hypothesis import given

from muller.condition import (
    ConditionError,
    MullerCondition,
    all_conditions,
    format_set,
    is_upward_closed,
    load_condition,
)

from conftest import DATA, conditions
from oracles import powerset, upward_closed


def test_members_are_canonical():
    c = MullerCondition.of("ab", [["b", "a"], ("a", "b"), "a"])
    assert c.winning == {frozenset("ab"), frozenset("a")}
    assert c.sorted_sets() == [frozenset("a"), frozenset("ab")]


def test_rejects_foreign_colours():
    with pytest.raises(ConditionError):
        MullerCondition.of("ab", ["ac"])


def test_rejects_empty_or_duplicate_alphabet():
    with pytest.raises(ConditionError):
        MullerCondition.of("", [])
    with pytest.raises(ConditionError):
        MullerCondition(("a", "a"), frozenset())


def test_file_format_round_trip(tmp_path):
    c = load_condition(DATA / "recurring_condition.json")
    assert c == MullerCondition.of("abcd", ["ab", "abc", "abcd"])
    assert MullerCondition.from_json(json.loads(json.dumps(c.to_json()))) == c


def test_empty_set_membership_must_be_explicit():
    with pytest.raises(ConditionError):
        MullerCondition.from_json({"colours": ["a"], "winning": []})
    with_empty = MullerCondition.from_json({"colours": ["a"], "winning": [], "empty_wins": True})
    assert with_empty.empty_wins
    with pytest.raises(ConditionError):
        MullerCondition.from_json({"colours": ["a"], "winning": [[]], "empty_wins": False})


def test_upward_closed_examples():
    assert is_upward_closed(MullerCondition.of("ab", ["a", "ab", "b"]))
    assert not is_upward_closed(MullerCondition.of("abcd", ["ab", "abc", "abcd"]))
    assert is_upward_closed(MullerCondition.of("ab", []))


@given(conditions())
def test_upward_closed_matches_oracle(c):
    assert is_upward_closed(c) == upward_closed(c.alphabet, c.winning)


@given(conditions())
def test_complement_is_involution(c):
    assert c.complement().complement() == c
    assert c.complement().winning | c.winning == set(powerset(c.alphabet))


def test_all_conditions_counts():
    assert sum(1 for _ in all_conditions("ab")) == 16
    assert len(set(all_conditions("abc"))) == 256


def test_format_set():
    assert format_set("dba", "abcd") == "abd"
    assert format_set([], "ab") == "{}"
    assert format_set(["x1", "x2"]) == "{x1,x2}"
