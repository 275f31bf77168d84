import itertools

import pytest
from hypothesis import given, settings, strategies as st

from nlinv.clauses import format_clause, parse_clause
from nlinv.inference import RuleConfig, binary_resolve, hyper_resolve, ur_resolve


def C(text, id):
    return parse_clause(text, id)


def texts(clauses):
    # literal order follows symbol interning order, so normalize it
    return sorted(" | ".join(sorted(format_clause(c).split(" | "))) for c in clauses)


def test_hyper_worked_example():
    nucleus = C("-P | -Q | -R | S", 1)
    sats = [C("P | T", 2), C("Q | W", 3), C("R", 4)]
    out = hyper_resolve(nucleus, sats)
    assert texts(out) == ["S | T | W"]
    assert out[0].parents == (1, 2, 3, 4)


def test_hyper_with_satellite_as_given():
    # the last satellite arrives as the given clause
    usable = [C("-P | -Q | -R | S", 1), C("P | T", 2), C("Q | W", 3)]
    assert texts(hyper_resolve(C("R", 4), usable)) == ["S | T | W"]


def test_ur_worked_example():
    out = ur_resolve(C("-P | -Q | R", 1), [C("P", 2), C("-R", 3)])
    assert texts(out) == ["-Q"]
    assert out[0].parents == (1, 2, 3)


def test_hyper_cannot_use_a_single_satellite():
    assert hyper_resolve(C("-P | -Q | R", 1), [C("P", 2), C("-R", 3)]) == []


def test_ur_transitivity_example():
    # the negative unit pins the result: -R(b,c)
    nucleus = C("-R(x,y) | -R(y,z) | R(x,z)", 1)
    out = ur_resolve(nucleus, [C("R(a,b)", 2), C("-R(a,c)", 3)])
    assert texts(out) == ["-R(b,c)"]


def test_ur_polarity_restricts_results():
    nucleus = C("-P | -Q | R", 1)
    assert ur_resolve(nucleus, [C("P", 2), C("-R", 3)], polarity="positive") == []
    assert texts(ur_resolve(nucleus, [C("P", 2), C("Q", 3)], polarity="positive")) == ["R"]


def test_given_unit_used_twice_in_one_inference():
    # the given clause may fill two nucleus positions, renamed apart
    nucleus = C("-P(x) | -P(y) | Q(x,y)", 1)
    out = ur_resolve(C("P(a)", 2), [nucleus])
    assert texts(out) == ["Q(a,a)"]


def test_binary_resolution():
    out = binary_resolve(C("P(x) | Q(x)", 1), [C("-P(a)", 2)])
    assert texts(out) == ["Q(a)"]


def test_rule_config_validates():
    with pytest.raises(ValueError):
        RuleConfig("paramodulation")
    with pytest.raises(ValueError):
        RuleConfig("ur", "sideways")


# -- properties over random ground clause sets --------------------------------------

ATOMS = "PQRST"


@st.composite
def ground_clause_sets(draw):
    n = draw(st.integers(2, 6))
    out = []
    for i in range(n):
        k = draw(st.integers(1, 3))
        atoms = draw(st.lists(st.sampled_from(ATOMS), min_size=k, max_size=k, unique=True))
        lits = [("" if draw(st.booleans()) else "-") + a for a in atoms]
        out.append(C(" | ".join(lits), i + 1))
    return out


def _models(clauses):
    for bits in itertools.product((False, True), repeat=len(ATOMS)):
        m = dict(zip(ATOMS, bits))
        yield m, all(_holds(c, m) for c in clauses)


def _holds(c, m):
    from nlinv import terms as T
    return any(m[T.symbol_name(l.atom[0])] == l.positive for l in c.literals)


@settings(max_examples=300, deadline=None)
@given(ground_clause_sets())
def test_resolvents_are_sound_and_well_shaped(clauses):
    given_clause, usable = clauses[0], clauses[1:]
    hyper = hyper_resolve(given_clause, list(usable))
    ur = ur_resolve(given_clause, list(usable))
    binary = binary_resolve(given_clause, list(usable))
    for c in hyper:
        assert c.is_positive
    for c in ur:
        assert c.is_unit
    for c in hyper + ur + binary:
        assert given_clause.id in c.parents
        for m, ok in _models(clauses):
            if ok:
                assert _holds(c, m)


def _lits(c):
    from nlinv import terms as T
    return frozenset((l.positive, T.symbol_name(l.atom[0])) for l in c.literals)


def _binary_closure(nucleus, sats):
    # clash negative literals one at a time until none remain
    done, frontier = set(), {nucleus}
    while frontier:
        c = frontier.pop()
        neg = sorted(a for s, a in c if not s)
        if not neg:
            done.add(c)
            continue
        a = neg[0]
        for sat in sats:
            if (True, a) in sat:
                frontier.add((c - {(False, a)}) | (sat - {(True, a)}))
    return done


@settings(max_examples=300, deadline=None)
@given(ground_clause_sets())
def test_hyper_equals_composed_binary_steps(clauses):
    nucleus, usable = clauses[0], clauses[1:]
    if nucleus.is_positive:
        return
    sats = [_lits(c) for c in usable if c.is_positive]
    assert {_lits(c) for c in hyper_resolve(nucleus, list(usable))} == \
        _binary_closure(_lits(nucleus), sats)


def test_nonground_hyper_and_ur_agree():
    nucleus = C("-P(x,y) | -Q(x) | R(x,y)", 1)
    sats = [C("P(z,b)", 2), C("Q(a)", 3)]
    assert texts(hyper_resolve(nucleus, sats)) == ["R(a,b)"]
    assert texts(ur_resolve(nucleus, sats)) == ["R(a,b)"]
