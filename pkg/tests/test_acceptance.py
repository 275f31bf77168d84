"""Acceptance suite: one group of tests per criterion.

Each test records a verdict; the terminal summary prints one PASS/FAIL line
per criterion.  Expensive prover runs are cached per module.
"""

from contextlib import contextmanager

import pytest
from hypothesis import given, settings

from conftest import VERDICTS
from nlinv.circuits import (INV_, L_, P_, bcd_problem, brute_force_search, encode_problem,
                            inverter_problem, ninv_problem, prove, verify_circuit)
from nlinv.cli import run
from nlinv.clauses import Literal, parse_clause
from nlinv.inference import RuleConfig, hyper_resolve, ur_resolve
from nlinv.saturation import Limits, Prover

from test_inference import ground_clause_sets, texts
from test_saturation import check_horn_problem

BCD_MAX_GIVEN = 200_000


@contextmanager
def criterion(n, title):
    note = []
    try:
        yield note
    except BaseException:
        _record(n, False, title, note)
        raise
    _record(n, True, title, note)


def _record(n, ok, title, note):
    prev_ok, _, prev_detail = VERDICTS.get(n, (True, title, ""))
    detail = "; ".join(x for x in [prev_detail] + note if x)
    VERDICTS[n] = (prev_ok and ok, title, detail)


def _prove_with_prover(problem, rule, limits=Limits()):
    enc = encode_problem(problem)
    prover = Prover(enc.usable, enc.sos, enc.prover_config(RuleConfig(rule), limits))
    return prover, prover.run()


@pytest.fixture(scope="module")
def two_inverter_runs(tmp_path_factory):
    out = {}
    for rule in ("ur", "hyper"):
        d = tmp_path_factory.mktemp(f"2inv_{rule}")
        report = run(inverter_problem(), RuleConfig(rule), Limits(), d)
        out[rule] = (report, d)
    return out


# -- 1 ----------------------------------------------------------------------------------


@pytest.mark.parametrize("rule", ["ur", "hyper"])
def test_c1_two_inverter_puzzle_end_to_end(two_inverter_runs, rule):
    with criterion(1, "2inv: UR and hyper refute, circuits verify") as note:
        report, d = two_inverter_runs[rule]
        note.append(f"{rule}: exit {report.exit_code}, {report.stats['given_count']} given, "
                    f"{report.stats['wall_seconds']:.0f}s")
        assert report.exit_code == 0
        assert report.circuit_verified is True
        assert "# verified: yes" in (d / "circuit.txt").read_text()


# -- 2 ----------------------------------------------------------------------------------


def test_c2_hyper_generates_at_least_twice_as_many(two_inverter_runs):
    with criterion(2, "2inv: hyper clauses_generated >= 2x UR") as note:
        ur = two_inverter_runs["ur"][0].stats["clauses_generated"]
        hyper = two_inverter_runs["hyper"][0].stats["clauses_generated"]
        note.append(f"UR {ur}, hyper {hyper}, ratio {hyper / ur:.3f}")
        assert hyper >= 2 * ur


# -- 3 ----------------------------------------------------------------------------------


def test_c3_bcd_ur_beats_hyper(tmp_path):
    with criterion(3, f"bcd: UR refutes within {BCD_MAX_GIVEN} given; hyper needs more") as note:
        limits = Limits(max_given=BCD_MAX_GIVEN)
        ur = run(bcd_problem(), RuleConfig("ur"), limits, tmp_path / "ur")
        note.append(f"UR {ur.status}{'/' + ur.limit if ur.limit else ''} after "
                    f"{ur.stats['given_count']} given, {ur.stats['clauses_generated']} generated")
        assert ur.exit_code == 0, "UR did not refute within the cap"
        hyper = run(bcd_problem(), RuleConfig("hyper"), limits, tmp_path / "hyper")
        note.append(f"hyper {hyper.status} after {hyper.stats['given_count']} given")
        if hyper.exit_code == 0 and hyper.stats["given_count"] <= ur.stats["given_count"]:
            note.append("REVERSAL: hyper needed no more iterations than UR")
        assert hyper.exit_code == 2 or hyper.stats["given_count"] > ur.stats["given_count"]


# -- 4 ----------------------------------------------------------------------------------


@pytest.mark.parametrize("n,budget,expect", [(3, 2, True), (3, 1, False), (2, 1, False)])
def test_c4_oracle_matches_the_bound(n, budget, expect):
    with criterion(4, "oracle: witness for (3,2), unsat for (3,1) and (2,1)") as note:
        p = ninv_problem(n, budget)
        w = brute_force_search(p)
        note.append(f"({n},{budget}): {'witness' if w else 'unsat'}")
        assert (w is not None) == expect
        if w is not None:
            assert verify_circuit(w, p)


# -- 5 ----------------------------------------------------------------------------------


def test_c5_prover_finds_what_the_oracle_finds(two_inverter_runs):
    with criterion(5, "prover agrees with oracle") as note:
        assert brute_force_search(ninv_problem(3, 2)) is not None
        for rule in ("ur", "hyper"):
            report, _ = two_inverter_runs[rule]
            note.append(f"(3,2) {rule}: {report.status}")
            assert report.status == "refutation" and report.circuit_verified


@pytest.mark.parametrize("rule", ["ur", "hyper"])
def test_c5_no_false_proof_when_unsat(rule):
    with criterion(5, "prover agrees with oracle") as note:
        p = ninv_problem(2, 1)
        assert brute_force_search(p) is None
        out, circuit = prove(p, RuleConfig(rule))
        note.append(f"(2,1) {rule}: {out.status}")
        assert out.status == "sos_exhausted" and circuit is None


# -- 6 ----------------------------------------------------------------------------------


def test_c6_ur_is_complete_on_horn_sets():
    with criterion(6, "UR on 200 random Horn sets matches truth tables") as note:
        mismatches, unsat = [], 0
        for seed in range(200):
            sat, status = check_horn_problem(seed)
            unsat += not sat
            if status != ("sos_exhausted" if sat else "refutation"):
                mismatches.append(seed)
        note.append(f"{unsat} unsat / {200 - unsat} sat, {len(mismatches)} mismatches")
        assert not mismatches


def test_c6_ur_refutes_200_unsatisfiable_horn_sets():
    with criterion(6, "UR on 200 random Horn sets matches truth tables") as note:
        refuted, seed = 0, 0
        while refuted < 200:
            sat, status = check_horn_problem(seed)
            seed += 1
            if not sat:
                assert status == "refutation", f"seed {seed - 1}"
                refuted += 1
        note.append(f"200 unsat refuted within seeds 0..{seed - 1}")


# -- 7 ----------------------------------------------------------------------------------


def test_c7_worked_examples():
    with criterion(7, "worked examples reproduce exactly"):
        C = parse_clause
        assert texts(hyper_resolve(C("-P | -Q | -R | S", 1),
                                   [C("P | T", 2), C("Q | W", 3), C("R", 4)])) == ["S | T | W"]
        assert texts(ur_resolve(C("-P | -Q | R", 1), [C("P", 2), C("-R", 3)])) == ["-Q"]
        assert hyper_resolve(C("-P | -Q | R", 1), [C("P", 2), C("-R", 3)]) == []


# -- 8 ----------------------------------------------------------------------------------


@settings(max_examples=300, deadline=None)
@given(ground_clause_sets())
def test_c8_resolvent_shapes(clauses):
    with criterion(8, "structural invariants"):
        for c in hyper_resolve(clauses[0], list(clauses[1:])):
            assert c.is_positive
        for c in ur_resolve(clauses[0], list(clauses[1:])):
            assert c.is_unit


@pytest.mark.parametrize("rule", ["ur", "hyper"])
def test_c8_proofs_descend_from_the_set_of_support(rule):
    with criterion(8, "structural invariants") as note:
        prover, out = _prove_with_prover(inverter_problem(), rule)
        nodes = out.proof.by_id()
        memo = {}

        def from_sos(c):
            if c.id not in memo:
                memo[c.id] = c.id in prover.initial_sos_ids or any(
                    from_sos(nodes[p]) for p in c.parents)
            return memo[c.id]
        derived = [c for c in out.proof.nodes if c.rule != "input"]
        assert derived and all(from_sos(c) for c in derived)
        note.append(f"2inv {rule} proof: {len(out.proof)} nodes")


def test_c8_trace_rows_match_given_count(two_inverter_runs):
    with criterion(8, "structural invariants"):
        for report, d in two_inverter_runs.values():
            rows = (d / "trace.csv").read_text().splitlines()
            assert len(rows) - 1 == report.stats["given_count"]


def test_c8_replay_is_byte_identical(tmp_path):
    with criterion(8, "structural invariants"):
        for rule in ("ur", "hyper"):
            a = run(inverter_problem(), RuleConfig(rule), Limits(max_given=3000), tmp_path / "a")
            b = run(inverter_problem(), RuleConfig(rule), Limits(max_given=3000), tmp_path / "b")
            assert (tmp_path / "a" / "trace.csv").read_bytes() == \
                (tmp_path / "b" / "trace.csv").read_bytes()
            sa, sb = a.without_times()["stats"], b.without_times()["stats"]
            assert sa == sb


# -- 9 ----------------------------------------------------------------------------------


def test_c9_short_lists_subsume_long_ones():
    with criterion(9, "P(p, v) subsumes P(p, L(inv(..), ...))") as note:
        enc = encode_problem(inverter_problem())
        alg = enc.algebra
        p, t, s = alg.term(0b00001111), alg.term(0b11110000), alg.term(0b11001100)
        prover = Prover(enc.usable, enc.sos, enc.prover_config())
        for invs in ([t], [t, s]):
            lst = 900
            for x in reversed(invs):
                lst = (L_, (INV_, x), lst)
            longer = (Literal(True, (P_, p, lst)),)
            assert prover.process_new_clause(longer, "ur", (1,)) == \
                ("discarded", "forward_subsumed")
        assert prover.stats.subsumed_by_sos == 2
        note.append("1- and 2-inverter copies discarded")
