import random
from fractions import Fraction

import pytest

from mmpkit.diagram import MmpDiagram, parse_mmp
from mmpkit.states import (
    ProbabilisticState,
    ZeroOneState,
    admits_01_state,
    admits_quantum_states,
    admits_state,
    block_matrix,
    classify_state_space,
    count_01_states,
    enumerate_01_states,
    min_value_given_one,
    verify_stateless_certificate,
)

from oracles import brute_01_states, float_lp_min, random_diagram

GRID = "abcd,efgh,ijkl,aei,bfj,cgk,dhl."  # 3 rows of 4 against 4 columns of 3


def test_single_block_is_colorable():
    res = admits_01_state(parse_mmp("abc."))
    assert res.colorable
    assert res.witness.values == (1, 0, 0)


def test_known_noncolorable_diagrams(ks7, cabello, ks10):
    for d in (ks7, cabello, ks10):
        res = admits_01_state(d)
        assert not res.colorable and res.witness is None


def test_enumeration_examples(ks7):
    assert len(enumerate_01_states(parse_mmp("abc."))) == 3
    states = enumerate_01_states(parse_mmp("abc,cde."))
    assert len(states) == 5 and not states.truncated
    assert len(enumerate_01_states(ks7)) == 0


def test_enumeration_matches_brute_force_on_share_one_pair():
    d = parse_mmp("abc,cde.")
    assert sorted(s.values for s in enumerate_01_states(d).states) == sorted(brute_01_states(d))


def test_enumeration_limit():
    d = parse_mmp("abc,def,ghi.")
    assert count_01_states(d) == 27
    part = enumerate_01_states(d, limit=10)
    assert len(part) == 10 and part.truncated
    assert not enumerate_01_states(d, limit=27).truncated


def test_agreement_with_brute_force_on_random_diagrams():
    rng = random.Random(5)
    for _ in range(200):
        d = random_diagram(rng, max_vertices=12)
        brute = sorted(brute_01_states(d))
        res = admits_01_state(d)
        assert res.colorable == bool(brute)
        if res.colorable:
            assert res.witness.is_valid_for(d)
        assert sorted(s.values for s in enumerate_01_states(d).states) == brute


def test_exactly_one_rule_matches_zero_one_probabilistic_states():
    rng = random.Random(11)
    for _ in range(50):
        d = random_diagram(rng, max_vertices=9)
        for s in enumerate_01_states(d).states:
            p = s.as_probabilistic()
            assert p.is_valid_for(d)
            assert p.as_zero_one() == s
        # and conversely every {0,1}-valued probabilistic state is a 0-1 state
        for bits in brute_01_states(d):
            assert ProbabilisticState(tuple(Fraction(b) for b in bits)).as_zero_one().is_valid_for(d)
    assert ProbabilisticState((Fraction(1, 2), Fraction(1, 2))).as_zero_one() is None


def test_adding_a_block_never_restores_colorability():
    rng = random.Random(3)
    checked = 0
    for _ in range(300):
        d = random_diagram(rng, max_vertices=10)
        if admits_01_state(d):
            continue
        n = d.vertex_count
        extra = tuple(sorted(rng.sample(range(n + 2), 3)))
        fresh = sum(1 for v in extra if v >= n)
        if fresh and max(extra) != n + fresh - 1:
            continue
        try:
            bigger = d.add_block(extra, fresh)
        except ValueError:
            continue
        assert not admits_01_state(bigger)
        checked += 1
    assert checked > 5


# ----------------------------------------------------------- probabilistic

def test_single_block_state_is_uniform():
    res = admits_state(parse_mmp("abc."))
    assert res.state.values == (Fraction(1, 3),) * 3


def test_known_diagrams_have_states(ks7, cabello):
    for d in (ks7, cabello):
        res = admits_state(d)
        assert res.feasible and res.state.is_valid_for(d)


def test_stateless_grid_has_verified_certificate():
    d = parse_mmp(GRID)
    res = admits_state(d)
    assert not res.feasible
    assert verify_stateless_certificate(d, res.certificate)
    # a wrong certificate is rejected
    assert not verify_stateless_certificate(d, [1] * 7)


def test_state_feasibility_agrees_with_float_solver():
    rng = random.Random(17)
    diagrams = [random_diagram(rng, max_vertices=12, sizes=(3, 4)) for _ in range(60)] + [parse_mmp(GRID)]
    for d in diagrams:
        res = admits_state(d)
        ref = float_lp_min(block_matrix(d), [1] * len(d.blocks), [0] * d.vertex_count)
        assert res.feasible == (ref is not None)
        if res.feasible:
            assert res.state.is_valid_for(d)
        else:
            assert verify_stateless_certificate(d, res.certificate)


# ----------------------------------------------------------------- quantum

def _float_quantum(d):
    """(holds, unreachable) from per-pair floating-point LPs."""
    A = block_matrix(d)
    n = d.vertex_count
    unreachable = []
    for a in range(n):
        pin = [1 if v == a else 0 for v in range(n)]
        if float_lp_min(A + [pin], [1] * (len(A) + 1), [0] * n) is None:
            unreachable.append(a)
            continue
        for b in range(n):
            if b != a:
                low = float_lp_min(A + [pin], [1] * (len(A) + 1), [1 if v == b else 0 for v in range(n)])
                if low > 1 - 1e-9:
                    return False, None
    return True, tuple(unreachable)


def test_quantum_examples(cabello):
    assert admits_quantum_states(parse_mmp("abc."))
    res = admits_quantum_states(parse_mmp("abc,cde."))
    assert res.holds and res.unreachable == ()
    assert _float_quantum(parse_mmp("abc,cde.")) == (True, ())
    res = admits_quantum_states(cabello)
    assert res.holds and res.unreachable == ()


def test_quantum_fails_without_states():
    res = admits_quantum_states(parse_mmp(GRID))
    assert not res.holds and not res.has_states


def test_seven_vertex_diagram_has_only_unreachable_atoms(ks7):
    res = admits_quantum_states(ks7)
    assert res.holds
    assert res.unreachable == tuple(range(7))
    assert _float_quantum(ks7) == (True, tuple(range(7)))


def test_failing_pair_is_genuine():
    # blocks sharing two atoms: m(c) = 1 zeroes a and d, which forces m(b) = 1
    d = parse_mmp("acd,abd.")
    res = admits_quantum_states(d)
    assert not res.holds and res.has_states
    a, b = res.failing_pair
    assert {d.label(a), d.label(b)} == {"b", "c"}
    assert min_value_given_one(d, a, b).value == 1
    assert _float_quantum(d) == (False, None)


def test_quantum_agrees_with_float_oracle_on_random_diagrams():
    rng = random.Random(23)
    for _ in range(25):
        d = random_diagram(rng, max_vertices=9, sizes=(3,), max_blocks=6)
        res = admits_quantum_states(d)
        ref_holds, ref_unreachable = _float_quantum(d)
        assert res.holds == ref_holds, d
        if res.holds:
            assert res.unreachable == ref_unreachable


def test_point_states_give_quantum_witnesses():
    rng = random.Random(29)
    for _ in range(20):
        d = random_diagram(rng, max_vertices=9)
        for s in enumerate_01_states(d, limit=5).states:
            for a in s.ones:
                for b in range(d.vertex_count):
                    if s.values[b] == 0:
                        assert min_value_given_one(d, a, b).value == 0


def test_parallel_quantum_matches_sequential(cabello):
    assert admits_quantum_states(cabello, workers=2) == admits_quantum_states(cabello)


# ---------------------------------------------------------- classification

def test_classification_examples(ks7, cabello):
    c = classify_state_space(parse_mmp("abc."))
    assert (c.admits_any_state, c.admits_01_state, c.admits_quantum_states) == (True, True, True)
    c = classify_state_space(ks7)
    assert (c.admits_any_state, c.admits_01_state) == (True, False)
    assert c.admits_quantum_states and c.has_unreachable_atoms
    c = classify_state_space(cabello)
    assert (c.admits_any_state, c.admits_01_state, c.admits_quantum_states) == (True, False, True)
    assert not c.has_unreachable_atoms
    c = classify_state_space(parse_mmp(GRID))
    assert (c.admits_any_state, c.admits_01_state, c.admits_quantum_states) == (False, False, False)


def test_state_types_format():
    d = parse_mmp("abc.")
    assert ZeroOneState((0, 1, 0)).format(d) == "a:0 b:1 c:0"
    assert admits_state(d).state.format(d) == "a:1/3 b:1/3 c:1/3"
    assert not ZeroOneState((1, 1, 0)).is_valid_for(d)
    assert not ProbabilisticState((Fraction(2), Fraction(-1), Fraction(0))).is_valid_for(d)
    assert MmpDiagram(1, ((0,),)) and admits_01_state(MmpDiagram(1, ((0,),)))
