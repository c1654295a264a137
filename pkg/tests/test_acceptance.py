"""One test per acceptance criterion; the terminal summary prints PASS/FAIL per criterion."""
import time
from math import factorial

import numpy as np
import pytest

from ncabel.freealg import substitute
from ncabel.identities import (
    Identity, IdentityCase, Model, Setup, Side, alternating_sum, build_side, build_sides, catalog, commutator,
    free_diff_thm1, free_diff_thm2, in_rational_span, permutation_sum, polarization_sum, subset_sum, subsets,
    thm4_lhs, thm4_rhs, thm5_lhs, thm5_rhs, two_sided_multiples, verify,
)
from ncabel.oracle import OracleConfig, check_weak_witness, probabilistic_verify, weak_centrality_witness

from . import properties
from .test_oracle import FIXTURE

pytestmark = pytest.mark.filterwarnings("error::RuntimeWarning")


@pytest.mark.acceptance("thm1, thm2, thm4, thm5: diff = 0 exactly for n = 0..6, total under 120 s")
def test_main_identities_exact():
    start = time.perf_counter()
    failures = []
    for ident in (Identity.THM1, Identity.THM2, Identity.THM4, Identity.THM5):
        for n in range(7):
            report = verify(IdentityCase(ident, n))
            if not (report.equal and report.diff.is_zero()):
                failures.append(report.case.label())
    elapsed = time.perf_counter() - start
    print(f"thm1/2/4/5 n <= 6: {elapsed:.1f} s")
    assert not failures
    assert elapsed < 120


@pytest.mark.acceptance("Worked example: free THM1 diff at n = 2 is the commutator term for term")
def test_worked_example_thm1():
    s = Setup(2, Model.FREE)
    expected = commutator(s.x(1) + s.x(2) + s.X, s.X + s.Y)
    diff = free_diff_thm1(2)
    assert diff.terms() == expected.terms()


@pytest.mark.acceptance("Worked example: free THM2 diff at n = 2 lies in the span generated by XY - YX")
def test_worked_example_thm2():
    s = Setup(2, Model.FREE)
    xy = commutator(s.X, s.Y)
    diff = free_diff_thm2(2)
    assert not diff.is_zero()
    assert in_rational_span(diff, two_sided_multiples([xy], 2))
    assert diff == xy


@pytest.mark.acceptance("Polarization: alternating sum = sum over n! orderings (n <= 5), zero for m < n")
def test_polarization():
    for n in range(6):
        s = Setup(n, Model.FREE)
        perm = permutation_sum(s)
        assert polarization_sum(s, n) == perm
        assert len(perm) == factorial(n)
        assert all(c == 1 for _, c in perm.terms())
        for m in range(n):
            assert polarization_sum(s, m).is_zero()
            assert verify(IdentityCase(Identity.POLAR2, n, m)).equal
        assert verify(IdentityCase(Identity.POLAR1, n)).equal


@pytest.mark.acceptance("Alternating-sum recursion over t in W for all W in {1,2,3}, m <= 3")
def test_alternating_sum_recursion():
    s = Setup(3, Model.FREE)
    checked = 0
    for W in subsets(3):
        for t in W:
            rest = tuple(w for w in W if w != t)
            for m in range(4):
                for base in (s.X, s.Y, s.X + s.x(2)):
                    assert alternating_sum(s, base, W, m) == (
                        alternating_sum(s, base + s.x(t), rest, m) - alternating_sum(s, base, rest, m))
                    checked += 1
    assert checked == 12 * 4 * 3


def _specialize(p, setup):
    z = setup.ring.var("z")
    for s in setup.ground_set:
        p = substitute(p, f"x{s}", z)
    return p


@pytest.mark.acceptance("Hurwitz 1-3 in the commutative model for n <= 8")
def test_hurwitz():
    for name in ("hurwitz1", "hurwitz2", "hurwitz3"):
        for n in range(9):
            assert verify(IdentityCase(name, n)).equal, (name, n)


@pytest.mark.acceptance("Abel 1-3 recovered from Hurwitz with all x_s = z for n <= 8, Abel 1 coefficients n!/k!")
def test_abel_specialization():
    for n in range(9):
        k = Setup(n, Model.COMMUTATIVE)
        for h, a in (("hurwitz1", "abel1"), ("hurwitz2", "abel2"), ("hurwitz3", "abel3")):
            assert verify(IdentityCase(a, n)).equal
            for side in Side:
                assert _specialize(build_side(k, IdentityCase(h, n), side), k) == \
                    build_side(k, IdentityCase(a, n), side)
        # read the coefficient of (X+Y)^j z^(n-j) off the specialized sum over injective tuples:
        # X -> w - Y makes X+Y a single variable w (x1 is unused after specialization)
        rhs = _specialize(build_side(k, IdentityCase("hurwitz1", n), Side.RHS), k)
        if n == 0:
            assert rhs == 1
            continue
        w, z = k.ring.var("x1"), k.ring.var("z")
        collapsed = substitute(rhs, "X", w - k.Y)
        assert "Y" not in {k.ring.central[i] for mono, _ in collapsed.terms() for i in mono.central}
        for j in range(n + 1):
            assert collapsed.coefficient(w ** j * z ** (n - j)) == factorial(n) // factorial(j)
        assert len(collapsed) == n + 1


@pytest.mark.acceptance("thm4 => thm5 bridge: Y -> Y + x(V) maps THM4 sides onto THM5 sides for n <= 4")
def test_bridge():
    for n in range(5):
        f = Setup(n, Model.FREE)
        shift = f.Y + subset_sum(f, f.ground_set)
        assert substitute(thm4_lhs(f), "Y", shift) == thm5_lhs(f)
        assert substitute(thm4_rhs(f), "Y", shift) == thm5_rhs(f)
        v = Setup(n, Model.UNIVERSAL_XYV)
        moved = v.with_Y(v.Y + subset_sum(v, v.ground_set))
        assert thm4_lhs(moved) == thm5_lhs(v) and thm4_rhs(moved) == thm5_rhs(v)


@pytest.mark.acceptance("Oracle agreement: catalog n <= 5 x 20 seeds, zero UNEQUAL")
def test_oracle_agreement():
    sides = [build_sides(case) for case in catalog(5)]
    unequal = []
    for seed in range(20):
        for case, (_, lhs, rhs) in zip(catalog(5), sides):
            if not probabilistic_verify(lhs, rhs, OracleConfig(seed=seed)).equal_whp:
                unequal.append((case.label(), seed))
    assert not unequal


@pytest.mark.acceptance("Oracle: broken pairing THM1 LHS vs THM2 RHS (n = 2) is UNEQUAL within 10 trials")
def test_oracle_broken_pairing():
    s = Setup(2, Model.UNIVERSAL_XY)
    lhs = build_side(s, IdentityCase("thm1", 2), Side.LHS)
    rhs = build_side(s, IdentityCase("thm2", 2), Side.RHS)
    for seed in range(20):
        v = probabilistic_verify(lhs, rhs, OracleConfig(trials=10, seed=seed))
        assert v.verdict == "UNEQUAL"
        assert np.any(v.difference)


@pytest.mark.acceptance("Weakened centrality: pinned witness with [x(V)+X, X+Y] = 0 and THM1 (n = 3) failing")
def test_weak_centrality_fixture():
    pinned = FIXTURE.read_text()
    found = weak_centrality_witness(3)
    assert found is not None and found.to_text() == pinned
    assert check_weak_witness(pinned) == (True, True)


@pytest.mark.acceptance("Kernel property suite at 1000 cases")
@pytest.mark.parametrize("name", list(properties.SUITES))
def test_property_suite(name, backend):
    assert properties.CASES == 1000
    properties.SUITES[name]()
