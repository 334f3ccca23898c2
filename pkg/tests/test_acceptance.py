"""One test per acceptance criterion; each prints a PASS or FAIL line.

Criterion 5 contains one sub-check that cannot be met: the published
largest cover point modulus disagrees with the exact maximum.  That line
prints FAIL, the remaining sub-checks are asserted, and the published value
is kept as a strict expected failure below.
"""

import pytest

from qlambda import suites
from qlambda.algebra import IntPolynomial, make_context
from qlambda.density import cover_set_quadratic

UNATTAINABLE = {"5.sqrt17.max-abs"}


def report(capsys, n, checks):
    failed = [c for c in checks if c.status == suites.FAIL]
    with capsys.disabled():
        print(f"\nCRITERION {n}: {'FAIL' if failed else 'PASS'}")
        for c in failed:
            print(f"    failed {c.id}: {c.detail}")
    return failed


CRITERIA = {
    1: lambda: suites.criterion_1(),
    2: lambda: suites.criterion_2(),
    3: lambda: suites.criterion_3(radius=20),
    4: lambda: suites.criterion_4(radius=30),
    5: lambda: suites.criterion_5(),
    6: lambda: suites.criterion_6(),
    7: lambda: suites.criterion_7(),
    8: lambda: suites.criterion_8(),
    9: lambda: suites.criterion_9(max_lambda=20, max_depth=64),
    10: lambda: suites.criterion_10(min_points=2000),
    11: lambda: suites.criterion_11(instances=100, seed=0),
    12: lambda: suites.criterion_12(),
}


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(capsys, n):
    checks = CRITERIA[n]()
    assert checks and all(c.criterion == n for c in checks)
    failed = report(capsys, n, checks)
    assert [c.id for c in failed if c.id not in UNATTAINABLE] == []
    if n == 5:
        # the only tolerated failure is the unattainable modulus check
        assert {c.id for c in failed} == UNATTAINABLE


@pytest.mark.xfail(strict=True, reason="the exact maximum over the cover set is 21 - 36*lambda (about 149.2159); "
                                       "the published 148.215901 is not attained by any point of the set")
def test_published_cover_modulus():
    c17 = make_context(IntPolynomial([-2, 3, 1]), -3.56)
    cov = cover_set_quadratic(c17, c17.element([9, -16]))
    assert abs(abs(cov.max_abs.shadow()) - suites.PUBLISHED_COVER_MAX) < 1e-6
