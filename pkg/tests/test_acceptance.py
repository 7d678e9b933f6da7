"""The twelve primary acceptance criteria, one pass/fail line each."""

import pytest

from cliffqca.acceptance import CHECKS, run_check


@pytest.mark.parametrize("number", [n for n, _, _ in CHECKS], ids=[f"criterion-{n:02d}" for n, _, _ in CHECKS])
def test_criterion(number, capsys):
    result = run_check(number)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.ok, result.detail
