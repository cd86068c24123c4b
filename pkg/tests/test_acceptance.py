"""Acceptance gate: every numbered criterion runs at its stated tolerance.

One pytest case per criterion, so `pytest -v` prints one pass/fail line
each; the same functions back the CLI `acceptance` subcommand.
"""

import pytest

from khbm.acceptance import criterion_ids, run_all, run_criterion

BASE_SEED = 0


def _label(cid):
    return f"criterion-{cid:02d}"


@pytest.mark.parametrize("cid", criterion_ids(), ids=[_label(c) for c in criterion_ids()])
def test_criterion(cid):
    result = run_criterion(cid, BASE_SEED)
    line = f"[{'PASS' if result.passed else 'FAIL'}] criterion {result.cid} ({result.name}): {result.detail}"
    print(line)
    assert result.passed, line


def test_unknown_criterion_rejected():
    with pytest.raises(ValueError):
        run_criterion(99, BASE_SEED)


def test_run_all_covers_every_id():
    ids = [r.cid for r in run_all(BASE_SEED)]
    assert ids == list(criterion_ids())
    assert ids == list(range(1, 11))
