"""The acceptance gate: every criterion runs at its stated tolerance and
prints one pass/fail line."""

import pytest

from ptfwitness.acceptance import CRITERIA


@pytest.mark.parametrize("num,title,fn", CRITERIA, ids=[f"criterion_{c[0]:02d}" for c in CRITERIA])
def test_acceptance(num, title, fn):
    ok, detail = fn()
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {title} -- {detail}")
    assert ok, f"criterion {num} ({title}) failed: {detail}"
