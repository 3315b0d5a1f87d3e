from __future__ import annotations

import io
import sys
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from nquasi.cli import run  # noqa: E402
from nquasi.core import QTable  # noqa: E402
from nquasi.gen import cyclic_group, group_iterated, s3_group  # noqa: E402
from nquasi.resources import fixture  # noqa: E402

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


def zq(q: int, n: int) -> QTable:
    return group_iterated(cyclic_group(q), n)


def s3(n: int) -> QTable:
    return group_iterated(s3_group(), n)


def plus_loop(loop: QTable) -> QTable:
    """``x1 + loop(x2, x3)`` over Z5."""
    q = loop.q
    x = np.arange(q)
    return QTable((x[:, None, None] + loop.array[None, :, :]) % q)


@pytest.fixture
def loop5() -> QTable:
    return fixture("loop5")


@pytest.fixture
def irr3_q4() -> QTable:
    return fixture("irr3_q4")


@pytest.fixture
def irr3_q5() -> QTable:
    return fixture("irr3_q5")


def cli(*argv: str, stdin: str | None = None) -> tuple[int, str, str]:
    out, err = io.StringIO(), io.StringIO()
    old_stdin = sys.stdin
    if stdin is not None:
        sys.stdin = io.StringIO(stdin)
    try:
        with redirect_stdout(out), redirect_stderr(err):
            code = run(list(argv))
    finally:
        sys.stdin = old_stdin
    return code, out.getvalue(), err.getvalue()
