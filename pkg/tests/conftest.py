"""Shared fixtures: the full I = (sqrt5) instance is built once per session."""

from __future__ import annotations

import resource
import time
from types import SimpleNamespace

import pytest

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def golden():
    """Group order, tessellation and CSS code for I = (sqrt5), plus build stats."""
    from golden_codes.arith import SQRT5
    from golden_codes.chain import build_css_code
    from golden_codes.group import enumerate_group
    from golden_codes.tessellation import build_tessellation

    t0 = time.perf_counter()
    group = enumerate_group(SQRT5)
    enum_s = time.perf_counter() - t0
    peak_gb = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 2**20
    order = group.order
    t0 = time.perf_counter()
    tess = build_tessellation(group)
    del group
    tess.partitions = None
    tess_s = time.perf_counter() - t0
    code = build_css_code(tess, check=False)
    return SimpleNamespace(order=order, tess=tess, code=code, enum_s=enum_s, tess_s=tess_s, peak_gb=peak_gb)


@pytest.fixture(scope="session")
def golden_ctx(golden):
    from golden_codes.decoders import DecoderContext

    return DecoderContext(golden.tess, golden.code)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
