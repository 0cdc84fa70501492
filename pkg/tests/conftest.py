import functools

import pytest

from stablab.codes import build_3d3f, build_paramagnet_bulk, build_toric
from stablab.lattice import build_t2xi, build_torus
from stablab.operators import attach_logicals

CRITERIA: dict[str, tuple[bool, str]] = {}


def record(cid: str, ok: bool, detail: str = "") -> bool:
    """Remember the outcome of one acceptance criterion for the closing summary."""
    prev = CRITERIA.get(cid)
    if prev is not None:
        ok = ok and prev[0]
        detail = "; ".join(d for d in (prev[1], detail) if d)
    CRITERIA[cid] = (bool(ok), detail)
    return ok


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(CRITERIA, key=lambda c: int(c[1:])):
        ok, detail = CRITERIA[cid]
        terminalreporter.write_line(f"{cid}: {'PASS' if ok else 'FAIL'}  {detail}")


@functools.lru_cache(maxsize=None)
def code_3d3f(lx, ly, lz):
    return attach_logicals(build_3d3f(build_t2xi(lx, ly, lz)))


@functools.lru_cache(maxsize=None)
def code_toric(*dims):
    return build_toric(len(dims), build_torus(dims))


@functools.lru_cache(maxsize=None)
def code_parabulk(lx, ly, lz):
    return build_paramagnet_bulk(build_t2xi(lx, ly, lz))


@pytest.fixture(scope="session")
def ww333():
    return code_3d3f(3, 3, 3)


@pytest.fixture(scope="session")
def ww666():
    return code_3d3f(6, 6, 6)


@pytest.fixture(scope="session")
def ww888():
    return code_3d3f(8, 8, 8)
