import functools

import pytest

from weakattract.nonattracting import nonattracting_system
from weakattract.paths import cyclic_reduce, parse_word
from weakattract.repfile import load_example

EXAMPLES = ["ex1", "exg", "exl", "ex2", "trib", "dual_phi", "dual_psi"]


@functools.lru_cache(maxsize=None)
def rep_file(name):
    return load_example(name)


@functools.lru_cache(maxsize=None)
def system(name):
    rf = rep_file(name)
    return nonattracting_system(rf.rep, rf.rho, max_len=12)


def word(name, text):
    return parse_word(rep_file(name).graph, text)


def circ(name, text):
    rf = rep_file(name)
    return cyclic_reduce(rf.graph, parse_word(rf.graph, text))


@pytest.fixture(scope="session")
def ex1():
    return rep_file("ex1").rep


@pytest.fixture(scope="session")
def ex1_ns():
    return system("ex1")


ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def record_criterion(n: int, ok: bool, detail: str):
    ACCEPTANCE[n] = (ok, detail)
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
