from __future__ import annotations

import os
from functools import lru_cache
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from finmod import corpus as corpus_mod
from finmod.modules import RModule

settings.register_profile("finmod", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "finmod"))

ROOT = Path(__file__).resolve().parent.parent
CORPUS_DIR = ROOT / "corpus"


@lru_cache(maxsize=None)
def shipped():
    return corpus_mod.read(CORPUS_DIR)


@lru_cache(maxsize=None)
def module(name: str) -> RModule:
    return shipped().by_name()[name].module()


def corpus_pairs() -> list[tuple[str, str]]:
    return [tuple(p) for p in shipped().manifest["pairs"]]


def corpus_names() -> list[str]:
    return [i.name for i in shipped().instances]


def Z(*orders: int) -> RModule:
    return RModule.abelian(orders)


@pytest.fixture(scope="session")
def corpus():
    return shipped()


# -- acceptance summary ------------------------------------------------------------------------------

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def record(n: int, ok: bool, detail: str) -> None:
    ACCEPTANCE[n] = (ok, detail)
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
