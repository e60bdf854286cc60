import sys
from pathlib import Path

import pytest

HERE = Path(__file__).parent
sys.path.insert(0, str(HERE))
MODELS = HERE.parent / "models"

from lgcy import load_model  # noqa: E402

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def models():
    return {p.stem: p for p in sorted(MODELS.glob("*.json"))}


@pytest.fixture(scope="session")
def quintic():
    return load_model(MODELS / "quintic.json")


@pytest.fixture(scope="session")
def p123():
    return load_model(MODELS / "p123.json")


@pytest.fixture(scope="session")
def mirror_quintic():
    return load_model(MODELS / "mirror_quintic.json")


@pytest.fixture(scope="session")
def ci24():
    return load_model(MODELS / "ci_2_4.json")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
