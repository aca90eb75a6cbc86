import shutil
from pathlib import Path

import pytest

from thermorisk.fixtures import DATA, bundled_climate, example_project

_ACCEPTANCE: list[str] = []


@pytest.fixture(scope="session")
def project():
    return example_project()


@pytest.fixture(scope="session")
def raw_project():
    return example_project(merged=False)


@pytest.fixture(scope="session")
def climate():
    return bundled_climate()


@pytest.fixture
def project_dir(tmp_path):
    """A writable copy of the bundled project, materials and climate."""
    for name in ("office_project.toml", "materials.csv", "climate_chicago.csv"):
        shutil.copy(DATA / name, tmp_path / name)
    return tmp_path


@pytest.fixture
def edit_project(project_dir):
    """Rewrite the copied project text with (old, new) substitutions."""

    def edit(*subs) -> Path:
        path = project_dir / "office_project.toml"
        text = path.read_text()
        for old, new in subs:
            assert old in text, old
            text = text.replace(old, new, 1)
        path.write_text(text)
        return path

    return edit


@pytest.fixture(scope="session")
def acceptance_log():
    return _ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
