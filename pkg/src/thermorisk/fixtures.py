"""The bundled mid-size office test case and a Chicago-like monthly climate."""

from __future__ import annotations

from pathlib import Path

from .model import (
    ClimateTable,
    ProjectConfig,
    load_climate,
    load_material_db,
    load_project,
    merge_material_properties,
)

DATA = Path(__file__).parent / "data"
PROJECT_FILE = DATA / "office_project.toml"
MATERIALS_FILE = DATA / "materials.csv"
CLIMATE_FILE = DATA / "climate_chicago.csv"


def example_project(merged: bool = True) -> ProjectConfig:
    """Four-option, five-story office with eleven uncertain inputs."""
    project = load_project(PROJECT_FILE)
    if merged:
        project = merge_material_properties(project, load_material_db(MATERIALS_FILE))
    return project


def bundled_climate() -> ClimateTable:
    return load_climate(CLIMATE_FILE)
