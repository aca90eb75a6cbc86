"""Single-zone monthly quasi-steady-state heating and cooling load model.

Each month the building loses ``H * dT * t`` to the outside and gains internal
plus solar heat ``G``. Gains offset heating losses with utilization
``L / (L + G)``; losses offset cooling gains with ``G / (G + L)``. The annual
KPI is the unweighted sum of heating and cooling loads per gross floor area.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

from .model import (
    ORIENTATIONS,
    TARGETS,
    ClimateMonth,
    ClimateTable,
    DesignOption,
    EngineSettings,
    EnvelopeAreas,
    ProjectConfig,
    SystemLoads,
    derive_areas,
)
from .sampling import UncertainInput

__all__ = [
    "InvalidDraw",
    "ThermalModel",
    "LoadBreakdown",
    "build_thermal_model",
    "transmission_coefficient",
    "ventilation_coefficient",
    "internal_gains",
    "solar_gains",
    "monthly_balance",
    "annual_load",
    "evaluate",
]


class InvalidDraw(ValueError):
    """A sampled value breaks a physical invariant of its target field."""

    def __init__(self, inp: UncertainInput, value: float, rule: str):
        self.input = inp
        self.value = value
        super().__init__(f"invalid draw for {inp.label}: {inp.target} = {value!r} ({rule})")


@dataclass(frozen=True)
class ThermalModel:
    areas: EnvelopeAreas
    wall_rsi: float
    floor_rsi: float
    roof_rsi: float
    glazing_u: float
    shgc: float
    loads: SystemLoads
    heating_setpoint: float
    cooling_setpoint: float
    engine: EngineSettings


@dataclass(frozen=True)
class LoadBreakdown:
    heating: tuple[float, ...]
    cooling: tuple[float, ...]
    gross_floor: float

    @property
    def annual_heating(self) -> float:
        return math.fsum(self.heating)

    @property
    def annual_cooling(self) -> float:
        return math.fsum(self.cooling)

    @property
    def annual_load_per_area(self) -> float:
        return (self.annual_heating + self.annual_cooling) / self.gross_floor


def _field_rule(target: str, value: float) -> str | None:
    """Reason ``value`` is unacceptable for ``target``, or None."""
    if not math.isfinite(value):
        return "not finite"
    attr = TARGETS[target][-1]
    if attr.endswith("_rsi") or attr in ("u_value", "infiltration_schedule_factor"):
        return None if value > 0 else "must be > 0"
    if attr == "shgc":
        return None if 0 < value <= 1 else "must lie in (0, 1]"
    if attr == "operation_fraction":
        return None if 0 < value <= 1 else "must lie in (0, 1]"
    if target.startswith("loads."):
        return None if value >= 0 else "must be >= 0"
    return None


def build_thermal_model(option: DesignOption, project: ProjectConfig,
                        x: Sequence[float]) -> ThermalModel:
    """Substitute one sample row ``x`` into ``option``.

    ``x`` is ordered like ``project.uncertain``. Relative inputs scale the
    option's own value; absolute inputs replace it.
    """
    if len(x) != len(project.uncertain):
        raise ValueError(f"expected {len(project.uncertain)} values, got {len(x)}")
    if None in (option.wall_rsi, option.floor_rsi, option.roof_rsi, option.glazing.u_value):
        raise ValueError(f"option {option.id} has unresolved materials; merge the database first")

    fields = {
        "option.wall_rsi": option.wall_rsi,
        "option.floor_rsi": option.floor_rsi,
        "option.roof_rsi": option.roof_rsi,
        "option.glazing.u_value": option.glazing.u_value,
        "option.glazing.shgc": option.glazing.shgc,
        "option.hvac.heating_setpoint": option.hvac.heating_setpoint,
        "option.hvac.cooling_setpoint": option.hvac.cooling_setpoint,
    }
    for f in SystemLoads.__dataclass_fields__:
        fields[f"loads.{f}"] = getattr(project.loads, f)

    for inp, xi in zip(project.uncertain, x):
        value = fields[inp.target] * xi if inp.relative else float(xi)
        rule = _field_rule(inp.target, value)
        if rule is not None:
            raise InvalidDraw(inp, value, rule)
        fields[inp.target] = value

    heat, cool = fields["option.hvac.heating_setpoint"], fields["option.hvac.cooling_setpoint"]
    if not heat < cool:
        culprit = next(u for u in project.uncertain if u.target.startswith("option.hvac"))
        raise InvalidDraw(culprit, fields[culprit.target], "heating setpoint must stay below cooling")

    loads = replace(project.loads, **{t[6:]: v for t, v in fields.items() if t.startswith("loads.")})
    return ThermalModel(
        areas=derive_areas(project.geometry, option.wwr),
        wall_rsi=fields["option.wall_rsi"],
        floor_rsi=fields["option.floor_rsi"],
        roof_rsi=fields["option.roof_rsi"],
        glazing_u=fields["option.glazing.u_value"],
        shgc=fields["option.glazing.shgc"],
        loads=loads,
        heating_setpoint=heat,
        cooling_setpoint=cool,
        engine=project.engine,
    )


def transmission_coefficient(m: ThermalModel) -> float:
    """Envelope conductance H_tr in W/K; the ground floor is damped by the coupling factor."""
    a = m.areas
    walls = sum(a.opaque[o] for o in ORIENTATIONS) / m.wall_rsi
    roof = a.roof / m.roof_rsi
    floor = m.engine.ground_coupling * a.ground_floor / m.floor_rsi
    windows = m.glazing_u * sum(a.glazing[o] for o in ORIENTATIONS)
    return walls + roof + floor + windows


def ventilation_coefficient(m: ThermalModel) -> float:
    """Air exchange conductance H_ve in W/K."""
    ld = m.loads
    area = m.areas.gross_floor
    q_inf = ld.infiltration_per_area * area * ld.infiltration_schedule_factor
    q_vent = ld.ventilation_per_area * area + ld.ventilation_per_person * ld.people_per_area * area
    return m.engine.air_heat_capacity * (q_inf + q_vent)


def internal_gains(m: ThermalModel, hours: float) -> float:
    """Internal gains in kWh over ``hours``."""
    ld = m.loads
    density = ld.equipment_per_area + ld.lighting_per_area + m.engine.people_gain_w * ld.people_per_area
    return density * m.areas.gross_floor * ld.operation_fraction * hours / 1000.0


def solar_gains(m: ThermalModel, month: ClimateMonth) -> float:
    """Solar gains through glazing in kWh."""
    flux = sum(m.areas.glazing[o] * month.irradiance[o] for o in ORIENTATIONS)
    return m.shgc * flux * month.hours / 1000.0


def monthly_balance(m: ThermalModel, month: ClimateMonth,
                    h_total: float | None = None) -> tuple[float, float]:
    """(heating, cooling) load in kWh for one month."""
    if h_total is None:
        h_total = transmission_coefficient(m) + ventilation_coefficient(m)
    t = month.hours
    gains = internal_gains(m, t) + solar_gains(m, month)
    loss_h = max(0.0, h_total * (m.heating_setpoint - month.t_out) * t / 1000.0)
    loss_c = max(0.0, h_total * (m.cooling_setpoint - month.t_out) * t / 1000.0)

    eta_gain = loss_h / (loss_h + gains) if loss_h + gains > 0 else 0.0
    q_heat = max(0.0, loss_h - eta_gain * gains)
    eta_loss = gains / (gains + loss_c) if gains + loss_c > 0 else 0.0
    q_cool = max(0.0, gains - eta_loss * loss_c)
    return q_heat, q_cool


def annual_load(m: ThermalModel, climate: ClimateTable) -> LoadBreakdown:
    h_total = transmission_coefficient(m) + ventilation_coefficient(m)
    heat, cool = [], []
    for month in climate:
        qh, qc = monthly_balance(m, month, h_total)
        heat.append(qh)
        cool.append(qc)
    return LoadBreakdown(tuple(heat), tuple(cool), m.areas.gross_floor)


def evaluate(option: DesignOption, project: ProjectConfig, climate: ClimateTable,
             x: Sequence[float]) -> float:
    """Annual load per floor area (kWh/m2) for one sample row."""
    return annual_load(build_thermal_model(option, project, x), climate).annual_load_per_area
