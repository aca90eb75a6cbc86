"""Building project domain types, file ingestion, material merge and validation.

Project files are TOML documents with units spelled out in key names, e.g.
``wall_rsi_m2K_W = 3.7``. The material database and the climate table are
plain CSV with fixed headers.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Mapping, Optional, Sequence, Union

import tomli_w

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .sampling import Normal, PoissonScaled, UncertainInput

__all__ = [
    "ORIENTATIONS",
    "ProjectError",
    "MissingFileError",
    "UnresolvedMaterialError",
    "MaterialRecord",
    "GlazingSpec",
    "BuildingGeometry",
    "EnvelopeAreas",
    "SystemLoads",
    "HvacSettings",
    "EngineSettings",
    "DesignOption",
    "ClimateMonth",
    "ClimateTable",
    "ProjectConfig",
    "Violation",
    "TARGETS",
    "load_project",
    "loads_project",
    "dump_project",
    "save_project",
    "load_material_db",
    "load_climate",
    "merge_material_properties",
    "derive_areas",
    "validate",
]

ORIENTATIONS = ("N", "S", "E", "W")
MATERIALS_HEADER = ["name", "thickness_m", "conductivity_W_mK", "rsi_m2K_W", "std_fraction"]
CLIMATE_HEADER = [
    "month",
    "t_out_C",
    "hours",
    "irr_N_W_m2",
    "irr_S_W_m2",
    "irr_E_W_m2",
    "irr_W_W_m2",
]
ASSEMBLIES = ("wall", "floor", "roof", "glazing")


class ProjectError(ValueError):
    """Malformed input: missing file, bad syntax or schema violation."""


class MissingFileError(ProjectError):
    """An input file could not be opened."""


class UnresolvedMaterialError(ProjectError):
    def __init__(self, names: Sequence[str]):
        self.names = list(names)
        super().__init__("unresolved material(s): " + ", ".join(self.names))


@dataclass(frozen=True)
class MaterialRecord:
    name: str
    thickness: Optional[float]
    conductivity: Optional[float]
    rsi: float
    std_fraction: float = 0.0


@dataclass(frozen=True)
class GlazingSpec:
    u_value: Optional[float]
    shgc: float


@dataclass(frozen=True)
class BuildingGeometry:
    """Rectangular block. ``length`` runs along the N and S facades."""

    length: float
    width: float
    stories: int
    story_height: float = 4.0
    wwr: Mapping[str, float] = field(default_factory=lambda: dict.fromkeys(ORIENTATIONS, 0.0))


@dataclass(frozen=True)
class EnvelopeAreas:
    gross_floor: float
    roof: float
    ground_floor: float
    facade: Mapping[str, float]
    glazing: Mapping[str, float]
    opaque: Mapping[str, float]


@dataclass(frozen=True)
class SystemLoads:
    equipment_per_area: float
    lighting_per_area: float
    people_per_area: float
    infiltration_per_area: float
    ventilation_per_area: float
    ventilation_per_person: float
    operation_fraction: float = 0.45
    infiltration_schedule_factor: float = 1.0


@dataclass(frozen=True)
class HvacSettings:
    heating_setpoint: float
    cooling_setpoint: float
    # supply/water temperatures, humidity ratios: carried, not simulated
    metadata: Mapping[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class EngineSettings:
    people_gain_w: float = 120.0
    ground_coupling: float = 0.5
    air_heat_capacity: float = 1200.0


@dataclass(frozen=True)
class DesignOption:
    """One candidate design.

    RSI and glazing U values may be ``None`` while a material reference in
    ``materials`` is pending; :func:`merge_material_properties` fills them.
    ``materials`` maps an assembly (wall/floor/roof/glazing) to a material
    name or a list of layer names.
    """

    id: int
    name: str
    wall_rsi: Optional[float]
    floor_rsi: Optional[float]
    roof_rsi: Optional[float]
    glazing: GlazingSpec
    hvac: HvacSettings
    wwr: Optional[Mapping[str, float]] = None
    materials: Mapping[str, Union[str, tuple[str, ...]]] = field(default_factory=dict)
    std_fractions: Mapping[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class ClimateMonth:
    month: int
    t_out: float
    hours: float
    irradiance: Mapping[str, float]


@dataclass(frozen=True)
class ClimateTable:
    months: tuple[ClimateMonth, ...]

    def __iter__(self):
        return iter(self.months)

    def __len__(self):
        return len(self.months)


@dataclass(frozen=True)
class ProjectConfig:
    name: str
    geometry: BuildingGeometry
    loads: SystemLoads
    options: tuple[DesignOption, ...]
    uncertain: tuple[UncertainInput, ...]
    n_samples: int = 500
    seed: int = 0
    materials_file: Optional[str] = None
    climate_file: Optional[str] = None
    engine: EngineSettings = field(default_factory=EngineSettings)
    root: Optional[Path] = field(default=None, compare=False)

    def option(self, option_id: int) -> DesignOption:
        for o in self.options:
            if o.id == option_id:
                return o
        raise KeyError(option_id)

    def resolve(self, ref: Optional[str]) -> Optional[Path]:
        if ref is None:
            return None
        p = Path(ref)
        if not p.is_absolute() and self.root is not None:
            p = self.root / p
        return p


# Fields an uncertain input may perturb. Values are (owner, attribute chain).
TARGETS: dict[str, tuple[str, ...]] = {
    "option.wall_rsi": ("option", "wall_rsi"),
    "option.floor_rsi": ("option", "floor_rsi"),
    "option.roof_rsi": ("option", "roof_rsi"),
    "option.glazing.u_value": ("option", "glazing", "u_value"),
    "option.glazing.shgc": ("option", "glazing", "shgc"),
    "option.hvac.heating_setpoint": ("option", "hvac", "heating_setpoint"),
    "option.hvac.cooling_setpoint": ("option", "hvac", "cooling_setpoint"),
    **{f"loads.{f}": ("loads", f) for f in SystemLoads.__dataclass_fields__},
}


# --------------------------------------------------------------------------
# project file

_LOAD_KEYS = {
    "equipment_W_m2": "equipment_per_area",
    "lighting_W_m2": "lighting_per_area",
    "people_per_m2": "people_per_area",
    "infiltration_m3_s_m2": "infiltration_per_area",
    "ventilation_m3_s_m2": "ventilation_per_area",
    "ventilation_m3_s_person": "ventilation_per_person",
    "operation_fraction": "operation_fraction",
    "infiltration_schedule_factor": "infiltration_schedule_factor",
}
_ENGINE_KEYS = {
    "people_gain_W_person": "people_gain_w",
    "ground_coupling_factor": "ground_coupling",
    "air_heat_capacity_J_m3K": "air_heat_capacity",
}
_OPTION_RSI_KEYS = {
    "wall_rsi_m2K_W": "wall_rsi",
    "floor_rsi_m2K_W": "floor_rsi",
    "roof_rsi_m2K_W": "roof_rsi",
}


class _Table:
    """Dict wrapper that reports the location of bad keys."""

    def __init__(self, data: Any, where: str, source: str):
        if not isinstance(data, dict):
            raise ProjectError(f"{source}: [{where}] must be a table")
        self.data = data
        self.where = where
        self.source = source
        self.used: set[str] = set()

    def _err(self, key: str, msg: str) -> ProjectError:
        return ProjectError(f"{self.source}: {self._path(key)}: {msg}")

    def _path(self, key: str) -> str:
        return f"{self.where}.{key}" if self.where else key

    def has(self, key: str) -> bool:
        return key in self.data

    def raw(self, key: str, default: Any = ...) -> Any:
        self.used.add(key)
        if key not in self.data:
            if default is ...:
                raise self._err(key, "required key missing")
            return default
        return self.data[key]

    def num(self, key: str, default: Any = ...) -> Any:
        v = self.raw(key, default)
        if v is default and default is not ...:
            return v
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise self._err(key, f"expected a number, got {v!r}")
        return float(v)

    def int(self, key: str, default: Any = ...) -> Any:
        v = self.raw(key, default)
        if v is default and default is not ...:
            return v
        if isinstance(v, bool) or not isinstance(v, int):
            raise self._err(key, f"expected an integer, got {v!r}")
        return v

    def str(self, key: str, default: Any = ...) -> Any:
        v = self.raw(key, default)
        if v is default and default is not ...:
            return v
        if not isinstance(v, str):
            raise self._err(key, f"expected a string, got {v!r}")
        return v

    def sub(self, key: str, default: Any = ...) -> Optional["_Table"]:
        v = self.raw(key, default)
        if v is None:
            return None
        return _Table(v, self._path(key), self.source)

    def finish(self) -> None:
        extra = sorted(set(self.data) - self.used)
        if extra:
            raise self._err(extra[0], "unknown key")


def _wwr(value: Any, where: str, source: str) -> dict[str, float]:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return dict.fromkeys(ORIENTATIONS, float(value))
    t = _Table(value, where, source)
    out = {o: t.num(o) for o in ORIENTATIONS}
    t.finish()
    return out


def _parse_option(t: _Table) -> DesignOption:
    materials: dict[str, Union[str, tuple[str, ...]]] = {}
    for a in ASSEMBLIES:
        ref = t.raw(f"{a}_material", None)
        if ref is None:
            continue
        if isinstance(ref, str):
            materials[a] = ref
        elif isinstance(ref, list) and ref and all(isinstance(x, str) for x in ref):
            materials[a] = tuple(ref)
        else:
            raise t._err(f"{a}_material", "expected a name or a list of layer names")
    rsi = {attr: t.num(key, None) for key, attr in _OPTION_RSI_KEYS.items()}
    hv = t.sub("hvac_metadata", None)
    meta = dict(hv.data) if hv is not None else {}
    hvac = HvacSettings(
        heating_setpoint=t.num("heating_setpoint_C"),
        cooling_setpoint=t.num("cooling_setpoint_C"),
        metadata=meta,
    )
    wwr = t.raw("wwr", None)
    opt = DesignOption(
        id=t.int("id"),
        name=t.str("name", ""),
        glazing=GlazingSpec(t.num("glazing_u_W_m2K", None), t.num("glazing_shgc")),
        hvac=hvac,
        wwr=None if wwr is None else _wwr(wwr, f"{t.where}.wwr", t.source),
        materials=materials,
        **rsi,
    )
    t.finish()
    return opt


def _parse_uncertain(t: _Table, idx: int, loads: SystemLoads) -> UncertainInput:
    name = t.str("name")
    target = t.str("target")
    kind = t.str("distribution")
    relative = t.raw("relative", False)
    if not isinstance(relative, bool):
        raise t._err("relative", "expected true/false")
    uid = t.int("id", idx)
    if relative:
        mean = 1.0
        if t.has("mean"):
            raise t._err("mean", "relative inputs have an implied mean of 1.0")
    elif t.has("mean"):
        mean = t.num("mean")
    elif target.startswith("loads.") and target in TARGETS:
        mean = float(getattr(loads, TARGETS[target][1]))
    else:
        raise t._err("mean", "required for absolute inputs on per-option fields")

    if kind == "normal":
        if t.has("sigma") == t.has("cv"):
            raise t._err("sigma", "give exactly one of sigma or cv")
        sigma = t.num("sigma") if t.has("sigma") else t.num("cv") * abs(mean)
        dist: Union[Normal, PoissonScaled] = Normal(sigma)
    elif kind == "poisson":
        dist = PoissonScaled(t.num("cv"))
    else:
        raise t._err("distribution", f"expected 'normal' or 'poisson', got {kind!r}")
    t.finish()
    try:
        return UncertainInput(uid, name, target, mean, dist, relative)
    except ValueError as exc:
        raise t._err("distribution", str(exc)) from None


def loads_project(text: str, source: str = "<project>", root: Optional[Path] = None,
                  check: bool = True) -> ProjectConfig:
    """Parse project TOML text. See :func:`load_project`."""
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ProjectError(f"{source}: malformed syntax: {exc}") from None
    top = _Table(doc, "", source)

    proj = top.sub("project", {})
    name = proj.str("name", "")
    materials_file = proj.str("materials", None)
    climate_file = proj.str("climate", None)
    proj.finish()

    g = top.sub("geometry")
    geometry = BuildingGeometry(
        length=g.num("length_m"),
        width=g.num("width_m"),
        stories=g.int("stories"),
        story_height=g.num("story_height_m", 4.0),
        wwr=_wwr(g.raw("wwr", 0.0), "geometry.wwr", source),
    )
    g.finish()

    lt = top.sub("loads")
    loads = SystemLoads(
        **{attr: lt.num(key) for key, attr in _LOAD_KEYS.items()
           if key not in ("operation_fraction", "infiltration_schedule_factor")},
        operation_fraction=lt.num("operation_fraction", 0.45),
        infiltration_schedule_factor=lt.num("infiltration_schedule_factor", 1.0),
    )
    lt.finish()

    et = top.sub("engine", {})
    engine = EngineSettings(**{attr: et.num(key, getattr(EngineSettings, attr))
                               for key, attr in _ENGINE_KEYS.items()})
    et.finish()

    ct = top.sub("campaign", {})
    n_samples = ct.int("samples", 500)
    seed = ct.int("seed", 0)
    ct.finish()

    raw_opts = top.raw("options", [])
    if not isinstance(raw_opts, list) or not raw_opts:
        raise ProjectError(f"{source}: options: at least one [[options]] entry is required")
    options = tuple(_parse_option(_Table(o, f"options[{i}]", source))
                    for i, o in enumerate(raw_opts))

    raw_unc = top.raw("uncertain", [])
    if not isinstance(raw_unc, list):
        raise ProjectError(f"{source}: uncertain: expected an array of tables")
    uncertain = tuple(_parse_uncertain(_Table(u, f"uncertain[{i}]", source), i + 1, loads)
                      for i, u in enumerate(raw_unc))
    top.finish()

    project = ProjectConfig(
        name=name,
        geometry=geometry,
        loads=loads,
        options=options,
        uncertain=uncertain,
        n_samples=n_samples,
        seed=seed,
        materials_file=materials_file,
        climate_file=climate_file,
        engine=engine,
        root=root,
    )
    if check:
        problems = validate(project)
        if problems:
            raise ProjectError(f"{source}: " + "; ".join(str(v) for v in problems))
    return project


def load_project(path: Union[str, Path], check: bool = True) -> ProjectConfig:
    """Read a project file.

    With ``check`` the project is validated and the first violations are
    raised as :class:`ProjectError`. Pending material references are not
    violations; they are resolved by :func:`merge_material_properties`.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except FileNotFoundError:
        raise MissingFileError(f"{path}: file not found") from None
    except OSError as exc:
        raise MissingFileError(f"{path}: {exc}") from None
    return loads_project(text, str(path), root=path.parent, check=check)


def _drop_none(d: dict) -> dict:
    return {k: v for k, v in d.items() if v is not None}


def dump_project(project: ProjectConfig) -> str:
    """Serialize to TOML; :func:`loads_project` reads it back to an equal config."""
    inv_load = {v: k for k, v in _LOAD_KEYS.items()}
    inv_eng = {v: k for k, v in _ENGINE_KEYS.items()}
    g = project.geometry
    doc: dict[str, Any] = {
        "project": _drop_none({
            "name": project.name,
            "materials": project.materials_file,
            "climate": project.climate_file,
        }),
        "geometry": {
            "length_m": g.length,
            "width_m": g.width,
            "stories": g.stories,
            "story_height_m": g.story_height,
            "wwr": dict(g.wwr),
        },
        "loads": {inv_load[f]: getattr(project.loads, f) for f in inv_load},
        "engine": {inv_eng[f]: getattr(project.engine, f) for f in inv_eng},
        "campaign": {"samples": project.n_samples, "seed": project.seed},
        "options": [],
        "uncertain": [],
    }
    for o in project.options:
        entry: dict[str, Any] = {"id": o.id, "name": o.name}
        for key, attr in _OPTION_RSI_KEYS.items():
            if getattr(o, attr) is not None:
                entry[key] = getattr(o, attr)
        if o.glazing.u_value is not None:
            entry["glazing_u_W_m2K"] = o.glazing.u_value
        entry["glazing_shgc"] = o.glazing.shgc
        if o.wwr is not None:
            entry["wwr"] = dict(o.wwr)
        entry["heating_setpoint_C"] = o.hvac.heating_setpoint
        entry["cooling_setpoint_C"] = o.hvac.cooling_setpoint
        for a, ref in o.materials.items():
            entry[f"{a}_material"] = ref if isinstance(ref, str) else list(ref)
        if o.hvac.metadata:
            entry["hvac_metadata"] = dict(o.hvac.metadata)
        doc["options"].append(entry)
    for u in project.uncertain:
        entry = {"id": u.id, "name": u.name, "target": u.target}
        if isinstance(u.dist, Normal):
            entry["distribution"] = "normal"
            if u.relative:
                entry["cv"] = u.dist.sigma
            else:
                entry["sigma"] = u.dist.sigma
        else:
            entry["distribution"] = "poisson"
            entry["cv"] = u.dist.cv
        entry["relative"] = u.relative
        if not u.relative:
            entry["mean"] = u.mean
        doc["uncertain"].append(entry)
    return tomli_w.dumps(doc)


def save_project(project: ProjectConfig, path: Union[str, Path]) -> None:
    Path(path).write_text(dump_project(project))


# --------------------------------------------------------------------------
# material database and climate

def _csv_rows(path: Union[str, Path], header: list[str]) -> list[tuple[int, dict[str, str]]]:
    path = Path(path)
    try:
        fh = open(path, newline="")
    except FileNotFoundError:
        raise MissingFileError(f"{path}: file not found") from None
    with fh:
        reader = csv.reader(fh)
        try:
            got = [h.strip() for h in next(reader)]
        except StopIteration:
            raise ProjectError(f"{path}: empty file") from None
        missing = [h for h in header if h not in got]
        if missing:
            raise ProjectError(f"{path}: missing required column {missing[0]!r}")
        if got != header:
            raise ProjectError(f"{path}: header must be exactly {','.join(header)}")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise ProjectError(f"{path}:{lineno}: expected {len(header)} cells, got {len(row)}")
            rows.append((lineno, {h: c.strip() for h, c in zip(header, row)}))
        return rows


def _cell(path, lineno: int, col: str, text: str, required: bool = True) -> Optional[float]:
    if text == "":
        if required:
            raise ProjectError(f"{path}:{lineno}: {col}: empty cell")
        return None
    try:
        return float(text)
    except ValueError:
        raise ProjectError(f"{path}:{lineno}: {col}: non-numeric cell {text!r}") from None


def load_material_db(path: Union[str, Path]) -> list[MaterialRecord]:
    """Read ``materials.csv``; RSI is derived as thickness/conductivity when blank."""
    records: list[MaterialRecord] = []
    seen: set[str] = set()
    for lineno, r in _csv_rows(path, MATERIALS_HEADER):
        name = r["name"]
        if not name:
            raise ProjectError(f"{path}:{lineno}: name: empty cell")
        if name in seen:
            raise ProjectError(f"{path}:{lineno}: duplicate material name {name!r}")
        seen.add(name)
        thick = _cell(path, lineno, "thickness_m", r["thickness_m"], False)
        cond = _cell(path, lineno, "conductivity_W_mK", r["conductivity_W_mK"], False)
        rsi = _cell(path, lineno, "rsi_m2K_W", r["rsi_m2K_W"], False)
        std = _cell(path, lineno, "std_fraction", r["std_fraction"], False) or 0.0
        if thick is not None and not thick > 0:
            raise ProjectError(f"{path}:{lineno}: thickness_m must be > 0")
        if cond is not None and not cond > 0:
            raise ProjectError(f"{path}:{lineno}: conductivity_W_mK must be > 0")
        if rsi is None:
            if thick is None or cond is None:
                raise ProjectError(
                    f"{path}:{lineno}: rsi_m2K_W blank and not derivable from thickness/conductivity")
            rsi = thick / cond
        if not rsi > 0:
            raise ProjectError(f"{path}:{lineno}: rsi_m2K_W must be > 0")
        if not 0 <= std < 1:
            raise ProjectError(f"{path}:{lineno}: std_fraction must lie in [0, 1)")
        records.append(MaterialRecord(name, thick, cond, rsi, std))
    return records


def load_climate(path: Union[str, Path]) -> ClimateTable:
    months = []
    for lineno, r in _csv_rows(path, CLIMATE_HEADER):
        vals = {k: _cell(path, lineno, k, r[k]) for k in CLIMATE_HEADER}
        m = vals["month"]
        if m != len(months) + 1:
            raise ProjectError(f"{path}:{lineno}: months must run 1..12 in order")
        if not 672 <= vals["hours"] <= 744:
            raise ProjectError(f"{path}:{lineno}: hours must lie in [672, 744]")
        irr = {o: vals[f"irr_{o}_W_m2"] for o in ORIENTATIONS}
        if any(v < 0 for v in irr.values()):
            raise ProjectError(f"{path}:{lineno}: irradiance must be >= 0")
        months.append(ClimateMonth(int(m), vals["t_out_C"], vals["hours"], irr))
    if len(months) != 12:
        raise ProjectError(f"{path}: expected 12 monthly rows, got {len(months)}")
    return ClimateTable(tuple(months))


# --------------------------------------------------------------------------
# merge

def _resolve_ref(ref, db: Mapping[str, MaterialRecord]):
    names = [ref] if isinstance(ref, str) else list(ref)
    absent = [n for n in names if n not in db]
    if absent:
        return None, None, absent
    recs = [db[n] for n in names]
    rsi = math.fsum(r.rsi for r in recs)
    # layer stack: std of the sum for independent layers, as a fraction of the sum
    std = math.sqrt(math.fsum((r.rsi * r.std_fraction) ** 2 for r in recs)) / rsi
    return rsi, std, []


def merge_material_properties(project: ProjectConfig,
                              db: Sequence[MaterialRecord]) -> ProjectConfig:
    """Fill unset assembly properties from the material database.

    Matching is by exact, case-sensitive name. Values already present in the
    project win. A glazing record's RSI is taken as 1/U.
    """
    table = {m.name: m for m in db}
    missing: list[str] = []
    unreferenced: list[str] = []
    new_options = []
    for o in project.options:
        changes: dict[str, Any] = {}
        std = dict(o.std_fractions)
        glazing = o.glazing
        for a in ASSEMBLIES:
            current = glazing.u_value if a == "glazing" else getattr(o, f"{a}_rsi")
            ref = o.materials.get(a)
            if ref is None:
                if current is None:
                    unreferenced.append(f"option {o.id} {a}")
                continue
            rsi, frac, absent = _resolve_ref(ref, table)
            if absent:
                # an unknown name is only fatal when the project has no value
                if current is None:
                    missing.extend(n for n in absent if n not in missing)
                continue
            std.setdefault(a, frac)
            if current is None:
                if a == "glazing":
                    glazing = replace(glazing, u_value=1.0 / rsi)
                else:
                    changes[f"{a}_rsi"] = rsi
        new_options.append(replace(o, glazing=glazing, std_fractions=std, **changes))
    if missing or unreferenced:
        raise UnresolvedMaterialError(missing + unreferenced)
    return replace(project, options=tuple(new_options))


# --------------------------------------------------------------------------
# geometry

def derive_areas(geometry: BuildingGeometry,
                 wwr: Optional[Mapping[str, float]] = None) -> EnvelopeAreas:
    """Envelope areas; ``wwr`` overrides the geometry's window-to-wall ratios."""
    g = geometry
    ratios = g.wwr if wwr is None else wwr
    footprint = g.length * g.width
    height = g.stories * g.story_height
    facade_len = {"N": g.length, "S": g.length, "E": g.width, "W": g.width}
    facade = {o: facade_len[o] * height for o in ORIENTATIONS}
    glazing = {o: facade[o] * ratios[o] for o in ORIENTATIONS}
    opaque = {o: facade[o] - glazing[o] for o in ORIENTATIONS}
    return EnvelopeAreas(
        gross_floor=footprint * g.stories,
        roof=footprint,
        ground_floor=footprint,
        facade=facade,
        glazing=glazing,
        opaque=opaque,
    )


# --------------------------------------------------------------------------
# validation

@dataclass(frozen=True)
class Violation:
    path: str
    rule: str
    actual: Any

    def __str__(self):
        return f"{self.path}: {self.rule} (got {self.actual!r})"


def _finite(x) -> bool:
    return isinstance(x, (int, float)) and math.isfinite(x)


def validate(project: ProjectConfig) -> list[Violation]:
    """Itemized invariant and cross-reference violations; empty when sane."""
    out: list[Violation] = []

    def need(ok: bool, path: str, rule: str, actual: Any):
        if not ok:
            out.append(Violation(path, rule, actual))

    g = project.geometry
    need(_finite(g.length) and g.length > 0, "BuildingGeometry.length", "must be > 0", g.length)
    need(_finite(g.width) and g.width > 0, "BuildingGeometry.width", "must be > 0", g.width)
    need(isinstance(g.stories, int) and g.stories > 0, "BuildingGeometry.stories",
         "must be a positive integer", g.stories)
    need(_finite(g.story_height) and g.story_height > 0, "BuildingGeometry.story_height",
         "must be > 0", g.story_height)
    for o in ORIENTATIONS:
        v = g.wwr.get(o)
        need(_finite(v) and 0 <= v <= 1, f"BuildingGeometry.wwr.{o}", "must lie in [0, 1]", v)

    ld = project.loads
    for f in SystemLoads.__dataclass_fields__:
        v = getattr(ld, f)
        if f == "operation_fraction":
            need(_finite(v) and 0 < v <= 1, f"SystemLoads.{f}", "must lie in (0, 1]", v)
        elif f == "infiltration_schedule_factor":
            need(_finite(v) and v > 0, f"SystemLoads.{f}", "must be > 0", v)
        else:
            need(_finite(v) and v >= 0, f"SystemLoads.{f}", "must be >= 0", v)

    e = project.engine
    need(_finite(e.people_gain_w) and e.people_gain_w >= 0, "EngineSettings.people_gain_w",
         "must be >= 0", e.people_gain_w)
    need(_finite(e.ground_coupling) and 0 <= e.ground_coupling <= 1,
         "EngineSettings.ground_coupling", "must lie in [0, 1]", e.ground_coupling)
    need(_finite(e.air_heat_capacity) and e.air_heat_capacity > 0,
         "EngineSettings.air_heat_capacity", "must be > 0", e.air_heat_capacity)

    need(len(project.options) >= 1, "ProjectConfig.options", "at least one design option",
         len(project.options))
    seen: set[int] = set()
    for o in project.options:
        where = f"DesignOption[{o.id}]"
        need(o.id not in seen, f"{where}.id", "must be unique", o.id)
        seen.add(o.id)
        for a in ("wall", "floor", "roof"):
            v = getattr(o, f"{a}_rsi")
            if v is None:
                need(a in o.materials, f"{where}.{a}_rsi", "unset and no material reference", None)
            else:
                need(_finite(v) and v > 0, f"{where}.{a}_rsi", "must be > 0", v)
        u = o.glazing.u_value
        if u is None:
            need("glazing" in o.materials, f"{where}.GlazingSpec.u_value",
                 "unset and no material reference", None)
        else:
            need(_finite(u) and u > 0, f"{where}.GlazingSpec.u_value", "must be > 0", u)
        s = o.glazing.shgc
        need(_finite(s) and 0 < s <= 1, f"{where}.GlazingSpec.shgc", "must lie in (0, 1]", s)
        if o.wwr is not None:
            for d in ORIENTATIONS:
                v = o.wwr.get(d)
                need(_finite(v) and 0 <= v <= 1, f"{where}.wwr.{d}", "must lie in [0, 1]", v)
        h = o.hvac
        need(_finite(h.heating_setpoint) and _finite(h.cooling_setpoint)
             and h.heating_setpoint < h.cooling_setpoint,
             f"{where}.HvacSettings", "heating_setpoint must be below cooling_setpoint",
             (h.heating_setpoint, h.cooling_setpoint))

    ids: set[int] = set()
    for u in project.uncertain:
        where = f"UncertainInput[{u.id}]"
        need(u.id not in ids, f"{where}.id", "must be unique", u.id)
        ids.add(u.id)
        need(u.target in TARGETS, f"{where}.target", "does not name an existing field", u.target)
        if isinstance(u.dist, Normal):
            need(_finite(u.dist.sigma) and u.dist.sigma > 0, f"{where}.sigma", "must be > 0",
                 u.dist.sigma)
        else:
            need(_finite(u.dist.cv) and 0 < u.dist.cv < 1, f"{where}.cv", "must lie in (0, 1)",
                 u.dist.cv)
            need(_finite(u.mean) and u.mean > 0, f"{where}.mean", "must be > 0", u.mean)

    need(isinstance(project.n_samples, int) and project.n_samples >= 2,
         "ProjectConfig.n_samples", "must be >= 2", project.n_samples)
    need(isinstance(project.seed, int) and 0 <= project.seed < 2**64, "ProjectConfig.seed",
         "must be an unsigned 64-bit integer", project.seed)
    return out
