"""Cross-check SVG annotations against the JSON artifacts they were drawn from."""

import json
import xml.etree.ElementTree as ET
from pathlib import Path

from thermorisk.report import lookup

SVG_NS = "{http://www.w3.org/2000/svg}"


def _scale(panel, v):
    lo, hi = float(panel.get("data-lo")), float(panel.get("data-hi"))
    p0, p1 = float(panel.get("data-px0")), float(panel.get("data-px1"))
    return p0 + (v - lo) / (hi - lo) * (p1 - p0)


def check_svg(path: Path, docs: dict) -> tuple[int, list[str]]:
    """Return (annotations checked, problems) for one SVG file.

    Value check: data-value equals the JSON value at data-key exactly.
    Position check: marker lines sit where the panel's scale puts that value,
    to the 0.01 px rounding of the coordinates.
    Label check: a text label shows its value at the precision it prints.
    """
    root = ET.parse(path).getroot()
    parent = {c: p for p in root.iter() for c in p}
    problems, checked = [], 0
    for el in root.iter():
        if el.get("class") != "annotation" or el.get("data-source") is None:
            continue
        checked += 1
        src, key = el.get("data-source"), el.get("data-key")
        value = float(el.get("data-value"))
        expected = lookup(docs[src], key)
        if float(expected) != value:
            problems.append(f"{path.name}: {key} drawn as {value}, JSON has {expected}")
            continue
        tag = el.tag.replace(SVG_NS, "")
        if tag == "text":
            shown = el.text or ""
            if not any(fmt.format(value) in shown for fmt in ("{:.2f}", "{:.6f}", "{:.0f}")):
                problems.append(f"{path.name}: label {shown!r} does not show {value}")
            continue
        if tag != "line" or el.get("data-kind") == "std":
            continue
        x1, x2, y1, y2 = (float(el.get(a)) for a in ("x1", "x2", "y1", "y2"))
        orient, pos = ("x", x1) if x1 == x2 else ("y", y1)
        node = el
        while node is not None and not (node.get("class") == "panel"
                                        and node.get("data-orient") == orient):
            node = parent.get(node)
        if node is None:
            problems.append(f"{path.name}: {key} marker outside any {orient} panel")
            continue
        if abs(_scale(node, value) - pos) > 0.005 + 1e-9:
            problems.append(f"{path.name}: {key} at {pos}, scale puts it at {_scale(node, value)}")
    return checked, problems


def check_run(run_dir: Path) -> tuple[int, list[str]]:
    docs = {name: json.loads((run_dir / name).read_text())
            for name in ("summary.json", "ranking.json")}
    total, problems = 0, []
    for svg in sorted((run_dir / "plots").glob("*.svg")):
        n, p = check_svg(svg, docs)
        total += n
        problems += p
    return total, problems
