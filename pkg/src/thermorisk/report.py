"""SVG figures for a finished run directory.

Figures are derived views of summary.json, ranking.json and results.csv.
Every annotation (mean, deterministic value, quartiles, median limits, ...)
is an element carrying ``data-source``, ``data-key`` and ``data-value``
attributes that point back at the JSON value it draws. Each plotting panel is
a ``<g class="panel">`` recording its value range and pixel span, so marker
positions can be checked too.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping, Sequence
from xml.sax.saxutils import escape

import numpy as np

from .artifacts import ArtifactError, read_json, read_results_csv
from .sampling import normal_inv_cdf

__all__ = [
    "WIDTH",
    "HEIGHT",
    "render_run",
    "histogram_svg",
    "boxplot_svg",
    "criteria_svg",
    "text_summary",
    "lookup",
]

WIDTH, HEIGHT = 960, 540
GREEN, BLUE, RED, BLACK, GRAY = "#2ca02c", "#1f77b4", "#d62728", "#222222", "#9a9a9a"


def lookup(doc: Mapping[str, Any], key: str) -> Any:
    """Resolve a dotted key; list entries are addressed by their ``option_id``."""
    node: Any = doc
    for part in key.split("."):
        if isinstance(node, list):
            node = next(e for e in node if str(e.get("option_id")) == part)
        else:
            node = node[part]
    return node


@dataclass
class _Scale:
    lo: float
    hi: float
    p0: float
    p1: float

    @classmethod
    def padded(cls, lo: float, hi: float, p0: float, p1: float, pad: float = 0.05):
        span = hi - lo if hi > lo else max(abs(hi), 1.0)
        return cls(lo - pad * span, hi + pad * span, p0, p1)

    def __call__(self, v: float) -> float:
        return self.p0 + (v - self.lo) / (self.hi - self.lo) * (self.p1 - self.p0)

    def attrs(self, orient: str) -> str:
        return (f'data-orient="{orient}" data-lo="{self.lo!r}" data-hi="{self.hi!r}" '
                f'data-px0="{self.p0!r}" data-px1="{self.p1!r}"')


def _f(v: float) -> str:
    return f"{v:.2f}"


def _annotation(kind: str, source: str, key: str, value: float, shape: str) -> str:
    return (f'<{shape} class="annotation" data-kind="{kind}" data-source="{source}" '
            f'data-key="{key}" data-value="{value!r}"')


def _vline(x: float, y0: float, y1: float, color: str, kind: str, source: str, key: str,
           value: float, dash: bool = False) -> str:
    d = ' stroke-dasharray="6 4"' if dash else ""
    return (_annotation(kind, source, key, value, "line")
            + f' x1="{_f(x)}" y1="{_f(y0)}" x2="{_f(x)}" y2="{_f(y1)}" stroke="{color}"'
            f' stroke-width="2"{d}/>')


def _hline(y: float, x0: float, x1: float, color: str, kind: str, source: str, key: str,
           value: float, dash: bool = False) -> str:
    d = ' stroke-dasharray="6 4"' if dash else ""
    return (_annotation(kind, source, key, value, "line")
            + f' x1="{_f(x0)}" y1="{_f(y)}" x2="{_f(x1)}" y2="{_f(y)}" stroke="{color}"'
            f' stroke-width="2"{d}/>')


def _label(x: float, y: float, text: str, kind: str, source: str, key: str, value: float,
           color: str = BLACK, anchor: str = "start") -> str:
    return (_annotation(kind, source, key, value, "text")
            + f' x="{_f(x)}" y="{_f(y)}" fill="{color}" font-size="11" text-anchor="{anchor}">'
            f"{escape(text)}</text>")


def _text(x: float, y: float, text: str, size: int = 12, anchor: str = "start",
          weight: str = "normal") -> str:
    return (f'<text x="{_f(x)}" y="{_f(y)}" font-size="{size}" text-anchor="{anchor}" '
            f'font-weight="{weight}" fill="{BLACK}">{escape(text)}</text>')


def _svg(title: str, body: Sequence[str]) -> str:
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" '
            f'width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif">\n'
            f"<title>{escape(title)}</title>\n"
            f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>\n')
    return head + "\n".join(body) + "\n</svg>\n"


def _axis_ticks(scale: _Scale, orient: str, at: float, n: int = 5) -> list[str]:
    out = []
    for v in np.linspace(scale.lo, scale.hi, n):
        p = scale(v)
        if orient == "x":
            out.append(f'<line x1="{_f(p)}" y1="{_f(at)}" x2="{_f(p)}" y2="{_f(at + 4)}" stroke="{BLACK}"/>')
            out.append(_text(p, at + 16, f"{v:.1f}", 10, "middle"))
        else:
            out.append(f'<line x1="{_f(at - 4)}" y1="{_f(p)}" x2="{_f(at)}" y2="{_f(p)}" stroke="{BLACK}"/>')
            out.append(_text(at - 6, p + 3, f"{v:.1f}", 10, "end"))
    return out


def histogram_svg(entry: Mapping[str, Any], samples: np.ndarray) -> str:
    """Normal-quantile panel over a relative-frequency histogram for one option."""
    oid = entry["option_id"]
    s = entry["summary"]
    base = f"options.{oid}"
    src = "summary.json"
    edges = entry["histogram"]["edges"]
    counts = entry["histogram"]["counts"]
    n = sum(counts)
    title = entry.get("name") or f"Option {oid}"
    body = [_text(WIDTH / 2, 24, f"{title}: annual thermal load (kWh/m2)", 15, "middle", "bold")]

    # top: sorted loads against normal quantiles
    x = np.sort(samples)
    m = len(x)
    z = np.array([normal_inv_cdf((i - 0.375) / (m + 0.25)) for i in range(1, m + 1)])
    qx = _Scale.padded(float(z[0]), float(z[-1]), 90, 900)
    qy = _Scale.padded(min(s["min"], entry["deterministic_kpi"]),
                       max(s["max"], entry["deterministic_kpi"]), 240, 50)
    body.append(f'<g class="panel" data-panel="quantile" {qx.attrs("x")}>')
    body.append(f'<g class="panel" data-panel="quantile" {qy.attrs("y")}>')
    body.append(f'<rect x="90" y="50" width="810" height="190" fill="none" stroke="{BLACK}"/>')
    for zi, xi in zip(z, x):
        body.append(f'<circle cx="{_f(qx(zi))}" cy="{_f(qy(xi))}" r="1.6" fill="{BLACK}"/>')
    ref0, ref1 = qx.lo, qx.hi
    body.append(f'<line x1="{_f(qx(ref0))}" y1="{_f(qy(s["mean"] + s["std"] * ref0))}" '
                f'x2="{_f(qx(ref1))}" y2="{_f(qy(s["mean"] + s["std"] * ref1))}" '
                f'stroke="{RED}" stroke-width="1"/>')
    body.append(_hline(qy(s["q50"]), 90, 900, GREEN, "median", src, f"{base}.summary.q50",
                       s["q50"], dash=True))
    for k in ("median_ci_low", "median_ci_high"):
        body.append(_hline(qy(s[k]), 90, 900, RED, k, src, f"{base}.summary.{k}", s[k], dash=True))
    body.append(_label(895, qy(s["median_ci_high"]) - 6, f"median {s['q50']:.2f}", "median", src,
                       f"{base}.summary.q50", s["q50"], GREEN, "end"))
    body.append("</g></g>")
    body.extend(_axis_ticks(qy, "y", 90))
    body.append(_text(495, 262, "normal quantile", 11, "middle"))

    # bottom: histogram
    hx = _Scale.padded(min(edges[0], entry["deterministic_kpi"]),
                       max(edges[-1], entry["deterministic_kpi"]), 90, 900)
    top = max(counts) / n if n else 1.0
    hy = _Scale(0.0, top * 1.1, 490, 300)
    body.append(f'<g class="panel" data-panel="histogram" {hx.attrs("x")}>')
    body.append(f'<rect x="90" y="300" width="810" height="190" fill="none" stroke="{BLACK}"/>')
    for lo, hi, c in zip(edges[:-1], edges[1:], counts):
        y = hy(c / n)
        body.append(f'<rect x="{_f(hx(lo))}" y="{_f(y)}" width="{_f(hx(hi) - hx(lo))}" '
                    f'height="{_f(490 - y)}" fill="#c7d7ea" stroke="{GRAY}" '
                    f'data-count="{c}"/>')
    body.append(_vline(hx(s["mean"]), 300, 490, GREEN, "mean", src, f"{base}.summary.mean",
                       s["mean"]))
    det = entry["deterministic_kpi"]
    body.append(_vline(hx(det), 300, 490, BLUE, "deterministic", src,
                       f"{base}.deterministic_kpi", det))
    body.append(_label(hx(s["mean"]) + 4, 314, f"mean {s['mean']:.2f}", "mean", src,
                       f"{base}.summary.mean", s["mean"], GREEN))
    body.append(_label(hx(det) + 4, 330, f"deterministic {det:.2f}", "deterministic", src,
                       f"{base}.deterministic_kpi", det, BLUE))
    body.append("</g>")
    body.extend(_axis_ticks(hx, "x", 490))
    nr = entry["normality"]
    body.append(_label(900, 530, f"Shapiro-Wilk W = {nr['w']:.6f}, p = {nr['p_value']:.4g}",
                       "sw_w", src, f"{base}.normality.w", nr["w"], BLACK, "end"))
    return _svg(f"Option {oid} distribution", body)


def boxplot_svg(summary: Mapping[str, Any]) -> str:
    """Quartile boxes with std marks, mean and deterministic lines per option."""
    src = "summary.json"
    entries = summary["options"]
    lo = min(min(e["summary"]["min"], e["deterministic_kpi"]) for e in entries)
    hi = max(max(e["summary"]["max"], e["deterministic_kpi"]) for e in entries)
    ys = _Scale.padded(lo, hi, 490, 60)
    slot = 810 / len(entries)
    body = [_text(WIDTH / 2, 30, "Annual thermal load (kWh/m2) by design option", 15,
                  "middle", "bold"),
            f'<g class="panel" data-panel="boxplot" {ys.attrs("y")}>',
            f'<rect x="90" y="50" width="810" height="450" fill="none" stroke="{BLACK}"/>']
    for i, e in enumerate(entries):
        s = e["summary"]
        base = f"options.{e['option_id']}"
        cx = 90 + slot * (i + 0.5)
        half = min(60.0, slot / 4)
        x0, x1 = cx - half, cx + half
        body.append(f'<rect class="annotation" data-kind="box" x="{_f(x0)}" y="{_f(ys(s["q75"]))}" '
                    f'width="{_f(2 * half)}" height="{_f(ys(s["q25"]) - ys(s["q75"]))}" '
                    f'fill="none" stroke="{BLACK}"/>')
        for k in ("q25", "q75", "q50"):
            body.append(_hline(ys(s[k]), x0, x1, BLACK, k, src, f"{base}.summary.{k}", s[k]))
        for k in ("min", "max"):
            body.append(_hline(ys(s[k]), cx - half / 2, cx + half / 2, BLACK, k, src,
                               f"{base}.summary.{k}", s[k]))
        body.append(f'<line x1="{_f(cx)}" y1="{_f(ys(s["max"]))}" x2="{_f(cx)}" '
                    f'y2="{_f(ys(s["q75"]))}" stroke="{BLACK}"/>')
        body.append(f'<line x1="{_f(cx)}" y1="{_f(ys(s["q25"]))}" x2="{_f(cx)}" '
                    f'y2="{_f(ys(s["min"]))}" stroke="{BLACK}"/>')
        body.append(_hline(ys(s["mean"]), x0 - 10, x1 + 10, GREEN, "mean", src,
                           f"{base}.summary.mean", s["mean"]))
        det = e["deterministic_kpi"]
        body.append(_hline(ys(det), x0 - 10, x1 + 10, BLUE, "deterministic", src,
                           f"{base}.deterministic_kpi", det))
        sx = x1 + 16
        body.append(_annotation("std", src, f"{base}.summary.std", s["std"], "line")
                    + f' x1="{_f(sx)}" y1="{_f(ys(s["mean"] + s["std"]))}" x2="{_f(sx)}"'
                    f' y2="{_f(ys(s["mean"] - s["std"]))}" stroke="{RED}" stroke-width="3"/>')
        body.append(_label(cx, 518, f"Option {e['option_id']}", "option", src,
                           f"{base}.option_id", e["option_id"], BLACK, "middle"))
        body.append(_label(cx, 532, f"mean {s['mean']:.2f} / det {det:.2f}", "mean", src,
                           f"{base}.summary.mean", s["mean"], GREEN, "middle"))
    body.append("</g>")
    body.extend(_axis_ticks(ys, "y", 90))
    return _svg("Box plot of annual thermal load", body)


def criteria_svg(ranking: Mapping[str, Any]) -> str:
    """Min / mean / max and deterministic KPI per option, with each criterion's order."""
    src = "ranking.json"
    rows = ranking["risk_report"]
    lo = min(min(r["min"], r["deterministic_kpi"]) for r in rows)
    hi = max(max(r["max"], r["deterministic_kpi"]) for r in rows)
    xs = _Scale.padded(lo, hi, 200, 900)
    band = 300 / len(rows)
    body = [_text(WIDTH / 2, 30, "Decision criteria: best case, expected value, worst case", 15,
                  "middle", "bold"),
            f'<g class="panel" data-panel="criteria" {xs.attrs("x")}>']
    for i, r in enumerate(rows):
        oid = r["option_id"]
        base = f"risk_report.{oid}"
        y = 70 + band * (i + 0.5)
        body.append(_text(190, y + 4, f"Option {oid}", 12, "end"))
        body.append(f'<line x1="{_f(xs(r["min"]))}" y1="{_f(y)}" x2="{_f(xs(r["max"]))}" '
                    f'y2="{_f(y)}" stroke="{GRAY}" stroke-width="2"/>')
        for k, color, kind in (("min", BLACK, "min"), ("kri_mean", GREEN, "mean"),
                               ("max", BLACK, "max"), ("deterministic_kpi", BLUE, "deterministic")):
            body.append(_vline(xs(r[k]), y - 10, y + 10, color, kind, src, f"{base}.{k}", r[k]))
        body.append(_label(xs(r["min"]), y - 14, f"{r['min']:.2f}", "min", src, f"{base}.min",
                           r["min"], BLACK, "middle"))
        body.append(_label(xs(r["kri_mean"]), y + 24, f"{r['kri_mean']:.2f}", "mean", src,
                           f"{base}.kri_mean", r["kri_mean"], GREEN, "middle"))
        body.append(_label(xs(r["max"]), y - 14, f"{r['max']:.2f}", "max", src, f"{base}.max",
                           r["max"], BLACK, "middle"))
    body.append("</g>")
    body.extend(_axis_ticks(xs, "x", 380))
    y = 420
    titles = {"deterministic": "Deterministic", "expected_value": "Expected value",
              "maximax": "Maximax (best case)", "maximin": "Maximin (worst case)"}
    for c, r in ranking["rankings"].items():
        order = " > ".join(f"O{o}" for o in r["order"])
        body.append(_text(200, y, f"{titles.get(c, c)}: {order}", 13))
        x = 520
        for o in r["order"]:
            v = r["scores"][str(o)]
            body.append(_label(x, y, f"O{o}={v:.2f}", "score", src, f"rankings.{c}.scores.{o}", v))
            x += 95
        y += 22
    return _svg("Decision criteria", body)


def text_summary(summary: Mapping[str, Any], ranking: Mapping[str, Any]) -> str:
    lines = ["option  y_det      mean       std       min        max        W         p        normal?"]
    for e in summary["options"]:
        s, nr = e["summary"], e["normality"]
        lines.append(
            f"{e['option_id']:>6}  {e['deterministic_kpi']:<9.2f}  {s['mean']:<9.2f}  "
            f"{s['std']:<8.2f}  {s['min']:<9.2f}  {s['max']:<9.2f}  {nr['w']:<8.6f}  "
            f"{nr['p_value']:<7.4f}  {'rejected' if nr['reject_normality'] else 'not rejected'}"
            f"  (y_det in quartile {e['deterministic_quartile']})")
    lines.append("")
    for c, r in ranking["rankings"].items():
        lines.append(f"{c:>15}: " + " > ".join(str(o) for o in r["order"]))
    return "\n".join(lines)


def render_run(run_dir: Path) -> tuple[list[Path], str]:
    """Write plots/*.svg for a completed run; return the files and a text summary."""
    run_dir = Path(run_dir)
    if not run_dir.is_dir():
        raise ArtifactError(f"run directory not found: {run_dir}")
    summary = read_json(run_dir / "summary.json")
    ranking = read_json(run_dir / "ranking.json")
    results = read_results_csv(run_dir / "results.csv")
    if summary.get("mode") != "monte_carlo":
        raise ArtifactError(f"{run_dir}: no Monte Carlo results to plot")
    plots = run_dir / "plots"
    plots.mkdir(exist_ok=True)
    written = []
    try:
        for e in summary["options"]:
            oid = e["option_id"]
            if oid not in results:
                raise ArtifactError(f"results.csv lacks option {oid}")
            p = plots / f"histogram_option{oid}.svg"
            p.write_text(histogram_svg(e, results[oid]))
            written.append(p)
        p = plots / "boxplot.svg"
        p.write_text(boxplot_svg(summary))
        written.append(p)
        p = plots / "criteria.svg"
        p.write_text(criteria_svg(ranking))
        written.append(p)
    except (KeyError, TypeError, StopIteration) as exc:
        raise ArtifactError(f"corrupt run artifacts in {run_dir}: {exc!r}") from None
    return written, text_summary(summary, ranking)
