"""Static SVG line charts of experiment results, one file per bias level."""

from __future__ import annotations

from pathlib import Path
from xml.sax.saxutils import escape

from .simulation import ExperimentTable

COLORS = {"lwa": "#1f77b4", "owa": "#ff7f0e", "jwa": "#2ca02c", "owawa": "#d62728", "sdowa": "#9467bd"}
WIDTH, HEIGHT = 480, 360
LEFT, RIGHT, TOP, BOTTOM = 60, 90, 40, 50


def panel_svg(table: ExperimentTable, delta: float, y_range: tuple[float, float] | None = None) -> str:
    """Mean MSE against validity set, one ``<polyline>`` per operator."""
    sets = table.sets
    rows = [r for r in table if r.delta == delta]
    if y_range is None:
        vals = [r.mean_mse for r in table]
        y_range = (min(vals), max(vals))
    lo, hi = y_range
    if hi <= lo:
        hi = lo + 1.0
    plot_w, plot_h = WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM

    def sx(i):
        return LEFT + (plot_w * i / (len(sets) - 1) if len(sets) > 1 else plot_w / 2)

    def sy(v):
        return TOP + plot_h * (hi - v) / (hi - lo)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<text x="{WIDTH / 2:.1f}" y="20" text-anchor="middle" font-size="14">'
        f"bias delta = {delta:g}</text>",
        f'<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="#888"/>',
    ]
    for i, s in enumerate(sets):
        out.append(f'<text x="{sx(i):.1f}" y="{TOP + plot_h + 18}" text-anchor="middle" font-size="11">{s}</text>')
    for frac in (0.0, 0.5, 1.0):
        v = lo + frac * (hi - lo)
        out.append(f'<text x="{LEFT - 6}" y="{sy(v) + 4:.1f}" text-anchor="end" font-size="11">{v:.2f}</text>')
    out.append(f'<text x="{LEFT + plot_w / 2:.1f}" y="{HEIGHT - 10}" text-anchor="middle" font-size="12">validity set</text>')
    out.append(f'<text x="15" y="{TOP + plot_h / 2:.1f}" font-size="12" '
               f'transform="rotate(-90 15 {TOP + plot_h / 2:.1f})" text-anchor="middle">mean MSE</text>')
    for j, op in enumerate(table.operators):
        by_set = {r.set: r.mean_mse for r in rows if r.operator == op}
        pts = " ".join(f"{sx(i):.2f},{sy(by_set[s]):.2f}" for i, s in enumerate(sets) if s in by_set)
        color = COLORS.get(op, "#000")
        out.append(f'<polyline data-operator="{escape(op)}" points="{pts}" fill="none" stroke="{color}" stroke-width="2"/>')
        ly = TOP + 14 + 16 * j
        out.append(f'<line x1="{WIDTH - RIGHT + 8}" y1="{ly}" x2="{WIDTH - RIGHT + 28}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{WIDTH - RIGHT + 32}" y="{ly + 4}" font-size="11">{escape(op.upper())}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_panels(table: ExperimentTable, directory) -> list[Path]:
    """Write ``mse_delta_<delta>.svg`` for every bias level on a shared y-axis."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    vals = [r.mean_mse for r in table]
    y_range = (min(vals), max(vals))
    paths = []
    for delta in table.deltas:
        path = directory / f"mse_delta_{delta:g}.svg"
        path.write_text(panel_svg(table, delta, y_range), encoding="utf-8")
        paths.append(path)
    return paths
