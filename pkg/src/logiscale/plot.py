"""Standalone SVG figure of relative excess loss over calendar time.

One ``<polyline>`` per doubling rate. Point coordinates are an affine map
of ``(t, excess_loss(t))`` written in shortest round-trip form, so the
plotted values can be recovered exactly with :func:`data_from_screen`.
Curves leaving the y window are clipped by the SVG, not by editing points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from os import PathLike
from pathlib import Path
from xml.sax.saxutils import escape

from .errors import InputError
from .lawcore import _require_positive
from .projection import DynamicsParams, excess_loss
from .runlog import format_number

WIDTH, HEIGHT = 720, 460
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 72, 24, 20, 56
PLOT_W = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
PLOT_H = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

X_LABEL = "time t (years)"
Y_LABEL = "relative excess loss X(t)"

# (stroke, dasharray) by rate; unknown rates cycle through _FALLBACK
_STYLE = {0.0: ("#4d4d4d", "6 4"), 0.25: ("#d62728", None), 0.5: ("#1f3fbf", None), 1.0: ("#000000", None)}
_FALLBACK = ["#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#17becf", "#bcbd22"]


@dataclass(frozen=True)
class PlotSpec:
    """Figure parameters; the defaults reproduce the reference figure."""

    kappa: float = 0.063
    rates: tuple[float, ...] = (0.0, 0.25, 0.5, 1.0)
    t_max: float = 20.0
    samples: int = 201
    x_window: tuple[float, float] = (0.55, 1.02)

    def __post_init__(self):
        _require_positive("kappa", self.kappa)
        _require_positive("t_max", self.t_max)
        rates = tuple(float(r) for r in self.rates)
        if not rates:
            raise InputError("at least one rate is required")
        if len(set(rates)) != len(rates):
            raise InputError(f"rates must be distinct, got {rates}")
        if any(not math.isfinite(r) or r < 0 for r in rates):
            raise InputError(f"rates must be finite and >= 0, got {rates}")
        object.__setattr__(self, "rates", rates)
        if int(self.samples) != self.samples or self.samples < 2:
            raise InputError(f"samples must be an integer >= 2, got {self.samples!r}")
        lo, hi = self.x_window
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise InputError(f"x_window must be increasing, got {self.x_window}")

    def times(self) -> list[float]:
        n = int(self.samples)
        # endpoints exact: t_max * (n-1)/(n-1) == t_max
        return [self.t_max * i / (n - 1) for i in range(n)]


def sample_curves(spec: PlotSpec) -> list[tuple[float, list[float], list[float]]]:
    """``(rate, times, excess)`` for every rate in the spec."""
    ts = spec.times()
    curves = []
    for rate in spec.rates:
        dyn = DynamicsParams(e0=1.0, p0=1.0, beta_dbl=rate, kappa=spec.kappa)
        curves.append((rate, ts, [excess_loss(dyn, t) for t in ts]))
    return curves


def screen_from_data(spec: PlotSpec, t: float, x: float) -> tuple[float, float]:
    lo, hi = spec.x_window
    return (
        MARGIN_LEFT + t / spec.t_max * PLOT_W,
        MARGIN_TOP + (hi - x) / (hi - lo) * PLOT_H,
    )


def data_from_screen(spec: PlotSpec, px: float, py: float) -> tuple[float, float]:
    """Inverse of :func:`screen_from_data`."""
    lo, hi = spec.x_window
    return (
        (px - MARGIN_LEFT) / PLOT_W * spec.t_max,
        hi - (py - MARGIN_TOP) / PLOT_H * (hi - lo),
    )


def _nice_ticks(lo: float, hi: float, target: int = 5) -> list[float]:
    raw = (hi - lo) / target
    mag = 10.0 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw)
    first = math.ceil(lo / step - 1e-9)
    ticks = []
    k = first
    while k * step <= hi + 1e-9 * step:
        ticks.append(round(k * step, 12))
        k += 1
    return ticks


def _tick_label(v: float) -> str:
    return f"{v:g}"


def _rate_label(rate: float) -> str:
    return f"β = {rate:g} doublings/yr"


def render_svg(spec: PlotSpec) -> str:
    """SVG document for ``spec`` as a string."""
    lo, hi = spec.x_window
    x0, y0 = MARGIN_LEFT, MARGIN_TOP
    x1, y1 = MARGIN_LEFT + PLOT_W, MARGIN_TOP + PLOT_H
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f"<title>{escape(Y_LABEL)}, kappa = {spec.kappa:g}</title>",
        "<defs>",
        f'<clipPath id="plot-area"><rect x="{x0}" y="{y0}" width="{PLOT_W}" height="{PLOT_H}"/></clipPath>',
        "</defs>",
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>',
        '<g class="grid" stroke="#e0e0e0" stroke-width="0.5">',
    ]
    t_ticks = _nice_ticks(0.0, spec.t_max)
    x_ticks = [v for v in _nice_ticks(lo, hi) if lo <= v <= hi]
    for t in t_ticks:
        px, _ = screen_from_data(spec, t, hi)
        out.append(f'<line x1="{px:.3f}" y1="{y0}" x2="{px:.3f}" y2="{y1}"/>')
    for v in x_ticks:
        _, py = screen_from_data(spec, 0.0, v)
        out.append(f'<line x1="{x0}" y1="{py:.3f}" x2="{x1}" y2="{py:.3f}"/>')
    out.append("</g>")
    out.append(f'<rect x="{x0}" y="{y0}" width="{PLOT_W}" height="{PLOT_H}" fill="none" stroke="#000000"/>')

    out.append('<g class="ticks" text-anchor="middle">')
    for t in t_ticks:
        px, _ = screen_from_data(spec, t, hi)
        out.append(f'<text x="{px:.3f}" y="{y1 + 18}">{_tick_label(t)}</text>')
    out.append("</g>")
    out.append('<g class="ticks" text-anchor="end">')
    for v in x_ticks:
        _, py = screen_from_data(spec, 0.0, v)
        out.append(f'<text x="{x0 - 6}" y="{py + 4:.3f}">{_tick_label(v)}</text>')
    out.append("</g>")
    out.append(
        f'<text class="xlabel" x="{x0 + PLOT_W / 2:g}" y="{HEIGHT - 14}" text-anchor="middle">'
        f"{escape(X_LABEL)}</text>"
    )
    cy = y0 + PLOT_H / 2
    out.append(
        f'<text class="ylabel" x="18" y="{cy:g}" text-anchor="middle" '
        f'transform="rotate(-90 18 {cy:g})">{escape(Y_LABEL)}</text>'
    )

    out.append('<g class="curves" clip-path="url(#plot-area)" fill="none" stroke-width="2">')
    legend = []
    for i, (rate, ts, xs) in enumerate(sample_curves(spec)):
        stroke, dash = _STYLE.get(rate, (_FALLBACK[i % len(_FALLBACK)], None))
        pts = " ".join(
            f"{format_number(px)},{format_number(py)}"
            for px, py in (screen_from_data(spec, t, x) for t, x in zip(ts, xs))
        )
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        out.append(
            f'<polyline data-rate="{format_number(rate)}" stroke="{stroke}"{dash_attr} points="{pts}"/>'
        )
        legend.append((rate, stroke, dash_attr))
    out.append("</g>")

    out.append('<g class="legend">')
    lx, ly = x1 - 210, y0 + 18
    for j, (rate, stroke, dash_attr) in enumerate(legend):
        yy = ly + 18 * j
        out.append(
            f'<line x1="{lx}" y1="{yy}" x2="{lx + 28}" y2="{yy}" stroke="{stroke}" stroke-width="2"{dash_attr}/>'
        )
        out.append(f'<text x="{lx + 36}" y="{yy + 4}">{escape(_rate_label(rate))}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_plot(spec: PlotSpec, path: str | PathLike) -> str:
    """Write the figure to ``path`` and return the document.

    Raises:
        OSError: ``path`` is not writable.
    """
    doc = render_svg(spec)
    Path(path).write_text(doc, encoding="utf-8", newline="\n")
    return doc
