"""Minimal SVG emitter for semilog BER-vs-SNR plots."""
import math
from xml.sax.saxutils import escape

WIDTH, HEIGHT = 640, 480
LEFT, RIGHT, TOP, BOTTOM = 70, 20, 20, 60
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
          "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#000000")


def _nice_step(span):
    raw = span / 8 if span > 0 else 1.0
    mag = 10 ** math.floor(math.log10(raw))
    for m in (1, 2, 2.5, 5, 10):
        if m * mag >= raw:
            return m * mag
    return 10 * mag


def semilogy(curves, title=None):
    """Render ``[(label, snr_list, ber_list), ...]`` as an SVG document.

    Points with BER <= 0 are dropped; a curve left with no points still
    gets an (empty) polyline and its legend entry.
    """
    kept = [(label, [(s, b) for s, b in zip(snr, ber) if b > 0]) for label, snr, ber in curves]
    xs = [s for _, pts in kept for s, _ in pts] or [s for _, snr, _ in curves for s in snr] or [0.0, 1.0]
    ys = [b for _, pts in kept for _, b in pts] or [1e-6, 1.0]
    x0, x1 = min(xs), max(xs)
    if x1 == x0:
        x0, x1 = x0 - 1, x1 + 1
    d0 = math.floor(math.log10(min(ys)))
    d1 = min(0, math.ceil(math.log10(max(ys))))
    if d1 <= d0:
        d1 = d0 + 1
    pw, ph = WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM

    def px(s):
        return LEFT + (s - x0) / (x1 - x0) * pw

    def py(b):
        return TOP + (d1 - math.log10(b)) / (d1 - d0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="white" stroke="black"/>',
    ]
    if title:
        out.append(f'<title>{escape(title)}</title>')
    for d in range(d0, d1 + 1):
        y = py(10.0 ** d)
        out.append(f'<line x1="{LEFT}" y1="{y:.2f}" x2="{LEFT + pw}" y2="{y:.2f}" stroke="#ddd"/>')
        out.append(f'<text x="{LEFT - 6}" y="{y + 4:.2f}" text-anchor="end">1e{d}</text>')
    step = _nice_step(x1 - x0)
    tick = math.ceil(x0 / step) * step
    while tick <= x1 + 1e-9:
        x = px(tick)
        out.append(f'<line x1="{x:.2f}" y1="{TOP}" x2="{x:.2f}" y2="{TOP + ph}" stroke="#ddd"/>')
        out.append(f'<text x="{x:.2f}" y="{TOP + ph + 16}" text-anchor="middle">{tick:g}</text>')
        tick += step
    out.append(f'<text x="{LEFT + pw / 2}" y="{HEIGHT - 15}" text-anchor="middle">SNR (dB)</text>')
    out.append(f'<text x="16" y="{TOP + ph / 2}" text-anchor="middle" '
               f'transform="rotate(-90 16 {TOP + ph / 2})">BER</text>')
    for i, (label, pts) in enumerate(kept):
        color = COLORS[i % len(COLORS)]
        coords = " ".join(f"{px(s):.2f},{py(b):.2f}" for s, b in pts)
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{coords}"/>')
        for s, b in pts:
            out.append(f'<circle cx="{px(s):.2f}" cy="{py(b):.2f}" r="2.5" fill="{color}"/>')
        ly = TOP + 14 + 16 * i
        lx = LEFT + pw - 130
        out.append(f'<g class="legend"><line x1="{lx}" y1="{ly - 4}" x2="{lx + 20}" y2="{ly - 4}" '
                   f'stroke="{color}" stroke-width="2"/><text x="{lx + 26}" y="{ly}">{escape(label)}</text></g>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
