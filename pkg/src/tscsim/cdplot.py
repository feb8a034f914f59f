"""Critical difference diagrams as plain SVG.

The rank axis runs from 1 (left, best) to k. Each classifier gets a tick
line from its mean rank down to a text label; the better half is labelled
on the left and the worse half on the right. Each clique with more than one
member is drawn as a thick bar spanning its members' mean ranks.

Coordinates are printed with two decimals so identical inputs always give
identical bytes.
"""

import math
from xml.sax.saxutils import escape

__all__ = ["render_cd_diagram"]

WIDTH = 800
AXIS_LEFT = 220.0
AXIS_RIGHT = 580.0
AXIS_Y = 50.0
ROW_GAP = 22.0
BAR_GAP = 9.0


def _f(v):
    return f"{v:.2f}"


def render_cd_diagram(summary, cliques, destination=None, title=None):
    """Draw the diagram for a :class:`~tscsim.stats.RankSummary`.

    Parameters
    ----------
    summary : RankSummary
    cliques : CliqueSet or list of index tuples
    destination : str or path, optional
        Where to write the SVG.
    title : str, optional

    Returns
    -------
    str
        The SVG document.
    """
    names = list(summary.names)
    k = len(names)
    if k < 2:
        raise ValueError("a critical difference diagram needs at least two classifiers")
    groups = getattr(cliques, "cliques", cliques)
    bars = [tuple(c) for c in groups if len(c) > 1]
    ranks = [float(r) for r in summary.mean_rank]

    def x_of(rank):
        return AXIS_LEFT + (rank - 1.0) / (k - 1) * (AXIS_RIGHT - AXIS_LEFT)

    order = summary.order()
    n_left = math.ceil(k / 2)
    rows_top = AXIS_Y + 24.0 + BAR_GAP * len(bars)
    height = rows_top + ROW_GAP * n_left + 16.0

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" '
        f'height="{_f(height)}" viewBox="0 0 {WIDTH} {_f(height)}" font-family="sans-serif" font-size="12">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    if title:
        out.append(f'<text class="title" x="{WIDTH / 2:.2f}" y="16.00" text-anchor="middle">{escape(title)}</text>')
    out.append(
        f'<line class="axis" x1="{_f(AXIS_LEFT)}" y1="{_f(AXIS_Y)}" x2="{_f(AXIS_RIGHT)}" '
        f'y2="{_f(AXIS_Y)}" stroke="black" stroke-width="1"/>'
    )
    for r in range(1, k + 1):
        x = x_of(r)
        out.append(f'<line class="tickmark" x1="{_f(x)}" y1="{_f(AXIS_Y - 5)}" x2="{_f(x)}" y2="{_f(AXIS_Y)}" stroke="black"/>')
        out.append(f'<text class="tick" x="{_f(x)}" y="{_f(AXIS_Y - 9)}" text-anchor="middle">{r}</text>')

    for b, members in enumerate(bars):
        lo = min(ranks[i] for i in members)
        hi = max(ranks[i] for i in members)
        y = AXIS_Y + 14.0 + BAR_GAP * b
        out.append(
            f'<line class="clique" x1="{_f(x_of(lo) - 4)}" y1="{_f(y)}" x2="{_f(x_of(hi) + 4)}" '
            f'y2="{_f(y)}" stroke="black" stroke-width="4"/>'
        )

    for pos, idx in enumerate(order):
        x = x_of(ranks[idx])
        label = f"{escape(names[idx])} ({ranks[idx]:.2f})"
        if pos < n_left:
            y = rows_top + ROW_GAP * pos
            end, anchor, tx = AXIS_LEFT - 12.0, "end", AXIS_LEFT - 16.0
        else:
            y = rows_top + ROW_GAP * (k - 1 - pos)
            end, anchor, tx = AXIS_RIGHT + 12.0, "start", AXIS_RIGHT + 16.0
        out.append(
            f'<polyline class="leader" points="{_f(x)},{_f(AXIS_Y)} {_f(x)},{_f(y)} {_f(end)},{_f(y)}" '
            f'fill="none" stroke="black" stroke-width="1"/>'
        )
        out.append(f'<text class="label" x="{_f(tx)}" y="{_f(y + 4)}" text-anchor="{anchor}">{label}</text>')
    out.append("</svg>")
    svg = "\n".join(out) + "\n"
    if destination is not None:
        with open(destination, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(svg)
    return svg
