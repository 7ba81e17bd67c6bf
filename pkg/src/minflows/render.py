"""Static pictures of blueprint levels: ASCII over Z, SVG over Z^2."""
from __future__ import annotations

from .blueprint import Blueprint
from .errors import ConfigError
from .group_core import IntegerLattice


def _lattice_dim(bp: Blueprint) -> int:
    G = bp.exh.group
    if not isinstance(G, IntegerLattice) or G.dim not in (1, 2):
        raise ConfigError(f"rendering needs Z or Z^2, got {G.describe()}")
    return G.dim


def render_ascii(bp: Blueprint) -> str:
    """One row of marks per level, then a row of A_k-translate brackets."""
    if _lattice_dim(bp) != 1:
        raise ConfigError("ASCII rendering is for Z")
    AN = bp.exh.A[bp.N]
    lo = min(AN.members)
    hi = max(AN.members)
    width = hi - lo + 1
    lines = [f"window A_{bp.N} = [{lo}, {hi}]"]
    for k in range(bp.N, -1, -1):
        marks = ["."] * width
        boxes = [" "] * width
        Ak = bp.exh.A[k].members
        for g in bp.levels[k]:
            marks[g - lo] = "#"
            left, right = g + min(Ak), g + max(Ak)
            for x in range(max(left, lo), min(right, hi) + 1):
                boxes[x - lo] = "-"
            if lo <= left <= hi:
                boxes[left - lo] = "["
            if lo <= right <= hi:
                boxes[right - lo] = "]" if right != left else "|"
        lines.append(f"S({k}) " + "".join(marks))
        lines.append(f"A_{k}g " + "".join(boxes))
    return "\n".join(lines) + "\n"


_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]


def render_svg(bp: Blueprint, cell: int = 10) -> str:
    """Levels as coloured dots, each with the bounding box of A_k g."""
    if _lattice_dim(bp) != 2:
        raise ConfigError("SVG rendering is for Z^2")
    AN = bp.exh.A[bp.N].members
    xs = [p[0] for p in AN]
    ys = [p[1] for p in AN]
    x0, y0 = min(xs), min(ys)
    w = (max(xs) - x0 + 1) * cell
    h = (max(ys) - y0 + 1) * cell

    def px(p):
        return (p[0] - x0) * cell, (max(ys) - p[1]) * cell

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
        f'<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>',
    ]
    for p in sorted(AN):
        x, y = px(p)
        out.append(f'<rect x="{x}" y="{y}" width="{cell}" height="{cell}" fill="#f2f2f2" stroke="#dddddd" stroke-width="0.5"/>')
    for k in range(bp.N + 1):
        color = _COLORS[k % len(_COLORS)]
        Ak = bp.exh.A[k].members
        ax = [a[0] for a in Ak]
        ay = [a[1] for a in Ak]
        for g in bp.levels[k]:
            left, top = px((g[0] + min(ax), g[1] + max(ay)))
            bw = (max(ax) - min(ax) + 1) * cell
            bh = (max(ay) - min(ay) + 1) * cell
            out.append(f'<rect x="{left}" y="{top}" width="{bw}" height="{bh}" fill="none" stroke="{color}" stroke-width="1"/>')
            cx, cy = px(g)
            r = cell * (0.2 + 0.1 * k)
            out.append(f'<circle cx="{cx + cell / 2}" cy="{cy + cell / 2}" r="{r:.1f}" fill="{color}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render(bp: Blueprint) -> tuple[str, str]:
    """(file suffix, contents) for the blueprint's group."""
    if _lattice_dim(bp) == 1:
        return ".txt", render_ascii(bp)
    return ".svg", render_svg(bp)
