"""SVG snapshots of a decomposition.

Cell-free style draws users as circles and APs as triangles, one colour per
subnetwork, with switched-off APs hollow. Single-cell style draws the cell
disc with one sector per beam; inactive beams are dashed.
"""
from __future__ import annotations

import math
from xml.sax.saxutils import quoteattr

import numpy as np

from .graph import Partition
from .topology import SQUARE, Topology, beam_directions

PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2",
    "#17becf", "#bcbd22", "#7f7f7f", "#393b79", "#637939", "#8c6d31", "#843c39",
    "#7b4173", "#3182bd", "#e6550d", "#31a354", "#756bb1", "#636363",
)
CANVAS = 600.0
MARGIN = 20.0


def color(label: int) -> str:
    return PALETTE[label % len(PALETTE)]


def _header(title: str) -> list[str]:
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{CANVAS:g}" height="{CANVAS:g}" '
        f'viewBox="0 0 {CANVAS:g} {CANVAS:g}">',
        f"<title>{title}</title>",
        f'<rect width="{CANVAS:g}" height="{CANVAS:g}" fill="white"/>',
    ]


def _mapper(topology: Topology):
    region = topology.region
    if region.shape == SQUARE:
        lo, span = np.zeros(2), region.size
    else:
        lo, span = -np.full(2, region.size), 2 * region.size
    scale = (CANVAS - 2 * MARGIN) / span

    def to_px(p):
        x = MARGIN + (p[0] - lo[0]) * scale
        y = CANVAS - MARGIN - (p[1] - lo[1]) * scale  # y axis up
        return x, y

    return to_px, scale


def _check(topology: Topology, partition: Partition):
    if partition.K != topology.K or partition.N != topology.N:
        raise ValueError("partition does not match the topology's users and beams")


def _idle(partition: Partition) -> np.ndarray:
    """Per-subnetwork flag: contains no user."""
    return np.bincount(partition.user_labels, minlength=partition.M) == 0


def _users(partition: Partition, topology: Topology, to_px) -> list[str]:
    out = []
    for k, p in enumerate(topology.user_positions):
        x, y = to_px(p)
        m = int(partition.user_labels[k])
        out.append(f'<circle class="user" data-subnetwork="{m}" cx="{x:.2f}" cy="{y:.2f}" r="4" '
                   f'fill="none" stroke="{color(m)}" stroke-width="1.5"/>')
    return out


def render_cellfree(topology: Topology, partition: Partition) -> str:
    _check(topology, partition)
    to_px, _ = _mapper(topology)
    idle = _idle(partition)
    lines = _header(f"{partition.M} subnetworks")
    owner = topology.beam_owner
    for l, p in enumerate(topology.ap_positions):
        beams = np.flatnonzero(owner == l)
        labels = partition.beam_labels[beams]
        m = int(labels[0])
        off = bool(np.all(idle[labels]))
        x, y = to_px(p)
        pts = f"{x:.2f},{y - 6:.2f} {x - 5.5:.2f},{y + 4:.2f} {x + 5.5:.2f},{y + 4:.2f}"
        fill = "none" if off else color(m)
        cls = "ap off" if off else "ap"
        lines.append(f'<polygon class="{cls}" data-subnetwork="{m}" points="{pts}" '
                     f'fill="{fill}" stroke="{color(m)}" stroke-width="1.5"/>')
    lines += _users(partition, topology, to_px)
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def _wedge(cx, cy, radius, a0, a1, steps=12) -> str:
    pts = [(cx, cy)]
    for t in np.linspace(a0, a1, steps):
        pts.append((cx + radius * math.cos(t), cy - radius * math.sin(t)))
    return " ".join(f"{x:.2f},{y:.2f}" for x, y in pts)


def render_singlecell(topology: Topology, partition: Partition) -> str:
    _check(topology, partition)
    if topology.L != 1:
        raise ValueError("single-cell snapshot needs exactly one AP")
    to_px, scale = _mapper(topology)
    idle = _idle(partition)
    N = topology.N
    cx, cy = to_px(topology.ap_positions[0])
    radius = topology.region.size * scale
    lines = _header(f"{partition.M} subnetworks")
    lines.append(f'<circle class="cell" cx="{cx:.2f}" cy="{cy:.2f}" r="{radius:.2f}" '
                 f'fill="none" stroke="black"/>')
    centers = beam_directions(N)
    half = 1.0 / N
    for n, c in enumerate(centers):
        m = int(partition.beam_labels[n])
        off = bool(idle[m])
        a_lo = math.acos(min(1.0, c + half))
        a_hi = math.acos(max(-1.0, c - half))
        style = (f'fill="none" stroke="{color(m)}" stroke-dasharray="4,3"' if off
                 else f'fill="{color(m)}" fill-opacity="0.25" stroke="{color(m)}"')
        cls = quoteattr("beam inactive" if off else "beam")
        # a horizontal linear array radiates symmetrically about its axis
        for sign in (1.0, -1.0):
            pts = _wedge(cx, cy, radius, sign * a_lo, sign * a_hi)
            lines.append(f'<polygon class={cls} data-beam="{n}" data-subnetwork="{m}" '
                         f'points="{pts}" {style}/>')
    lines += _users(partition, topology, to_px)
    lines.append(f'<polygon class="ap" points="{cx:.2f},{cy - 6:.2f} {cx - 5.5:.2f},{cy + 4:.2f} '
                 f'{cx + 5.5:.2f},{cy + 4:.2f}" fill="black"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def render_snapshot(topology: Topology, partition: Partition, style: str = "cellfree") -> str:
    if style == "cellfree":
        return render_cellfree(topology, partition)
    if style == "singlecell":
        return render_singlecell(topology, partition)
    raise ValueError(f"unknown snapshot style {style!r}")
