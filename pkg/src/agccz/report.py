"""Instance reports: a full sweep over logical triples and patterns written
as CSV, with matplotlib figures rendered to files alongside, and a manifest
embedding the artifact hashes, seed and tool version."""

from __future__ import annotations

import csv
import itertools
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from . import __version__
from .artifacts import css_from_dict, load_json, save_json, sha256_of
from .errors import ConfigError
from .scheduler import greedy_schedule
from .synth import synth
from .verifier import verify_logical_ccz

PATTERN_ORDER = ["intra", "two_block", "three_block"]


def sweep_rows(css, gammas):
    rows = []
    for pattern in PATTERN_ORDER:
        for (A, B, C) in itertools.product(range(1, css.k + 1), repeat=3):
            for gamma in gammas:
                gl = synth(css, pattern, A, B, C, gamma)
                sched = greedy_schedule(gl)
                cert = verify_logical_ccz(css, gl)
                rows.append({
                    "pattern": pattern,
                    "A": A, "B": B, "C": C,
                    "gamma": f"{gamma:#x}",
                    "gates": len(gl),
                    "depth": sched.depth,
                    "verified": cert.result,
                })
    return rows


def fig_depth_by_pattern(rows, path):
    fig, ax = plt.subplots(figsize=(5, 3.2))
    for i, pattern in enumerate(PATTERN_ORDER):
        depths = [r["depth"] for r in rows if r["pattern"] == pattern]
        ax.bar([i], [max(depths)], width=0.5, label=f"{pattern} (max)", color=f"C{i}")
        ax.plot([i], [np.mean(depths)], "k_", markersize=20)
    ax.set_xticks(range(len(PATTERN_ORDER)))
    ax.set_xticklabels(PATTERN_ORDER)
    ax.set_ylabel("circuit depth")
    ax.set_title("schedule depth by pattern (bar max, tick mean)")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def fig_gate_counts(rows, k, path):
    fig, ax = plt.subplots(figsize=(5, 3.2))
    counts = []
    for A in range(1, k + 1):
        vals = [r["gates"] for r in rows if r["pattern"] == "intra" and r["A"] == A]
        counts.append(np.mean(vals))
    ax.bar(range(1, k + 1), counts, color="C0")
    ax.set_xlabel("logical index A")
    ax.set_ylabel("mean gate count")
    ax.set_title("gates per intra-block list by addressed row")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def fig_fiber_map(curve_dict, path):
    xs = [int(p["x"], 16) for p in curve_dict["places"]]
    ys = [int(p["y"], 16) for p in curve_dict["places"]]
    fibers = [p["fiber"] for p in curve_dict["places"]]
    beta = set(curve_dict["fibers"][str(curve_dict["distinguished_fiber"])])
    is_beta = [p["id"] in beta for p in curve_dict["places"]]
    fig, ax = plt.subplots(figsize=(4.2, 4.2))
    ax.scatter(xs, ys, c=fibers, cmap="viridis", s=36, label="alpha places")
    bx = [x for x, b in zip(xs, is_beta) if b]
    by = [y for y, b in zip(ys, is_beta) if b]
    ax.scatter(bx, by, facecolors="none", edgecolors="red", s=140, label="beta fiber")
    ax.set_xlabel("x representative")
    ax.set_ylabel("y representative")
    ax.set_title("places by fiber")
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def fig_layer_sizes(css, path):
    gl = synth(css, "intra", 1, min(2, css.k), min(3, css.k), 1)
    sched = greedy_schedule(gl)
    sizes = [len(layer) for layer in sched.layers]
    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.bar(range(1, len(sizes) + 1), sizes, color="C2")
    ax.set_xlabel("layer")
    ax.set_ylabel("gates in layer")
    ax.set_title("greedy layer occupancy (representative intra list)")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def write_report(css_path, curve_path=None, out_dir=Path("."), seed: int = 0):
    out_dir = Path(out_dir)
    css_dict = load_json(css_path)
    css = css_from_dict(css_dict)
    if curve_path is None and css_dict.get("curve_ref"):
        candidate = Path(css_path).parent / css_dict["curve_ref"]["path"]
        if candidate.exists():
            curve_path = candidate
    if curve_path is None:
        raise ConfigError("no curve artifact found; pass --curve")
    curve_dict = load_json(curve_path)

    gammas = [1, css.gf.nonsubfield_element()]
    rows = sweep_rows(css, gammas)

    csv_path = out_dir / "report.csv"
    with open(csv_path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)

    figures = {
        "depth_by_pattern.png": lambda p: fig_depth_by_pattern(rows, p),
        "gate_counts.png": lambda p: fig_gate_counts(rows, css.k, p),
        "fiber_map.png": lambda p: fig_fiber_map(curve_dict, p),
        "layer_sizes.png": lambda p: fig_layer_sizes(css, p),
    }
    paths = [csv_path]
    for name, render in figures.items():
        target = out_dir / name
        render(target)
        paths.append(target)

    manifest = {
        "tool_version": __version__,
        "seed": seed,
        "css_sha256": sha256_of(css_dict),
        "curve_sha256": sha256_of(curve_dict),
        "rows": len(rows),
        "all_verified": all(r["verified"] == "PASS" for r in rows),
        "csv": csv_path.name,
        "figures": list(figures.keys()),
    }
    manifest_path = out_dir / "report.json"
    save_json(manifest_path, manifest)
    paths.append(manifest_path)
    return paths
