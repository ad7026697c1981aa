"""Figures for verification and tower reports (non-interactive Agg backend)."""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STATUS_COLORS = {"pass": "#3a7d44", "fail": "#b23a48", "skipped": "#9a9a9a"}

plt.rcParams.update({
    "figure.dpi": 100,
    "savefig.dpi": 120,
    "font.size": 9,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "svg.hashsalt": "genus2glue",
})


def _save(fig, path: Path) -> Path:
    fig.tight_layout()
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
    return path


def plot_checks(doc: dict, path: Path) -> Path:
    checks = doc["checks"]
    fig, ax = plt.subplots(figsize=(6, 0.3 * len(checks) + 1))
    names = [c["id"] for c in checks][::-1]
    colors = [STATUS_COLORS[c["status"]] for c in checks][::-1]
    ax.barh(names, [1] * len(names), color=colors)
    ax.set_xticks([])
    ax.set_title(f"{doc['params'].get('id', '')} suite={doc['params'].get('suite', '')}: {doc['status']}")
    for status, color in STATUS_COLORS.items():
        ax.bar(0, 0, color=color, label=status)
    ax.legend(loc="lower right", frameon=False, fontsize=7)
    return _save(fig, path)


def plot_lpoly(data: dict, path: Path) -> Path:
    """L_C coefficients next to those of L_E * L_E' (signed, log-scaled magnitudes)."""
    c, prod = data["lpoly_c"], data["lpoly_product"]
    xs = range(len(c))
    fig, ax = plt.subplots(figsize=(5, 3))
    w = 0.38
    ax.bar([x - w / 2 for x in xs], c, width=w, label="L_C")
    ax.bar([x + w / 2 for x in xs], prod, width=w, label="L_E L_E'")
    ax.set_yscale("symlog")
    ax.set_xticks(list(xs), [f"T^{i}" for i in xs])
    ax.set_title(f"#Jac = {data['jacobian_order']}, #E #E' = {data['product_order']}")
    ax.legend(frameon=False)
    return _save(fig, path)


def plot_cover_degrees(rows: list[dict], path: Path) -> Path:
    fig, ax = plt.subplots(figsize=(4, 3.5))
    exp = [r["expected"] for r in rows]
    got = [r["degree"] for r in rows]
    top = max(exp + got) + 2
    ax.plot([0, top], [0, top], color="0.7", lw=1)
    ax.scatter(exp, got, zorder=3)
    for r in rows:
        ax.annotate(f"({r['a']},{r['b']})", (r["expected"], r["degree"]), textcoords="offset points", xytext=(4, -10))
    ax.set_xlabel("2a^2 + 2Nb^2")
    ax.set_ylabel("degree from the x-function")
    return _save(fig, path)


def plot_tower(doc: dict, path: Path) -> Path:
    """Degrees n_i and log10 of the truncated group orders by level."""
    levels = list(range(1, len(doc["degrees"]) + 1))
    digits = [len(s) - 1 + math.log10(int(s[:15]) / 10 ** (min(15, len(s)) - 1)) for s in doc["orders"]]
    fig, (a1, a2) = plt.subplots(1, 2, figsize=(7, 3))
    a1.plot(levels, doc["degrees"], marker="o")
    a1.set_xlabel("level i")
    a1.set_ylabel("n_i")
    a2.plot(levels, digits, marker="s", color="C1")
    a2.set_xlabel("level t")
    a2.set_ylabel("log10 |G_t|")
    for ax in (a1, a2):
        ax.set_xticks(levels)
    fig.suptitle(f"p={doc['p']}, N={doc['N']}, r={doc['r']}")
    return _save(fig, path)


def render_figures(doc: dict, outdir: str | Path) -> list[Path]:
    """Write every figure that applies to the report document into outdir."""
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    if "checks" in doc:
        paths.append(plot_checks(doc, out / "checks.png"))
        by_id = {c["id"]: c for c in doc["checks"]}
        split = by_id.get("core.lpoly_split")
        if split and "lpoly_c" in split["data"]:
            paths.append(plot_lpoly(split["data"], out / "lpoly.png"))
        rows = [c["data"] for cid, c in by_id.items() if cid.startswith("covers.degree_") and c["status"] != "skipped"]
        rows = [r for r in rows if "degree" in r]
        if rows:
            paths.append(plot_cover_degrees(rows, out / "cover_degrees.png"))
    if "tower" in doc:
        paths.append(plot_tower(doc["tower"], out / "tower.png"))
    return paths
