"""Report emitters: delimited output plus rendered figures.

The analyze pipeline writes a category-by-locale change table and a
per-participant count table as CSV, and renders the matching figures
(bar chart of changes per participant, category/locale matrix) as PNG
files next to them. Everything written here is byte-deterministic for
equal inputs; timestamps live only in the edit log.
"""

from __future__ import annotations

import csv
from fractions import Fraction
from pathlib import Path
from typing import Mapping

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .postedit import GRAMMATICAL_CATEGORIES, ChangeTable

_PNG_METADATA = {"Software": None}  # keep PNG bytes stable across versions


def write_change_table_csv(table: ChangeTable, path: str | Path) -> None:
    """Category rows by locale columns; cells are integer percents,
    blank if and only if exactly zero."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["change (%)", *table.locales])
        for category in GRAMMATICAL_CATEGORIES:
            writer.writerow(
                [category.value]
                + [table.display(locale, category) for locale in table.locales]
            )


def write_participant_csv(counts: Mapping[str, int], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["participant", "changes"])
        for participant, count in sorted(counts.items()):
            writer.writerow([participant, count])


def render_participant_figure(counts: Mapping[str, int], path: str | Path) -> None:
    """Bar chart of change counts per participant."""
    participants = sorted(counts)
    values = [counts[p] for p in participants]
    fig, ax = plt.subplots(figsize=(max(4.0, 0.6 * len(participants) + 2.0), 3.2))
    ax.bar(range(len(participants)), values, color="#4878a8")
    ax.set_xticks(range(len(participants)))
    ax.set_xticklabels(participants, rotation=45, ha="right", fontsize=8)
    ax.set_xlabel("participant")
    ax.set_ylabel("changes")
    ax.spines["top"].set_visible(False)
    ax.spines["right"].set_visible(False)
    fig.tight_layout()
    fig.savefig(path, metadata=_PNG_METADATA)
    plt.close(fig)


def render_change_matrix_figure(table: ChangeTable, path: str | Path) -> None:
    """Heat map of change percentages, categories by locale."""
    rows = GRAMMATICAL_CATEGORIES
    data = np.array(
        [
            [float(table.percent(locale, category)) for locale in table.locales]
            for category in rows
        ]
    )
    fig, ax = plt.subplots(figsize=(1.2 * max(len(table.locales), 3), 6.5))
    image = ax.imshow(data, aspect="auto", cmap="Blues")
    ax.set_xticks(range(len(table.locales)))
    ax.set_xticklabels(table.locales, rotation=45, ha="right", fontsize=8)
    ax.set_yticks(range(len(rows)))
    ax.set_yticklabels([c.value for c in rows], fontsize=7)
    fig.colorbar(image, ax=ax, label="% of units changed")
    fig.tight_layout()
    fig.savefig(path, metadata=_PNG_METADATA)
    plt.close(fig)


def fraction_dict(value: Fraction) -> dict:
    """Exact fraction in a JSON-friendly shape, with a float convenience."""
    return {
        "numerator": value.numerator,
        "denominator": value.denominator,
        "value": float(value),
    }


def format_percent(value: Fraction) -> str:
    """Exact two-decimal percent string, e.g. Fraction(19, 100) -> '19.00%'."""
    scaled = value * 10000
    whole, rest = divmod(int(scaled + Fraction(1, 2)), 100)
    return f"{whole}.{rest:02d}%"
