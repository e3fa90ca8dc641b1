"""Graphviz DOT text for matches (arc diagrams) and evaluation forests."""

from __future__ import annotations

from typing import Sequence

from .forest import EvaluationForest


def _quote(s: str) -> str:
    return '"' + s.replace('"', '\\"') + '"'


def match_to_dot(labels: Sequence[str], theta: Sequence[int], name: str = "match") -> str:
    lines = [f"digraph {name} {{", "  rankdir=LR;", "  node [shape=plaintext];"]
    for i, lab in enumerate(labels):
        lines.append(f"  p{i} [label={_quote(f'{i + 1}: {lab}')}];")
    for i in range(len(labels) - 1):
        lines.append(f"  p{i} -> p{i + 1} [style=invis];")
    for i, j in enumerate(theta):
        if j > i:
            lines.append(f"  p{i} -> p{j} [dir=none, constraint=false];")
        elif j == i:
            lines.append(f"  p{i} [label={_quote(f'{i + 1}: {labels[i]} (fixed)')}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def forest_to_dot(forest: EvaluationForest, labels: Sequence[str] | None = None, name: str = "forest") -> str:
    lines = [f"digraph {name} {{", "  node [shape=box];"]
    for t, (m, M) in enumerate(forest.intervals):
        text = f"[{m},{M}]"
        if labels is not None:
            text += "\\n" + " ".join(labels[m - 1:M])
        lines.append(f"  n{t} [label={_quote(text)}];")
    for t, p in enumerate(forest.parent):
        if p is not None:
            lines.append(f"  n{p} -> n{t};")
    lines.append("}")
    return "\n".join(lines) + "\n"
