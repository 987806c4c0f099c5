"""File formats: JSON maps and trees, Newick and DOT export, JSON verdicts.

Map JSON::

    {"leaves": [...], "colors": [...],
     "pairs": [{"pair": ["a", "b"], "colors": ["1", "3"]}, ...],
     "strict": false}

Unlisted pairs default to the empty set unless ``"strict": true``.

Tree JSON::

    {"vertices": [...], "edges": [{"ends": ["u", "v"], "colors": [...]}],
     "leaves": [...]}
"""

from __future__ import annotations

import hashlib
import json
from typing import Any

from .compat import RecognitionResult
from .errors import ValidationError
from .model import LabeledTree, SymmetricMap, edge, pair, validate_map


def _need(obj: Any, key: str, kind: type, where: str):
    if not isinstance(obj, dict) or key not in obj:
        raise ValidationError(f"{where}: missing key {key!r}")
    val = obj[key]
    if not isinstance(val, kind):
        raise ValidationError(f"{where}: {key!r} must be a {kind.__name__}")
    return val


def _strings(vals: list, where: str) -> list[str]:
    if not all(isinstance(v, str) for v in vals):
        raise ValidationError(f"{where}: identifiers must be strings")
    return vals


def map_from_json(data: Any) -> SymmetricMap:
    leaves = _strings(_need(data, "leaves", list, "map"), "map.leaves")
    colors = _strings(_need(data, "colors", list, "map"), "map.colors")
    strict = data.get("strict", False)
    entries: dict[frozenset[str], frozenset[str]] = {}
    for k, item in enumerate(data.get("pairs", [])):
        where = f"map.pairs[{k}]"
        xy = _strings(_need(item, "pair", list, where), where)
        if len(xy) != 2:
            raise ValidationError(f"{where}: a pair has exactly two leaves")
        key = pair(*xy)
        if key in entries:
            raise ValidationError(f"{where}: pair {sorted(key)} listed twice")
        entries[key] = frozenset(_strings(item.get("colors", []), where))
    if not strict:
        for i, x in enumerate(sorted(leaves)):
            for y in sorted(leaves)[i + 1 :]:
                entries.setdefault(pair(x, y), frozenset())
    emap = SymmetricMap(leaves, colors, entries)
    report = validate_map(emap)
    if not report.ok:
        raise ValidationError("; ".join(report.problems), report.problems)
    return emap


def map_to_json(emap: SymmetricMap) -> dict[str, Any]:
    return {
        "leaves": list(emap.leaves),
        "colors": list(emap.colors),
        "pairs": [{"pair": [x, y], "colors": sorted(c)} for (x, y), c in emap.items()],
        "strict": True,
    }


def tree_from_json(data: Any) -> LabeledTree:
    vertices = _strings(_need(data, "vertices", list, "tree"), "tree.vertices")
    leaves = _strings(_need(data, "leaves", list, "tree"), "tree.leaves")
    labels = {}
    for k, item in enumerate(_need(data, "edges", list, "tree")):
        where = f"tree.edges[{k}]"
        ends = _strings(_need(item, "ends", list, where), where)
        if len(ends) != 2:
            raise ValidationError(f"{where}: an edge has exactly two ends")
        e = edge(*ends)
        if e in labels:
            raise ValidationError(f"{where}: duplicate edge {e}")
        labels[e] = frozenset(_strings(item.get("colors", []), where))
    tree = LabeledTree(tuple(vertices), tuple(labels), tuple(leaves), labels)
    if len(set(vertices)) != len(vertices):
        raise ValidationError("tree: duplicate vertex identifiers")
    tree.require_valid()
    return tree


def tree_to_json(tree: LabeledTree) -> dict[str, Any]:
    return {
        "vertices": list(tree.vertices),
        "edges": [{"ends": list(e), "colors": sorted(tree.labels.get(e, ()))} for e in tree.edges],
        "leaves": list(tree.leaves),
    }


def load_json(path: str) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: malformed JSON ({exc})") from exc


def dump_json(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


# ---------------------------------------------------------------------------
# Newick / DOT
# ---------------------------------------------------------------------------


def _annot(cols: frozenset[str]) -> str:
    return f"[&colors={{{','.join(sorted(cols))}}}]" if cols else ""


def to_newick(tree: LabeledTree) -> str:
    """Newick string with the label of the edge above each node as
    ``[&colors={...}]``; unrooted trees are written from their first inner
    vertex (or from the first leaf of a two-leaf tree)."""
    inner = tree.inner_vertices
    root = inner[0] if inner else tree.leaves[0]

    def render(v: str, parent: str | None) -> str:
        kids = [w for w in tree.adjacency[v] if w != parent]
        body = ""
        if kids:
            body = "(" + ",".join(render(w, v) for w in kids) + ")"
        name = v if v in tree.leaves else ""
        if parent is None:
            return body + name
        return f"{body}{name}{_annot(tree.label(v, parent))}:1"

    return render(root, None) + ";"


def _color_of(cols: frozenset[str]) -> str:
    digest = hashlib.sha1(",".join(sorted(cols)).encode()).hexdigest()
    r, g, b = (int(digest[i : i + 2], 16) for i in (0, 2, 4))
    # keep colors dark enough to read on white
    return f"#{r * 3 // 4:02x}{g * 3 // 4:02x}{b * 3 // 4:02x}"


def to_dot(tree: LabeledTree) -> str:
    """Graphviz DOT; edges colored by label set, empty-labeled edges dashed,
    and a legend cluster listing every label set."""
    lines = ["graph T {", "  node [shape=circle, label=\"\", width=0.15];"]
    for x in tree.leaves:
        lines.append(f'  "{x}" [shape=plaintext, label="{x}"];')
    for v in tree.inner_vertices:
        lines.append(f'  "{v}";')
    seen = set()
    for e in tree.edges:
        cols = tree.labels[e]
        seen.add(cols)
        if cols:
            lines.append(f'  "{e[0]}" -- "{e[1]}" [color="{_color_of(cols)}", label="{",".join(sorted(cols))}"];')
        else:
            lines.append(f'  "{e[0]}" -- "{e[1]}" [style=dashed];')
    lines.append("  subgraph cluster_legend {")
    lines.append('    label="legend"; node [shape=plaintext];')
    for i, cols in enumerate(sorted(seen, key=lambda c: sorted(c))):
        text = "{" + ",".join(sorted(cols)) + "}"
        style = f'color="{_color_of(cols)}"' if cols else "style=dashed"
        lines.append(f'    "legend{i}a" [label="{text}"]; "legend{i}b" [label=""];')
        lines.append(f'    "legend{i}a" -- "legend{i}b" [{style}];')
    lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Verdicts
# ---------------------------------------------------------------------------


def verdict_to_json(result: RecognitionResult, witness_path: str | None = None) -> dict[str, Any]:
    out: dict[str, Any] = {"decision": result.decision}
    if result.witness is not None:
        out["witness"] = tree_to_json(result.witness)
        if witness_path:
            out["witness_file"] = witness_path
    if result.reason is not None:
        out["reason"] = result.reason
    if result.detail is not None:
        out["detail"] = result.detail
    if result.stats:
        out["stats"] = {k: v for k, v in result.stats.items() if k != "seconds"}
    return out
