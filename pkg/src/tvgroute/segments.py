"""Source-routing segment stacks for computed routes.

A unicast path becomes the list of nodes after its source.  A multicast
tree becomes one nested stack: a node with several children emits
``Replication`` followed by one sub-stack per branch.  Staying on the same
satellite across snapshots (caching) is not a forwarding step, so such
hops are collapsed.
"""

from __future__ import annotations

from .errors import SchemaError
from .graph import SatNode
from .instance import DownloadSolution, UploadSolution

REPLICATION = "Replication"


def _label(node: SatNode, labels: dict | None) -> str:
    if labels and node.satellite in labels:
        return str(labels[node.satellite])
    return str(node.satellite)


def unicast_stack(nodes, labels: dict | None = None) -> list[str]:
    out: list[str] = []
    for prev, node in zip(nodes, nodes[1:]):
        if node.satellite != prev.satellite:
            out.append(_label(node, labels))
    return out


def tree_stack(arcs, root: SatNode, labels: dict | None = None) -> list:
    children: dict = {}
    for u, v in arcs:
        children.setdefault(u, []).append(v)
    for kids in children.values():
        kids.sort()

    def seq(node: SatNode, first: bool) -> list:
        out = [_label(node, labels)] if first else []
        while True:
            kids = children.get(node, [])
            if not kids:
                return out
            if len(kids) == 1:
                child = kids[0]
                if child.satellite != node.satellite:
                    out.append(_label(child, labels))
                node = child
                continue
            out.append(REPLICATION)
            for child in kids:
                out.append(seq(child, True))
            return out

    if root in {v for _, v in arcs}:
        raise SchemaError("trees", f"root {root!r} has an incoming arc")
    return seq(root, True)


def render_segment_stacks(solution, labels: dict | None = None) -> list[list]:
    """One stack per unicast path, or one nested stack per multicast tree."""
    if isinstance(solution, DownloadSolution) and solution.trees:
        stacks = []
        for m, arcs in sorted(solution.trees.items()):
            heads = {v for _, v in arcs}
            roots = sorted({u for u, _ in arcs if u not in heads})
            if not roots:
                starts = [p.nodes[0] for p in solution.paths if p.model == m]
                if not starts:
                    raise SchemaError("trees", f"model {m} tree has no root")
                roots = [starts[0]]
            if len(roots) != 1:
                raise SchemaError("trees", f"model {m} tree has {len(roots)} roots")
            stacks.append(tree_stack(arcs, roots[0], labels))
        return stacks
    if not isinstance(solution, (DownloadSolution, UploadSolution)):
        raise SchemaError("solution", "expected a download or upload solution")
    return [unicast_stack(p.nodes, labels) for p in solution.paths]


def format_stack(stack: list) -> str:
    return "[" + ", ".join(format_stack(x) if isinstance(x, list) else str(x) for x in stack) + "]"
