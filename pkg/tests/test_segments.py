from __future__ import annotations

from fractions import Fraction

import pytest

from tvgroute import SatNode
from tvgroute.errors import SchemaError
from tvgroute.instance import DownloadSolution, PathFlow, UploadSolution
from tvgroute.segments import format_stack, render_segment_stacks, tree_stack, unicast_stack

A, B, C, D, E, F = (SatNode(i, 1) for i in range(1, 7))
LABELS = dict(zip(range(1, 7), "ABCDEF"))


def test_unicast_path():
    sol = DownloadSolution("1-UF-WS", "optimal", Fraction(1), {4: 1}, [PathFlow(0, 4, (A, B, C, D), Fraction(1))])
    assert [format_stack(s) for s in render_segment_stacks(sol, LABELS)] == ["[B, C, D]"]


def test_split_flow_one_stack_per_path():
    paths = [PathFlow(0, 4, (A, B, C, D), Fraction(1, 2)), PathFlow(0, 4, (A, E, F, D), Fraction(1, 2))]
    sol = DownloadSolution("1-SF-WS", "optimal", Fraction(1), {4: 1}, paths)
    assert [format_stack(s) for s in render_segment_stacks(sol, LABELS)] == ["[B, C, D]", "[E, F, D]"]


def test_multicast_tree():
    arcs = [(A, B), (B, C), (B, D), (D, E), (D, F)]
    sol = DownloadSolution("mul-1-WS", "optimal", Fraction(3), {3: 1, 5: 1, 6: 1}, trees={0: arcs})
    assert [format_stack(s) for s in render_segment_stacks(sol, LABELS)] == [
        "[A, B, Replication, [C], [D, Replication, [E], [F]]]"
    ]


def test_cache_hops_are_not_forwarding_steps():
    path = (SatNode(1, 1), SatNode(2, 1), SatNode(2, 2), SatNode(3, 2))
    assert unicast_stack(path) == ["2", "3"]
    tree = [(SatNode(1, 1), SatNode(1, 2)), (SatNode(1, 2), SatNode(2, 2)), (SatNode(1, 2), SatNode(3, 2))]
    assert format_stack(tree_stack(tree, SatNode(1, 1))) == "[1, Replication, [2], [3]]"


def test_upload_paths_render():
    sol = UploadSolution("1-UF-NCS", True, [(0, 3)], None, [PathFlow(0, 3, (C, B, A), Fraction(1))])
    assert render_segment_stacks(sol) == [["2", "1"]]


def test_malformed_inputs():
    with pytest.raises(SchemaError):
        tree_stack([(A, B), (B, A)], A)
    with pytest.raises(SchemaError):
        render_segment_stacks({"paths": []})
    two_roots = DownloadSolution("mul-1-WS", "optimal", Fraction(1), trees={0: [(A, B), (C, D)]})
    with pytest.raises(SchemaError):
        render_segment_stacks(two_roots)
