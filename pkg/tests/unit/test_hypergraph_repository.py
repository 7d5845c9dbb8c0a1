import numpy as np
import pytest

from src.entity.models.hypergraph import HyperedgeRecord, build_incidence
from src.entity.repositories.hypergraph_repository import (
    DatasetFormat,
    HypergraphRepository,
    levels_path_for,
    load_hypergraph,
    preprocess,
    write_hypergraph,
)
from src.shared.errors import DatasetIOError, EmptyDataset, ParseError


class TestPreprocess:
    def test_collapses_repeated_labels_within_an_edge(self):
        assert preprocess([("a", "b", "a")], dedupe=False, drop_singletons=False) == [("a", "b")]

    def test_dedupe_treats_edges_as_sets(self):
        edges = [("a", "b", "c"), ("c", "b", "a"), ("a", "b")]
        assert preprocess(edges, dedupe=True, drop_singletons=True) == [("a", "b", "c"), ("a", "b")]

    def test_keep_duplicates(self):
        edges = [("a", "b"), ("a", "b")]
        assert len(preprocess(edges, dedupe=False, drop_singletons=True)) == 2

    def test_singletons(self):
        edges = [("a",), ("a", "a"), ("a", "b")]
        assert preprocess(edges, dedupe=False, drop_singletons=True) == [("a", "b")]
        assert len(preprocess(edges, dedupe=False, drop_singletons=False)) == 3

    @pytest.mark.parametrize("dedupe", [True, False])
    @pytest.mark.parametrize("drop_singletons", [True, False])
    def test_idempotent(self, dedupe, drop_singletons):
        rng = np.random.default_rng(9)
        for _ in range(200):
            edges = [tuple(rng.choice(list("abcdef"), size=int(rng.integers(1, 5))).tolist())
                     for _ in range(int(rng.integers(1, 12)))]
            once = preprocess(edges, dedupe, drop_singletons)
            assert preprocess(once, dedupe, drop_singletons) == once


class TestEdgeListFormat:
    def test_load_remaps_labels_densely(self, write_edges):
        path = write_edges(["# comment", "10 20 30", "", "20,30", "30\t40"])
        g = load_hypergraph(path)
        assert g.num_nodes == 4
        assert g.num_edges == 3
        assert g.labels == ("10", "20", "30", "40")
        assert [e.nodes for e in g.edges] == [(0, 1, 2), (1, 2), (2, 3)]

    def test_dedupe_and_singleton_flags(self, write_edges):
        path = write_edges(["a b", "b a", "c", "b c"])
        assert load_hypergraph(path).num_edges == 2
        assert load_hypergraph(path, dedupe=False).num_edges == 3
        assert load_hypergraph(path, dedupe=False, drop_singletons=False).num_edges == 4

    def test_only_singletons_is_empty(self, write_edges):
        with pytest.raises(EmptyDataset):
            load_hypergraph(write_edges(["a", "b"]))

    def test_missing_file(self, tmp_path):
        with pytest.raises(DatasetIOError):
            load_hypergraph(tmp_path / "nope.txt")

    def test_invalid_utf8(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_bytes(b"a b\n\xff\xfe c\n")
        with pytest.raises(ParseError) as exc:
            load_hypergraph(path)
        assert exc.value.line_number == 2

    def test_edge_list_needs_one_file(self, write_edges):
        path = write_edges(["a b"])
        with pytest.raises(ValueError):
            HypergraphRepository().load([path, path])


class TestNvertsFormat:
    def write_pair(self, tmp_path, nverts, simplices, prefix="toy"):
        (tmp_path / f"{prefix}-nverts.txt").write_text("\n".join(nverts) + "\n")
        (tmp_path / f"{prefix}-simplices.txt").write_text("\n".join(simplices) + "\n")
        return tmp_path / prefix

    def test_load_by_prefix(self, tmp_path):
        prefix = self.write_pair(tmp_path, ["2", "3", "1"], ["1", "2", "2", "3", "4", "9"])
        g = load_hypergraph(prefix, DatasetFormat.NVERTS_SIMPLICES)
        assert g.num_edges == 2
        assert g.num_nodes == 4

    def test_load_by_explicit_files(self, tmp_path):
        self.write_pair(tmp_path, ["2", "2"], ["1", "2", "2", "1"])
        g = load_hypergraph([tmp_path / "toy-nverts.txt", tmp_path / "toy-simplices.txt"],
                            DatasetFormat.NVERTS_SIMPLICES, dedupe=False)
        assert g.num_edges == 2

    def test_non_integer_count(self, tmp_path):
        prefix = self.write_pair(tmp_path, ["2", "x"], ["1", "2", "3"])
        with pytest.raises(ParseError) as exc:
            load_hypergraph(prefix, DatasetFormat.NVERTS_SIMPLICES)
        assert exc.value.line_number == 2

    def test_truncated_simplices(self, tmp_path):
        prefix = self.write_pair(tmp_path, ["2", "3"], ["1", "2", "3"])
        with pytest.raises(ParseError):
            load_hypergraph(prefix, DatasetFormat.NVERTS_SIMPLICES)


class TestWrite:
    def test_write_then_load_keeps_edges(self, tmp_path, write_edges):
        g = load_hypergraph(write_edges(["x y z", "y z", "z w"]))
        out = tmp_path / "out" / "copy.txt"
        write_hypergraph(g, out)
        again = load_hypergraph(out)
        assert [tuple(again.label_of(v) for v in e.nodes) for e in again.edges] == \
            [tuple(g.label_of(v) for v in e.nodes) for e in g.edges]

    def test_levels_side_file(self, tmp_path):
        g = build_incidence([HyperedgeRecord((0, 1), 2), HyperedgeRecord((1, 2), 1)], 3)
        out = tmp_path / "gen.txt"
        write_hypergraph(g, out, write_levels=True)
        assert out.read_text().splitlines() == ["# hyperlap num_nodes: 3", "0 1", "1 2"]
        assert levels_path_for(out).read_text().splitlines() == ["2", "1"]

    def test_isolated_nodes_listed_in_header(self, tmp_path):
        g = build_incidence([[0, 1], [1, 2]], 5)
        out = tmp_path / "gen.txt"
        write_hypergraph(g, out)
        assert out.read_text().splitlines()[:2] == ["# hyperlap num_nodes: 5", "# isolated: 3 4"]

    def test_unwritable_target(self, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("")
        g = build_incidence([[0, 1]], 2)
        with pytest.raises(DatasetIOError):
            write_hypergraph(g, blocker / "sub" / "out.txt")


def label_sets(g):
    return sorted(sorted(g.label_of(v) for v in e.nodes) for e in g.edges)


class TestReadWritten:
    def test_round_trip_keeps_repeats_isolated_nodes_and_levels(self, tmp_path):
        g = build_incidence([HyperedgeRecord((0, 1), 1), HyperedgeRecord((0, 1), 2),
                             HyperedgeRecord((1, 2, 3), 1)], 5)
        out = tmp_path / "gen.txt"
        write_hypergraph(g, out, write_levels=True)
        again = load_hypergraph(out)
        assert again.num_nodes == 5
        assert again.num_edges == 3
        assert label_sets(again) == label_sets(g)
        assert [e.level for e in again.edges] == [1, 2, 1]
        assert sorted(again.labels) == ["0", "1", "2", "3", "4"]

    def test_round_trip_ignores_preprocessing_flags(self, tmp_path):
        g = build_incidence([[0, 1], [0, 1], [2]], 3)
        out = tmp_path / "gen.txt"
        write_hypergraph(g, out)
        again = load_hypergraph(out, dedupe=True, drop_singletons=True)
        assert again.num_edges == 3
        assert again.num_nodes == 3
        assert [e.level for e in again.edges] == [None, None, None]

    def test_round_trip_of_labelled_dataset(self, tmp_path, toy_dataset):
        g = load_hypergraph(toy_dataset)
        out = tmp_path / "copy.txt"
        write_hypergraph(g, out)
        again = load_hypergraph(out)
        assert again.num_nodes == g.num_nodes
        assert label_sets(again) == label_sets(g)

    def test_node_count_mismatch(self, write_edges):
        path = write_edges(["# hyperlap num_nodes: 9", "a b", "b c"])
        with pytest.raises(ParseError):
            load_hypergraph(path)

    def test_malformed_header(self, write_edges):
        with pytest.raises(ParseError):
            load_hypergraph(write_edges(["# hyperlap num_nodes: many", "a b"]))

    def test_level_count_mismatch(self, tmp_path):
        out = tmp_path / "gen.txt"
        write_hypergraph(build_incidence([[0, 1], [1, 2]], 3), out)
        levels_path_for(out).write_text("1\n")
        with pytest.raises(ParseError):
            load_hypergraph(out)

    def test_rewrite_without_levels_drops_side_file(self, tmp_path):
        out = tmp_path / "gen.txt"
        write_hypergraph(build_incidence([HyperedgeRecord((0, 1), 2)], 2), out, write_levels=True)
        write_hypergraph(build_incidence([[0, 1], [0, 1]], 2), out)
        assert not levels_path_for(out).exists()
        assert [e.level for e in load_hypergraph(out).edges] == [None, None]

    def test_no_edges_after_header(self, tmp_path):
        out = tmp_path / "gen.txt"
        out.write_text("# hyperlap num_nodes: 2\n# isolated: a b\n")
        with pytest.raises(EmptyDataset):
            load_hypergraph(out)
