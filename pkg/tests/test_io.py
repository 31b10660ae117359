import numpy as np
import pytest

from graphset.errors import (
    EmptyGraphError,
    FormatError,
    IngestError,
    ParameterError,
    ParseError,
)
from graphset.io import format_value, load_edge_list, load_tud_dataset, write_csv


def write(path, text):
    path.write_text(text)
    return str(path)


class TestEdgeList:
    def test_path_graph(self, tmp_path):
        write(tmp_path / "g0.txt", "0 1\n1 2\n")
        coll = load_edge_list(str(tmp_path))
        assert len(coll) == 1
        g = coll[0]
        assert g.node_count == 3
        assert g.edge_count == 2

    def test_dedup(self, tmp_path):
        write(tmp_path / "g0.txt", "0 1\n1 0\n0 1\n")
        g = load_edge_list(str(tmp_path))[0]
        assert g.node_count == 2
        assert g.edge_count == 1

    def test_two_files_sorted(self, tmp_path):
        write(tmp_path / "b.txt", "0 1\n")
        write(tmp_path / "a.txt", "0 1\n1 2\n")
        coll = load_edge_list(str(tmp_path))
        assert len(coll) == 2
        assert coll[0].node_count == 3  # a.txt first
        assert [g.graph_id for g in coll] == [0, 1]

    def test_comments_and_blanks(self, tmp_path):
        write(tmp_path / "g.txt", "# a comment\n\n0 1\n# more\n1 2\n")
        g = load_edge_list(str(tmp_path))[0]
        assert g.edge_count == 2

    def test_sparse_ids_compacted(self, tmp_path):
        write(tmp_path / "g.txt", "10 20\n20 30\n")
        g = load_edge_list(str(tmp_path))[0]
        assert g.node_count == 3
        assert g.node_ids.tolist() == [10, 20, 30]

    def test_malformed_line(self, tmp_path):
        p = write(tmp_path / "g.txt", "0 1\n0 1 2\n")
        with pytest.raises(ParseError) as exc:
            load_edge_list(str(tmp_path))
        assert "2" in str(exc.value)
        assert p in str(exc.value)

    def test_non_integer(self, tmp_path):
        write(tmp_path / "g.txt", "0 x\n")
        with pytest.raises(ParseError):
            load_edge_list(str(tmp_path))

    def test_empty_file(self, tmp_path):
        write(tmp_path / "g.txt", "# nothing\n")
        with pytest.raises(EmptyGraphError):
            load_edge_list(str(tmp_path))

    def test_missing_dir(self, tmp_path):
        with pytest.raises(IngestError):
            load_edge_list(str(tmp_path / "nope"))


def make_tud(tmp_path, name="TOY"):
    # graph 1: triangle on global nodes 1,2,3; graph 2: edge on 4,5
    write(
        tmp_path / f"{name}_A.txt",
        "1, 2\n2, 1\n2, 3\n3, 2\n1, 3\n3, 1\n4, 5\n5, 4\n",
    )
    write(tmp_path / f"{name}_graph_indicator.txt", "1\n1\n1\n2\n2\n")
    write(tmp_path / f"{name}_graph_labels.txt", "1\n-1\n")
    return str(tmp_path)


class TestTUDataset:
    def test_two_graph_fixture(self, tmp_path):
        coll = load_tud_dataset(make_tud(tmp_path), "TOY")
        assert len(coll) == 2
        assert coll[0].node_count == 3
        assert coll[0].edge_count == 3
        assert coll[1].node_count == 2
        assert coll[1].edge_count == 1
        assert coll.labels.tolist() == [1, -1]
        assert coll[0].node_ids.tolist() == [1, 2, 3]
        assert coll[1].node_ids.tolist() == [4, 5]

    def test_missing_file_named(self, tmp_path):
        make_tud(tmp_path)
        (tmp_path / "TOY_graph_labels.txt").unlink()
        with pytest.raises(IngestError) as exc:
            load_tud_dataset(str(tmp_path), "TOY")
        assert "TOY_graph_labels.txt" in str(exc.value)

    def test_cross_graph_edge(self, tmp_path):
        make_tud(tmp_path)
        with open(tmp_path / "TOY_A.txt", "a") as fh:
            fh.write("3, 4\n")
        with pytest.raises(FormatError):
            load_tud_dataset(str(tmp_path), "TOY")

    def test_optional_files_ignored(self, tmp_path, caplog):
        make_tud(tmp_path)
        write(tmp_path / "TOY_node_labels.txt", "0\n0\n0\n1\n1\n")
        with caplog.at_level("INFO", logger="graphset"):
            coll = load_tud_dataset(str(tmp_path), "TOY")
        assert len(coll) == 2
        assert any("TOY_node_labels.txt" in r.message for r in caplog.records)

    def test_real_labels(self, tmp_path):
        make_tud(tmp_path)
        write(tmp_path / "TOY_graph_labels.txt", "0.5\n-1.25\n")
        coll = load_tud_dataset(str(tmp_path), "TOY")
        assert coll.labels.dtype.kind == "f"
        assert coll.labels.tolist() == [0.5, -1.25]

    def test_label_count_mismatch(self, tmp_path):
        make_tud(tmp_path)
        write(tmp_path / "TOY_graph_labels.txt", "1\n")
        with pytest.raises(FormatError):
            load_tud_dataset(str(tmp_path), "TOY")


class TestFormatting:
    def test_integers_plain(self):
        assert format_value(3) == "3"
        assert format_value(np.int64(-7)) == "-7"
        assert format_value(2.0) == "2"

    def test_twelve_significant_digits(self):
        assert format_value(1 / 3) == "0.333333333333"
        assert format_value(123456.789012345) == "123456.789012"
        assert format_value(-1 / 7) == "-0.142857142857"

    def test_small_values(self):
        assert format_value(1.23456789012345e-5) == "1.23456789012e-05"

    def test_nan(self):
        assert format_value(float("nan")) == "nan"

    def test_write_csv(self, tmp_path):
        p = tmp_path / "out.csv"
        write_csv(str(p), ["a", "b"], [[1, 0.5], ["x", 1 / 3]])
        data = p.read_bytes()
        assert data == b"a,b\n1,0.5\nx,0.333333333333\n"


class TestTUDWriter:
    def test_round_trip(self, tmp_path):
        from graphset.graphs import GraphCollection, generate_planted_partition
        from graphset.io import write_tud_dataset

        graphs = [
            generate_planted_partition(12, [6, 6], 0.25, seed=(3, i), degree=4)
            for i in range(5)
        ]
        labels = np.array([0, 1, 0, 1, 1])
        coll = GraphCollection(graphs, labels=labels, name="RT")
        write_tud_dataset(tmp_path, coll, "RT")

        back = load_tud_dataset(str(tmp_path), "RT")
        assert len(back) == 5
        assert np.array_equal(back.labels, labels)
        for g, h in zip(coll, back):
            assert g.node_count == h.node_count
            assert np.array_equal(g.edges(), h.edges())

    def test_comment_line_in_csv(self, tmp_path):
        p = tmp_path / "out.csv"
        write_csv(str(p), ["a"], [[1]], comment="config=abc")
        assert p.read_text().splitlines()[0] == "# config=abc"

    def test_labels_required(self, tmp_path):
        from graphset.graphs import GraphCollection, generate_planted_partition
        from graphset.io import write_tud_dataset

        g = generate_planted_partition(10, [5, 5], 0.3, seed=1, degree=3)
        with pytest.raises(ParameterError):
            write_tud_dataset(tmp_path, GraphCollection([g]), "X")
