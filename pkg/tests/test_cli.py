import json
import subprocess
import sys

import pytest

from s2doc import deserialize, serialize, table_columns
from s2doc.cli import main

from helpers import FIXTURES, run_fig1_pipeline

GOLDEN = str(FIXTURES / "fig1.s2doc.json")
GOLDEN_LINE = "⟨[VAST],[IoU,0.5],[66.8]⟩"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestValidate:
    def test_golden_fixture_ok(self, capsys):
        code, out, _ = run(capsys, "validate", GOLDEN)
        assert code == 0
        assert out.strip() == "OK"

    def test_cyclic_fixture_lists_cycle(self, capsys):
        code, out, _ = run(capsys, "validate", str(FIXTURES / "corrupt_cycle.s2doc.json"))
        assert code == 1
        assert "cycle" in out
        assert "a" in out and "b" in out

    def test_dangling_fixture(self, capsys):
        code, out, _ = run(capsys, "validate", str(FIXTURES / "corrupt_dangling.s2doc.json"))
        assert code == 1
        assert "dangling-reference" in out

    def test_bad_version(self, capsys):
        code, out, _ = run(capsys, "validate", str(FIXTURES / "corrupt_version.s2doc.json"))
        assert code == 1
        assert "s2doc/99" in out

    def test_missing_file(self, capsys):
        code, _, err = run(capsys, "validate", "/nonexistent/file.json")
        assert code == 2
        assert "cannot read" in err

    def test_unparseable_file(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{nope")
        code, _, err = run(capsys, "validate", str(bad))
        assert code == 2


class TestConvert:
    def test_csv_to_s2doc_to_csv_round_trip(self, capsys, tmp_path):
        source = tmp_path / "in.csv"
        source.write_text("a,b\n1,2\n")
        mid = tmp_path / "mid.s2doc.json"
        back = tmp_path / "out.csv"
        assert run(capsys, "convert", "--from", "csv", "--to", "s2doc", str(source), str(mid))[0] == 0
        code, _, _ = run(capsys, "validate", str(mid))
        assert code == 0
        assert run(capsys, "convert", "--from", "s2doc", "--to", "csv", str(mid), str(back))[0] == 0
        assert back.read_text() == "a,b\n1,2\n"

    def test_html_colspan_to_s2doc_shows_dual_membership(self, capsys, tmp_path):
        source = tmp_path / "t.html"
        source.write_text("<table><tr><td colspan='2'>w</td></tr><tr><td>a</td><td>b</td></tr></table>")
        out = tmp_path / "t.s2doc.json"
        assert run(capsys, "convert", "--from", "html", "--to", "s2doc", str(source), str(out))[0] == 0
        doc = deserialize(out.read_bytes())
        table = doc.elements_of_kind("table")[0]
        assert table.grid[0][0] == table.grid[0][1]

    def test_two_tables_without_table_flag(self, capsys, tmp_path):
        doc, _ = run_fig1_pipeline()
        from s2doc import Table, add_element

        add_element(doc, Table(), parents=[doc.pages[0].id])
        twin = tmp_path / "two.s2doc.json"
        twin.write_bytes(serialize(doc))
        code, _, err = run(capsys, "convert", "--from", "s2doc", "--to", "csv", str(twin), str(tmp_path / "x.csv"))
        assert code == 2
        assert "--table" in err

    def test_no_table_in_document(self, capsys, tmp_path):
        source = tmp_path / "t.textlines.json"
        source.write_text(json.dumps({"pages": []}))
        mid = tmp_path / "t.s2doc.json"
        assert run(capsys, "convert", "--from", "textlines", "--to", "s2doc", str(source), str(mid))[0] == 0
        code, _, err = run(capsys, "convert", "--from", "s2doc", "--to", "csv", str(mid), str(tmp_path / "x.csv"))
        assert code == 2

    def test_unsupported_target(self, capsys, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["convert", "--from", "csv", "--to", "coco", "a", "b"])
        assert exc.value.code == 2

    def test_ragged_csv_is_a_conversion_failure(self, capsys, tmp_path):
        source = tmp_path / "bad.csv"
        source.write_text("a,b\n1\n")
        code, _, err = run(capsys, "convert", "--from", "csv", "--to", "s2doc", str(source), str(tmp_path / "o"))
        assert code == 1
        assert "row 2" in err

    def test_lenient_pads(self, capsys, tmp_path):
        source = tmp_path / "bad.csv"
        source.write_text("a,b\n1\n")
        out = tmp_path / "o.s2doc.json"
        code, _, _ = run(capsys, "convert", "--from", "csv", "--to", "s2doc", "--lenient", str(source), str(out))
        assert code == 0

    def test_spanning_loss_warning_on_stderr(self, capsys, tmp_path):
        out = tmp_path / "flat.csv"
        code, _, err = run(capsys, "convert", "--from", "s2doc", "--to", "csv", GOLDEN, str(out))
        assert code == 0
        assert "warning" in err
        header = out.read_text().splitlines()[0]
        assert header.split(",")[2:4] == ["IoU", "IoU"]

    def test_coco_to_s2doc(self, capsys, tmp_path):
        source = tmp_path / "c.json"
        source.write_text(json.dumps({
            "images": [{"id": 1, "width": 64, "height": 48}],
            "annotations": [{"id": 1, "image_id": 1, "category_id": 1, "bbox": [1, 2, 3, 4]}],
            "categories": [{"id": 1, "name": "figure"}],
        }))
        out = tmp_path / "c.s2doc.json"
        assert run(capsys, "convert", "--from", "coco", "--to", "s2doc", str(source), str(out))[0] == 0
        assert run(capsys, "validate", str(out))[0] == 0


class TestPipeline:
    def test_golden_fixture_end_to_end(self, capsys, tmp_path):
        out = tmp_path / "fig1.s2doc.json"
        code, _, err = run(
            capsys, "pipeline", str(FIXTURES / "fig1.textlines.json"),
            "--table-region", "70,90,460,170,6", "-o", str(out),
        )
        assert code == 0
        assert "6 rows, 5 columns" in err
        assert run(capsys, "validate", str(out))[0] == 0
        code, tuples_out, _ = run(capsys, "extract", str(out))
        assert code == 0
        assert GOLDEN_LINE in tuples_out.splitlines()

    def test_empty_region(self, capsys, tmp_path):
        out = tmp_path / "x.s2doc.json"
        code, _, err = run(
            capsys, "pipeline", str(FIXTURES / "fig1.textlines.json"),
            "--table-region", "0,0,5,5,0", "-o", str(out),
        )
        assert code == 1
        assert "no text lines" in err

    def test_synthetic_grid_summary(self, capsys, tmp_path):
        payload = {
            "pages": [{
                "spaces": [{"id": "s0", "dimensionality": 2, "extent": [500, 500], "unit": "pt"}],
                "lines": [
                    {"content": f"r{i}c{j}", "rect": [50 + 60 * j, 50 + 30 * i, 40, 12]}
                    for i in range(3) for j in range(3)
                ],
            }]
        }
        source = tmp_path / "grid.textlines.json"
        source.write_text(json.dumps(payload))
        out = tmp_path / "grid.s2doc.json"
        code, _, err = run(
            capsys, "pipeline", str(source), "--table-region", "40,40,220,120,0", "-o", str(out)
        )
        assert code == 0
        assert "3 rows, 3 columns" in err

    def test_bad_page_index(self, capsys, tmp_path):
        code, _, err = run(
            capsys, "pipeline", str(FIXTURES / "fig1.textlines.json"),
            "--table-region", "0,0,5,5,99", "-o", str(tmp_path / "x"),
        )
        assert code == 2

    def test_malformed_region(self, capsys, tmp_path):
        code, _, err = run(
            capsys, "pipeline", str(FIXTURES / "fig1.textlines.json"),
            "--table-region", "1,2,3", "-o", str(tmp_path / "x"),
        )
        assert code == 2

    def test_output_bytes_identical_across_runs(self, capsys, tmp_path):
        outs = []
        for name in ("a.s2doc.json", "b.s2doc.json"):
            out = tmp_path / name
            assert run(
                capsys, "pipeline", str(FIXTURES / "fig1.textlines.json"),
                "--table-region", "70,90,460,170,6", "-o", str(out),
            )[0] == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_resumable_equals_in_process(self, capsys, tmp_path):
        from s2doc import extract_semantic_tuples

        out = tmp_path / "fig1.s2doc.json"
        assert run(
            capsys, "pipeline", str(FIXTURES / "fig1.textlines.json"),
            "--table-region", "70,90,460,170,6", "-o", str(out),
        )[0] == 0
        _, cli_out, _ = run(capsys, "extract", str(out))
        doc, table_id = run_fig1_pipeline()
        expected = [t.render() for t in extract_semantic_tuples(doc, table_id)]
        assert cli_out.splitlines() == expected


class TestExtract:
    def test_golden_line_present(self, capsys):
        code, out, _ = run(capsys, "extract", GOLDEN)
        assert code == 0
        assert GOLDEN_LINE in out.splitlines()

    def test_headerless_single_cell(self, capsys, tmp_path):
        from s2doc import import_csv

        doc = import_csv(b"v")
        path = tmp_path / "one.s2doc.json"
        path.write_bytes(serialize(doc))
        code, out, _ = run(capsys, "extract", str(path))
        assert code == 0
        assert out.strip() == "⟨[],[],[v]⟩"

    def test_deterministic_output(self, capsys):
        _, first, _ = run(capsys, "extract", GOLDEN)
        _, second, _ = run(capsys, "extract", GOLDEN)
        assert first == second

    def test_incomplete_structure_names_cells(self, capsys, tmp_path):
        from s2doc import TableCell, add_element

        doc, table_id = run_fig1_pipeline()
        stray = add_element(doc, TableCell(id="stray-cell", content="x"), parents=[table_id])
        path = tmp_path / "broken.s2doc.json"
        path.write_bytes(serialize(doc))
        code, _, err = run(capsys, "extract", str(path), "--table", table_id)
        assert code == 1
        assert "stray-cell" in err


class TestAnnotateAndConsistency:
    def test_annotate_then_validate(self, capsys, tmp_path):
        work = tmp_path / "fig1.s2doc.json"
        work.write_bytes((FIXTURES / "fig1.s2doc.json").read_bytes())
        doc = deserialize(work.read_bytes())
        cell = next(
            eid for eid, el in doc.elements.items()
            if el.kind == "tablecell" and el.content == "WAvg.F1"
        )
        code, _, err = run(capsys, "annotate", str(work), "--element", cell,
                           "--entity", "WAvg.F1", "--confidence", "0.9")
        assert code == 0, err
        assert run(capsys, "validate", str(work))[0] == 0
        updated = deserialize(work.read_bytes())
        assert [cell, "WAvg.F1", 0.9] in [
            [a.element, a.node, a.confidence] for a in updated.semantics.annotations
        ]

    def test_annotate_unknown_ids(self, capsys, tmp_path):
        work = tmp_path / "fig1.s2doc.json"
        work.write_bytes((FIXTURES / "fig1.s2doc.json").read_bytes())
        assert run(capsys, "annotate", str(work), "--element", "ghost", "--concept", "Model")[0] == 2
        assert run(capsys, "annotate", str(work), "--element", "e1", "--concept", "Nope")[0] == 2

    def test_self_consistency(self, capsys):
        code, out, _ = run(capsys, "consistency", GOLDEN, GOLDEN)
        assert code == 0
        assert out == ""

    def test_iou_missing_scenario(self, capsys, tmp_path):
        doc = deserialize((FIXTURES / "fig1.s2doc.json").read_bytes())
        table_id = doc.elements_of_kind("table")[0].id
        iou = next(
            cid for cid, el in doc.elements.items()
            if el.kind == "tablecell" and el.content == "IoU"
        )
        col2 = [c for c in table_columns(doc, table_id) if c.data["index"] == 2][0]
        doc.refgraph.remove_edge(col2.id, iou)
        broken = tmp_path / "broken.s2doc.json"
        broken.write_bytes(serialize(doc))
        code, out, _ = run(capsys, "consistency", GOLDEN, str(broken))
        assert code == 1
        assert any("[0.5]" in line and "only in b" in line for line in out.splitlines())
        assert any("[IoU,0.5]" in line and "only in a" in line for line in out.splitlines())


class TestEntrypoint:
    def test_module_invocation(self):
        proc = subprocess.run(
            [sys.executable, "-m", "s2doc", "validate", GOLDEN],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0
        assert proc.stdout.strip() == "OK"

    def test_extract_bytes_identical_across_processes(self):
        runs = [
            subprocess.run(
                [sys.executable, "-m", "s2doc", "extract", GOLDEN],
                capture_output=True,
            ).stdout
            for _ in range(2)
        ]
        assert runs[0] == runs[1] and GOLDEN_LINE.encode("utf-8") in runs[0]

    def test_usage_error_exit_code(self):
        proc = subprocess.run([sys.executable, "-m", "s2doc", "bogus"], capture_output=True)
        assert proc.returncode == 2
