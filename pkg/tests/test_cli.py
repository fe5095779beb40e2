import json
from pathlib import Path

import pytest

from hyperstruct.cli import main
from hyperstruct.document import parse

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


class TestValidate:
    def test_corpus_file_passes(self, capsys):
        code, out = run(capsys, "validate", str(CORPUS / "brunnian_3_3.json"))
        assert code == 0
        assert out.startswith("validate: pass")

    def test_missing_section_is_input_error(self, capsys):
        code, out = run(capsys, "validate", str(CORPUS / "hollow_triangle.json"))
        assert code == 2
        assert out.startswith("error: SchemaError")

    def test_unreadable_file(self, capsys):
        code, out = run(capsys, "validate", "/nonexistent/file.json")
        assert code == 2

    def test_broken_document_reports_and_fails(self, capsys, tmp_path):
        obj = json.loads((CORPUS / "brunnian_3_3.json").read_text())
        obj["hyperstructure"]["levels"][2].append("orphan")
        p = tmp_path / "broken.json"
        p.write_text(json.dumps(obj))
        code, out = run(capsys, "validate", str(p))
        assert code == 1
        assert "non-bond-element" in out


class TestInstallAndBrunnian:
    def test_branching_flow(self, capsys, tmp_path):
        out_path = tmp_path / "b.json"
        code, out = run(capsys, "install", "brunnian", "--branching", "3,3", "--out", str(out_path))
        assert code == 0
        assert "level-0 elements: 9" in out
        code, out = run(capsys, "brunnian", str(out_path))
        assert code == 0
        assert "level-0 elements: 9" in out
        assert "level-1 bonds: 3" in out
        assert "level-2 bonds: 1" in out
        assert "order: 2" in out

    def test_install_hypergraph(self, capsys, tmp_path):
        payload = tmp_path / "hg.json"
        payload.write_text(json.dumps({"vertices": ["a", "b"], "edges": [["a", "b"]]}))
        out_path = tmp_path / "out.json"
        code, out = run(capsys, "install", "hypergraph", str(payload), "--out", str(out_path))
        assert code == 0
        assert "level-1 bonds: 1" in out
        assert parse(out_path.read_text()).hyperstructure is not None

    def test_install_simplicial_graded(self, capsys, tmp_path):
        payload = tmp_path / "sc.json"
        payload.write_text(
            json.dumps(
                {
                    "vertices": ["v0", "v1", "v2"],
                    "simplices": [["v0"], ["v1"], ["v2"], ["v0", "v1"], ["v1", "v2"], ["v0", "v2"], ["v0", "v1", "v2"]],
                }
            )
        )
        code, out = run(capsys, "install", "simplicial", str(payload), "--graded")
        assert code == 0
        assert "level-2 bonds: 1" in out

    def test_bad_branching(self, capsys):
        code, out = run(capsys, "install", "brunnian", "--branching", "1")
        assert code == 2
        assert out.startswith("error: InvalidBranching")


class TestComposeAndFuse:
    def test_compose_weak(self, capsys, tmp_path):
        code, out = run(
            capsys,
            "compose",
            str(CORPUS / "flat_triangle.json"),
            "--a", "1:{v0,v1}",
            "--b", "1:{v1,v2}",
            "--p", "0",
            "--mode", "weak",
            "--id", "glued",
            "--out", str(tmp_path / "composed.json"),
        )
        assert code == 0
        assert "composed:" in out
        doc = parse((tmp_path / "composed.json").read_text())
        assert doc.hyperstructure.has_element(doc.hyperstructure.element(1, "glued"))

    def test_compose_strict_fails_cleanly(self, capsys):
        code, out = run(
            capsys,
            "compose",
            str(CORPUS / "flat_triangle.json"),
            "--a", "1:{v0,v1}",
            "--b", "1:{v1,v2}",
            "--p", "0",
            "--mode", "strict",
            "--id", "glued",
        )
        assert code == 1
        assert out.startswith("error: NotComposable")

    def test_fuse_logs_signature(self, capsys):
        code, out = run(
            capsys,
            "fuse",
            str(CORPUS / "flat_triangle.json"),
            "--a", "1:{v0,v1}",
            "--b", "1:{v1,v2}",
            "--k", "0",
            "--id", "glued",
        )
        assert code == 0
        assert "signature: (k=0, m=1, n=1)" in out

    def test_unknown_bond_reference(self, capsys):
        code, out = run(
            capsys,
            "compose",
            str(CORPUS / "flat_triangle.json"),
            "--a", "1:nope",
            "--b", "1:{v1,v2}",
            "--p", "0",
            "--id", "x",
        )
        assert code == 2
        assert out.startswith("error: UnknownElement")


class TestChecks:
    def test_topology_check_passes(self, capsys):
        code, out = run(capsys, "topology-check", str(CORPUS / "graded_triangle_site.json"))
        assert code == 0
        assert "grothendieck-topology level 2: pass" in out

    def test_topology_check_failure_exit_one(self, capsys, tmp_path):
        obj = json.loads((CORPUS / "graded_triangle_site.json").read_text())
        obj["topology"] = [entry for entry in obj["topology"] if entry[0] != [2, "{v0,v1,v2}"]]
        # keep the key but empty its sieve list
        obj["topology"].append([[2, "{v0,v1,v2}"], []])
        p = tmp_path / "bad.json"
        p.write_text(json.dumps(obj))
        code, out = run(capsys, "topology-check", str(p))
        assert code == 1
        assert "maximality" in out

    def test_globalize_writes_assignment(self, capsys, tmp_path):
        out_path = tmp_path / "g.json"
        code, out = run(capsys, "globalize", str(CORPUS / "graded_triangle_site.json"), "--out", str(out_path))
        assert code == 0
        assert "level 2: {v0,v1,v2}=64" in out
        doc = parse(out_path.read_text())
        assert doc.states.assignment is not None

    def test_localize_regions(self, capsys):
        code, out = run(capsys, "localize", str(CORPUS / "localize_regions.json"))
        assert code == 0
        assert "a='L'" in out and "d='R'" in out

    def test_emergent_none(self, capsys):
        code, out = run(capsys, "emergent", str(CORPUS / "flat_triangle.json"), "--level", "0", "--s1", "v0,v1", "--s2", "v1,v2")
        assert code == 0
        assert "emergent: (none)" in out


class TestNerveAndBetti:
    def test_betti_on_hollow_triangle(self, capsys):
        code, out = run(capsys, "betti", str(CORPUS / "hollow_triangle.json"), "--max-dim", "2")
        assert code == 0
        assert "betti: 1 1" in out

    def test_nerve_listing(self, capsys):
        code, out = run(capsys, "nerve", str(CORPUS / "square_category.json"), "--max-dim", "2")
        assert code == 0
        assert "dim 0: 00 01 10 11" in out
        assert "dim 2:" in out

    def test_nerve_out_feeds_betti(self, capsys, tmp_path):
        out_path = tmp_path / "nerve.json"
        code, _ = run(capsys, "nerve", str(CORPUS / "square_category.json"), "--max-dim", "3", "--out", str(out_path))
        assert code == 0
        code, out = run(capsys, "betti", str(out_path), "--max-dim", "2")
        assert code == 0
        assert "betti: 1 0 0" in out

    def test_betti_from_category(self, capsys):
        code, out = run(capsys, "betti", str(CORPUS / "square_category.json"), "--max-dim", "1")
        assert code == 0
        assert "betti: 1 0" in out


class TestDeterminism:
    @pytest.mark.parametrize(
        "argv",
        [
            ("validate", "brunnian_3_3.json"),
            ("brunnian", "brunnian_3_3.json"),
            ("topology-check", "graded_triangle_site.json"),
            ("globalize", "graded_triangle_site.json"),
            ("betti", "hollow_triangle.json", "--max-dim", "2"),
            ("nerve", "square_category.json", "--max-dim", "2"),
            ("localize", "localize_regions.json"),
        ],
    )
    def test_reports_are_byte_identical(self, capsys, argv):
        cmd = [argv[0], str(CORPUS / argv[1]), *argv[2:]]
        _, first = run(capsys, *cmd)
        _, second = run(capsys, *cmd)
        assert first == second

    def test_out_files_byte_identical(self, capsys, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        run(capsys, "install", "brunnian", "--branching", "2,2,2", "--out", str(a))
        run(capsys, "install", "brunnian", "--branching", "2,2,2", "--out", str(b))
        assert a.read_bytes() == b.read_bytes()


class TestErrorShape:
    def test_first_line_is_machine_parsable(self, capsys):
        code, out = run(capsys, "validate", "/no/such/path.json")
        assert code != 0
        assert out.splitlines()[0].startswith("error: ")
