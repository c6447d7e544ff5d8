import subprocess
import sys

from flowinv.cli import main

from conftest import fixture_path


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestValidate:
    def test_ok(self, capsys):
        code, out, _ = run(capsys, "validate",
                           str(fixture_path("sphere_rotation.json")))
        assert code == 0 and out.strip() == "OK"

    def test_semantic_failure_exit_one(self, capsys):
        code, _, err = run(capsys, "validate",
                           str(fixture_path("bad_degree.json")))
        assert code == 1 and "degree" in err

    def test_syntax_failure_exit_two(self, capsys):
        code, _, err = run(capsys, "validate",
                           str(fixture_path("bad_truncated.json")))
        assert code == 2 and "parse error" in err

    def test_schema_failure_exit_two(self, capsys):
        code, _, err = run(capsys, "validate",
                           str(fixture_path("bad_unknown_field.json")))
        assert code == 2 and "unknown field" in err

    def test_missing_file(self, capsys):
        code, _, err = run(capsys, "validate", "no_such_file.json")
        assert code == 2


class TestIso:
    def test_disk_eights_not_isomorphic(self, capsys):
        code, out, _ = run(capsys, "iso",
                           str(fixture_path("disk_eight_opposed.json")),
                           str(fixture_path("disk_eight_aligned.json")))
        assert code == 1 and out.strip() == "NO"

    def test_disk_eights_not_isomorphic_with_reversal(self, capsys):
        code, out, _ = run(capsys, "iso",
                           str(fixture_path("disk_eight_opposed.json")),
                           str(fixture_path("disk_eight_aligned.json")),
                           "--reverse-allowed")
        assert code == 1 and out.strip() == "NO"

    def test_self_iso_prints_witness(self, capsys):
        path = str(fixture_path("three_centers_eight.json"))
        code, out, _ = run(capsys, "iso", path, path)
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "YES"
        assert "orientation=preserved" in lines[1]
        assert any(line.startswith("vertex ") for line in lines)


class TestReports:
    def test_classify_sphere(self, capsys):
        code, out, _ = run(capsys, "classify",
                           str(fixture_path("sphere_rotation.json")))
        assert code == 0
        assert out.strip() == ("sv_t0=true sv_t1=true sv_t2=true"
                               " svex_t1=true svex_t2=true")

    def test_classify_three_centers(self, capsys):
        code, out, _ = run(capsys, "classify",
                           str(fixture_path("three_centers_eight.json")))
        assert code == 0
        assert out.strip() == ("sv_t0=true sv_t1=false sv_t2=false"
                               " svex_t1=true svex_t2=true")

    def test_reconstruct_three_centers(self, capsys):
        code, out, _ = run(capsys, "reconstruct",
                           str(fixture_path("three_centers_eight.json")))
        assert code == 0
        assert out.strip() == \
            "component=0 orientable=true genus=0 boundary=0 chi=2"

    def test_canon_deterministic(self, capsys):
        path = str(fixture_path("three_centers_eight.json"))
        code1, out1, _ = run(capsys, "canon", path)
        code2, out2, _ = run(capsys, "canon", path)
        assert code1 == code2 == 0 and out1 == out2
        assert len(out1.strip()) == 64

    def test_export_dot(self, capsys):
        code, out, _ = run(capsys, "export-dot",
                           str(fixture_path("sphere_rotation.json")),
                           "--which", "graph")
        assert code == 0 and out.startswith("graph invariant {")


class TestRealizeAndEnumerate:
    def test_realize_star(self, capsys):
        code, out, _ = run(capsys, "realize",
                           str(fixture_path("star_graph.json")))
        assert code == 0
        from flowinv.model_io import parse_model

        pair = parse_model(out)
        assert len(pair.diagram.saddles) == 1

    def test_realize_trivial_graph(self, tmp_path, capsys):
        f = tmp_path / "trivial.json"
        f.write_text('{"vertices": ["v"], "edges": []}')
        code, _, err = run(capsys, "realize", str(f))
        assert code == 1 and "not realizable" in err

    def test_enumerate_stream_format(self, capsys):
        code, out, _ = run(capsys, "enumerate", "--max-centers", "2",
                           "--max-annuli", "1", "--max-tori", "1",
                           "--closed-only", "--orientable-only")
        assert code == 0
        lines = out.strip().splitlines()
        assert len(lines) == 2
        for line in lines:
            digest, doc = line.split(" ", 1)
            assert len(digest) == 64
            from flowinv.model_io import parse_model

            parse_model(doc)

    def test_enumerate_byte_stable(self, capsys):
        args = ("enumerate", "--max-saddles", "1", "--max-k-sum", "1",
                "--max-centers", "2", "--max-annuli", "2")
        code1, out1, _ = run(capsys, *args)
        code2, out2, _ = run(capsys, *args)
        assert code1 == code2 == 0 and out1 == out2


class TestUsage:
    def test_unknown_command(self, capsys):
        assert main(["frobnicate"]) == 64

    def test_missing_argument(self, capsys):
        assert main(["iso", "only_one.json"]) == 64

    def test_no_command(self, capsys):
        assert main([]) == 64


def test_console_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "flowinv", "classify",
         str(fixture_path("periodic_torus.json"))],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "sv_t1=true" in proc.stdout
