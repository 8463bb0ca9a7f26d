import json

import pytest

from blowup_moduli.cli import main
from blowup_moduli.monad import config_to_json, scalar_config0, scalar_config1


@pytest.fixture
def good_config0(tmp_path):
    cfg = scalar_config0(0, 0, [1, 0], [0, 1])
    path = tmp_path / "m0.json"
    path.write_text(json.dumps(config_to_json(cfg)))
    return path


@pytest.fixture
def degenerate_config0(tmp_path):
    cfg = scalar_config0(0, 0, [1, 0], [0, 0])  # c = 0
    path = tmp_path / "deg.json"
    path.write_text(json.dumps(config_to_json(cfg)))
    return path


class TestBetti:
    def test_closed_form_rows(self, capsys):
        assert main(["betti", "--charge", "2", "--q", "2", "--max-degree", "6"]) == 0
        out = capsys.readouterr().out.strip().split("\n")
        assert out[0] == "degree\trank\ttorsion"
        rows = {int(l.split("\t")[0]): int(l.split("\t")[1]) for l in out[1:]}
        assert (rows[0], rows[2], rows[4], rows[6]) == (1, 3, 9, 18)
        assert rows[1] == rows[3] == rows[5] == 0

    def test_charge1_q0(self, capsys):
        assert main(["betti", "--charge", "1", "--q", "0", "--max-degree", "8"]) == 0
        out = capsys.readouterr().out.strip().split("\n")
        rows = {int(l.split("\t")[0]): int(l.split("\t")[1]) for l in out[1:]}
        assert all(rows[2 * n] == 1 for n in range(5))

    def test_methods_agree(self, capsys):
        main(["betti", "--charge", "2", "--q", "5", "--method", "simplex", "--max-degree", "10"])
        simplex_out = capsys.readouterr().out
        main(["betti", "--charge", "2", "--q", "5", "--method", "closed-form", "--max-degree", "10"])
        closed_out = capsys.readouterr().out
        assert simplex_out == closed_out

    def test_json_format(self, capsys):
        assert main(["betti", "--charge", "2", "--q", "0", "--format", "json", "--max-degree", "4"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["degrees"][4] == {"degree": 4, "rank": 2, "torsion": []}

    def test_invalid_combination(self, capsys):
        assert main(["betti", "--charge", "2", "--q", "3", "--method", "cech"]) == 2
        assert main(["betti", "--charge", "1", "--q", "3", "--method", "simplex"]) == 2

    def test_byte_stable(self, capsys):
        main(["betti", "--charge", "2", "--q", "2", "--max-degree", "8"])
        first = capsys.readouterr().out
        main(["betti", "--charge", "2", "--q", "2", "--max-degree", "8"])
        assert capsys.readouterr().out == first


class TestVerify:
    def test_good_config(self, good_config0, capsys):
        assert main(["verify-config", "--file", str(good_config0)]) == 0
        out = capsys.readouterr().out
        assert "integrability: ok" in out
        assert "monad-complex: ok" in out

    def test_degenerate_fails_nondegeneracy(self, degenerate_config0):
        code = main(
            ["verify-config", "--file", str(degenerate_config0), "--checks", "nondegeneracy"]
        )
        assert code == 1

    def test_degenerate_passes_integrability(self, degenerate_config0):
        code = main(
            ["verify-config", "--file", str(degenerate_config0), "--checks", "integrability"]
        )
        assert code == 0

    def test_malformed_scalar(self, tmp_path):
        bad = tmp_path / "bad.json"
        data = config_to_json(scalar_config0(0, 0, [1], [0]))
        data["a1"] = [["1/0"]]
        bad.write_text(json.dumps(data))
        assert main(["verify-config", "--file", str(bad)]) == 2

    def test_missing_file(self, tmp_path):
        assert main(["verify-config", "--file", str(tmp_path / "nope.json")]) == 2

    def test_unknown_check(self, good_config0):
        assert main(["verify-config", "--file", str(good_config0), "--checks", "frobnicate"]) == 2


class TestGlueAndClassify:
    def test_glue_boxplus0(self, tmp_path, capsys):
        left = tmp_path / "l.json"
        right = tmp_path / "r.json"
        left.write_text(json.dumps(config_to_json(scalar_config0(0, 0, [1, 0], [0, 1]))))
        right.write_text(json.dumps(config_to_json(scalar_config0(1, 0, [0, 1], [1, 0]))))
        out = tmp_path / "glued.json"
        code = main(
            [
                "glue", "--op", "boxplus0",
                "--left", str(left), "--right", str(right), "--out", str(out),
            ]
        )
        assert code == 0
        data = json.loads(out.read_text())
        assert data["kind"] == "config0" and data["k"] == 2
        assert data["provenance"]["operation"] == "boxplus0"
        assert data["a2"] == [["0", "1"], ["-1", "0"]]

    def test_glue_collision(self, tmp_path):
        left = tmp_path / "l.json"
        right = tmp_path / "r.json"
        left.write_text(json.dumps(config_to_json(scalar_config0(1, 0, [1, 0], [0, 1]))))
        right.write_text(json.dumps(config_to_json(scalar_config0(1, 0, [0, 1], [1, 0]))))
        assert main(["glue", "--op", "boxplus0", "--left", str(left), "--right", str(right)]) == 1

    def test_glue_then_classify(self, tmp_path, capsys):
        m1 = scalar_config1(2, 3, 0, [1, 0], [0, 1])
        m2 = scalar_config0(1, 0, [0, 1], [0, 0])  # c'' = 0: lands in the locus image
        left = tmp_path / "m1.json"
        right = tmp_path / "m2.json"
        left.write_text(json.dumps(config_to_json(m1)))
        right.write_text(json.dumps(config_to_json(m2)))
        glued = tmp_path / "glued.json"
        assert main(
            ["glue", "--op", "boxplusL", "--left", str(left), "--right", str(right), "--out", str(glued)]
        ) == 0
        capsys.readouterr()
        assert main(["classify", "--file", str(glued)]) == 0
        out = capsys.readouterr().out
        assert out.startswith("InImage")

    def test_classify_rejects(self, tmp_path, capsys):
        m1 = scalar_config1(2, 3, 0, [1, 0], [0, 1])
        m2 = scalar_config0(1, 0, [0, 1], [1, 0])  # fully framed: c d b != 0
        from blowup_moduli.gluing import boxplusL

        glued = tmp_path / "glued.json"
        glued.write_text(json.dumps(config_to_json(boxplusL(m1, m2))))
        assert main(["classify", "--file", str(glued)]) == 1
        assert "NotInImage" in capsys.readouterr().out


class TestSuite:
    def test_filtered_run(self, capsys):
        code = main(["suite", "--filter", "baselines", "--seed", "7"])
        out = capsys.readouterr().out
        assert code == 0
        assert "PASS charge2-baselines-q0-q1" in out

    def test_deterministic_report(self, capsys):
        main(["suite", "--filter", "spectral", "--seed", "7", "--max-degree", "8"])
        first = capsys.readouterr().out
        main(["suite", "--filter", "spectral", "--seed", "7", "--max-degree", "8"])
        second = capsys.readouterr().out
        # strip timings: determinism applies to verdicts and ordering
        strip = lambda text: [l.split(" (")[0] for l in text.strip().split("\n")]
        assert strip(first) == strip(second)

    def test_unmatched_filter(self, capsys):
        assert main(["suite", "--filter", "zzz"]) == 2
