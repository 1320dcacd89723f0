import json
import shutil
from pathlib import Path

import pytest

from hon_forge.cli import main
from hon_forge.nets import read_net, strict_t

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def golden(tmp_path):
    for f in GOLDEN.iterdir():
        shutil.copy(f, tmp_path / f.name)
    return tmp_path


class TestConstruct:
    def test_pascal_golden(self, capsys, tmp_path):
        out = tmp_path / "p.net"
        assert run(capsys, "construct", "pascal", "--q", 3, "--m", 2, "--s", 2, "--out", out)[0] == 0
        assert out.read_text() == (GOLDEN / "pascal_3_2_2.net").read_text()
        sidecar = json.loads(Path(f"{out}.json").read_text())
        assert sidecar == json.loads((GOLDEN / "pascal_3_2_2.net.json").read_text())

    def test_pascal_stdout(self, capsys):
        code, out, _ = run(capsys, "construct", "pascal", "--q", 3, "--m", 2, "--s", 2)
        assert code == 0 and out == (GOLDEN / "pascal_3_2_2.net").read_text()

    def test_rs_chain(self, capsys):
        code, out, _ = run(capsys, "construct", "rs-chain", "--q", 2, "--s-prime", 2, "--dims", "0,1,2")
        assert code == 0 and out == (GOLDEN / "rep2.chain").read_text()

    def test_bz_golden(self, capsys, golden, tmp_path):
        out = tmp_path / "bz.net"
        code, _, _ = run(
            capsys, "construct", "bz", "--chain", golden / "rep2.chain",
            "--in", f"{golden / 'p1.net'},{golden / 'p2.net'}", "--alpha", 1, "--out", out,
        )
        assert code == 0
        assert out.read_text() == (GOLDEN / "bz_toy.net").read_text()
        sidecar = json.loads(Path(f"{out}.json").read_text())
        assert sidecar == json.loads((GOLDEN / "bz_toy.net.json").read_text())
        assert strict_t(read_net(out, alpha=1)) <= sidecar["t"]

    def test_interlace_round_trip(self, capsys, golden, tmp_path):
        out = tmp_path / "i.net"
        assert run(capsys, "construct", "interlace", "--d", 2, "--in", golden / "p2.net", "--out", out)[0] == 0
        sidecar = json.loads(Path(f"{out}.json").read_text())
        assert (sidecar["s"], sidecar["n"], sidecar["m"], sidecar["alpha"]) == (1, 4, 2, 2)
        code, out_text, _ = run(capsys, "verify", out, "--method", "all")
        assert code == 0 and "agreement: yes" in out_text

    def test_bad_arguments(self, capsys):
        assert run(capsys, "construct", "pascal", "--q", 6, "--m", 2, "--s", 2)[0] == 2
        assert run(capsys, "construct", "pascal", "--q", 3, "--m", 2)[0] == 2
        assert run(capsys, "construct", "rs-chain", "--q", 2, "--s-prime", 3, "--dims", "0,1")[0] == 2


class TestVerify:
    @pytest.mark.parametrize("name", ["pascal_3_2_2.net", "bz_toy.net", "p2.net"])
    def test_all_methods_agree(self, capsys, golden, name):
        code, out, _ = run(capsys, "verify", golden / name, "--method", "all")
        assert code == 0
        assert out.splitlines() == ["rank: pass", "dual: pass", "walsh: pass", "geometric: pass", "agreement: yes"]

    def test_too_small_t_fails(self, capsys, golden):
        code, out, _ = run(capsys, "verify", golden / "bz_toy.net", "--t", 0, "--method", "all")
        assert code == 1
        assert "rank: fail" in out and "agreement: yes" in out

    def test_negative_t(self, capsys, golden):
        assert run(capsys, "verify", golden / "p2.net", "--t", -1)[0] == 2

    def test_missing_file(self, capsys, tmp_path):
        assert run(capsys, "verify", tmp_path / "absent.net")[0] == 2

    def test_enumeration_cap(self, capsys, golden, monkeypatch):
        monkeypatch.setenv("HON_FORGE_MAX_ENUM", "1")
        assert run(capsys, "verify", golden / "pascal_3_2_2.net", "--method", "rank")[0] == 3


class TestTable:
    def test_table_one(self, capsys):
        code, out, _ = run(
            capsys, "table", "--q", 5, "--s", 5, "--m-range", "15:18", "--rules", "dir,xv", "--params", "bundled"
        )
        assert code == 0
        assert out == "m\tsigma_dir\tsigma_xv\n15\t24\t\n16\t26\t19\n17\t28\t\n18\t30\t21\n"

    def test_fallback_warns(self, capsys):
        code, out, err = run(capsys, "table", "--q", 5, "--s", 15, "--m-range", "16:16", "--rules", "xv")
        assert code == 0 and out == "m\tsigma_xv\n16\t13\n"
        assert "t' = 0" in err

    def test_missing_params_file(self, capsys, tmp_path):
        code, out, err = run(
            capsys, "table", "--q", 5, "--s", 25, "--m-range", "30:30", "--rules", "xv", "--params", tmp_path / "x.tsv"
        )
        assert code == 0 and out.endswith("30\t25\n") and err

    def test_bad_range(self, capsys):
        assert run(capsys, "table", "--q", 5, "--s", 5, "--m-range", "30:15")[0] == 2
        assert run(capsys, "table", "--q", 5, "--s", 5, "--m-range", "x")[0] == 2


class TestPoints:
    def test_digits(self, capsys, golden):
        code, out, _ = run(capsys, "points", golden / "p1.net")
        assert code == 0 and out == "0\n1\n"

    def test_decimal(self, capsys, golden):
        code, out, _ = run(capsys, "points", golden / "p2.net", "--format", "decimal")
        lines = sorted(out.splitlines())
        assert code == 0 and lines == sorted(["0.0\t0.0", "0.5\t0.5", "0.25\t0.75", "0.75\t0.25"])

    def test_spectrum(self, capsys, golden):
        code, out, _ = run(capsys, "points", golden / "p1.net", "--r", 1, "--format", "spectrum")
        rows = out.splitlines()
        assert code == 0 and rows[0] == "k_1\te_0\te_1"
        assert rows[1:] == ["0\t2\t0", "1\t1\t1"]
