import json
import subprocess
import sys

import numpy as np
import pytest

from compnet.cli import entropy_curve, main, parse_thresholds
from compnet.info import entropy

from oracles import H_QUARTER
from goldens import SCENARIOS, close, csv_rows, golden_csv, golden_json



def write_trajectory(path, fingerprints):
    path.write_text("step,fingerprint\n" + "".join(f"{i},{fp}\n" for i, fp in enumerate(fingerprints)))
    return path


class TestRun:
    @pytest.mark.parametrize("name", ["wiki_pages", "dc_gossip", "relay_ring"])
    def test_byte_identical(self, tmp_path, name):
        outputs = []
        for run_dir in ("a", "b"):
            assert main(["run", str(SCENARIOS / f"{name}.toml"), "--out", str(tmp_path / run_dir)]) == 0
            base = tmp_path / run_dir / name
            outputs.append(((base / "trajectory.csv").read_bytes(), (base / "metrics.json").read_bytes()))
        assert outputs[0] == outputs[1]

    def test_wiki_matches_golden(self, tmp_path):
        main(["run", str(SCENARIOS / "wiki_pages.toml"), "--out", str(tmp_path)])
        got = json.loads((tmp_path / "wiki_pages" / "metrics.json").read_text())
        assert close(got, golden_json("wiki_pages.metrics.json"))

    def test_outputs_self_describing(self, tmp_path):
        main(["run", str(SCENARIOS / "relay_ring.toml"), "--out", str(tmp_path)])
        header = (tmp_path / "relay_ring" / "trajectory.csv").read_text().splitlines()[0]
        assert header == "step,fingerprint,readout:a,readout:b,readout:c"
        metrics = json.loads((tmp_path / "relay_ring" / "metrics.json").read_text())
        assert metrics["units"] == "bits"
        assert all(v >= 0 for v in metrics["edge_entropy_bits"].values())

    def test_seed_override(self, tmp_path):
        main(["run", str(SCENARIOS / "dc_gossip.toml"), "--out", str(tmp_path / "a")])
        main(["run", str(SCENARIOS / "dc_gossip.toml"), "--out", str(tmp_path / "b"), "--seed", "99"])
        a = (tmp_path / "a" / "dc_gossip" / "trajectory.csv").read_bytes()
        b = (tmp_path / "b" / "dc_gossip" / "trajectory.csv").read_bytes()
        assert a != b

    def test_social_flooding_reach(self, tmp_path):
        cfg = tmp_path / "flood.toml"
        cfg.write_text('''model = "social"
seed = 4
fast_steps = 20
fast_steps_per_slow_step = 1
[topology]
n = 30
style = "facebook"
[program]
forward_probability = 1.0
novelty_probability = 0.0
[slow]
name = "noop"
[output]
trajectory = "flood.csv"
metrics = "flood.json"
''')
        assert main(["run", str(cfg), "--out", str(tmp_path)]) == 0
        rows = csv_rows((tmp_path / "flood.csv").read_text())[1:]
        reach = [int(sum(r[2:])) for r in rows]
        assert reach[0] == 1 and reach[-1] == 30
        # the diameter of a 30-node attachment graph with m=2 is well under 20
        first_full = reach.index(30)
        assert all(a <= b for a, b in zip(reach, reach[1:])) and first_full <= 20


class TestClassify:
    def run_classify(self, capsys, path, thresholds="transient=4,window=16"):
        assert main(["classify", str(path), "--thresholds", thresholds]) == 0
        return dict(line.split("=", 1) for line in capsys.readouterr().out.split())

    def test_constant(self, tmp_path, capsys):
        out = self.run_classify(capsys, write_trajectory(tmp_path / "t.csv", ["aa"] * 40))
        assert out["class"] == "Static" and float(out["normalized_entropy"]) == 0.0

    def test_alternating(self, tmp_path, capsys):
        out = self.run_classify(capsys, write_trajectory(tmp_path / "t.csv", ["aa", "bb"] * 20))
        assert out == {"class": "Periodic", "period": "2", "normalized_entropy": out["normalized_entropy"]}

    def test_random(self, tmp_path, capsys):
        rng = np.random.default_rng(0)
        fps = [f"{v:016x}" for v in rng.integers(0, 2**63, size=200)]
        out = self.run_classify(capsys, write_trajectory(tmp_path / "t.csv", fps))
        assert out["class"] == "Chaotic" and float(out["normalized_entropy"]) > 0.9

    def test_shipped_run_is_classifiable(self, tmp_path, capsys):
        main(["run", str(SCENARIOS / "relay_ring.toml"), "--out", str(tmp_path)])
        capsys.readouterr()
        out = self.run_classify(capsys, tmp_path / "relay_ring" / "trajectory.csv", "transient=3,window=9")
        assert out["class"] == "Periodic" and out["period"] == "3"

    @pytest.mark.parametrize("text", ["", "step,fingerprint\n", "a,b\n0,x\n", "step,fingerprint\nx,aa\n"])
    def test_malformed(self, tmp_path, text):
        path = tmp_path / "bad.csv"
        path.write_text(text)
        assert main(["classify", str(path)]) == 1

    def test_bad_thresholds(self, tmp_path):
        assert main(["classify", str(write_trajectory(tmp_path / "t.csv", ["a"] * 5)), "--thresholds", "speed=3"]) == 1

    def test_parse_thresholds(self):
        p = parse_thresholds("transient=5,chaos=0.5")
        assert (p.transient, p.window, p.chaos_threshold) == (5, 64, 0.5)


class TestCompare:
    def test_identical_configs(self, tmp_path):
        out = tmp_path / "cmp.csv"
        path = str(SCENARIOS / "dc_gossip.toml")
        assert main(["compare", path, path, "--out", str(out)]) == 0
        rows = csv_rows(out.read_text())
        assert rows[0] == ["metric", "unit", "a", "b", "delta"]
        for row in rows[1:]:
            assert row[4] in (0.0, "")

    def test_social_vs_wiki_golden(self, tmp_path):
        out = tmp_path / "cmp.csv"
        main(["compare", str(SCENARIOS / "social_twitter.toml"), str(SCENARIOS / "wiki_pages.toml"),
              "--out", str(out)])
        assert close(csv_rows(out.read_text()), golden_csv("social_vs_wiki.csv"))

    def test_invalid_side_b(self, tmp_path, capsys):
        bad = tmp_path / "bad.toml"
        bad.write_text('model = "dc"\ncolour = "red"\n')
        assert main(["compare", str(SCENARIOS / "relay_ring.toml"), str(bad)]) == 1
        err = capsys.readouterr().err
        assert "side B" in err and "colour" in err

    def test_runtime_failure_names_side(self, tmp_path, capsys):
        bad = tmp_path / "fails.toml"
        bad.write_text('model = "custom"\n[topology]\nnodes = [{id = "a", program = "no_such_program"}]\n')
        assert main(["compare", str(bad), str(SCENARIOS / "relay_ring.toml")]) == 2
        assert "side A" in capsys.readouterr().err


class TestEntropyCurve:
    def test_rows(self, tmp_path):
        out = tmp_path / "curve.csv"
        assert main(["entropy-curve", "--out", str(out)]) == 0
        rows = csv_rows(out.read_text())
        assert rows[0] == ["p", "H_bits"] and len(rows) == 102
        table = {round(p, 2): h for p, h in rows[1:]}
        assert table[0.5] == 1.0 and table[0.0] == 0.0 and table[1.0] == 0.0
        assert table[0.25] == pytest.approx(H_QUARTER, abs=1e-15)
        assert table[0.25] == entropy({0: 0.25, 1: 0.75})

    def test_symmetric_unique_max(self):
        curve = entropy_curve()
        hs = [h for _, h in curve]
        assert all(abs(hs[i] - hs[100 - i]) <= 1e-12 for i in range(101))
        assert hs.index(max(hs)) == 50 and hs.count(1.0) == 1

    def test_stdout(self, capsys):
        main(["entropy-curve"])
        assert capsys.readouterr().out.startswith("p,H_bits\n0.0,0.0\n")


class TestReplayLog:
    def test_metrics(self, tmp_path):
        log = tmp_path / "edits.csv"
        log.write_text("step,editor_id,page_id,symbols\n0,ann,home,a b\n1,bob,home,a b\n2,ann,faq,q q q\n")
        out = tmp_path / "pages.json"
        assert main(["replay-log", str(log), "--out", str(out)]) == 0
        doc = json.loads(out.read_text())
        assert doc["pages"]["home"]["entropy_bits"] == 1.0
        assert doc["pages"]["faq"]["entropy_bits"] == 0.0
        assert doc["pages"]["home"]["per_editor_entropy_bits"] == {"ann": 1.0, "bob": 1.0}

    def test_missing_file(self, tmp_path):
        assert main(["replay-log", str(tmp_path / "nope.csv")]) == 1


class TestExitCodes:
    def test_validation_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.toml"
        bad.write_text('model = "nn"\nspeed = 2\n')
        assert main(["run", str(bad)]) == 1
        assert "'speed'" in capsys.readouterr().err

    def test_missing_config(self, tmp_path):
        assert main(["run", str(tmp_path / "none.toml")]) == 1

    def test_runtime_error(self, tmp_path):
        bad = tmp_path / "bad.toml"
        bad.write_text('model = "custom"\n[topology]\nnodes = [{id = "a", program = "no_such_program"}]\n')
        assert main(["run", str(bad), "--out", str(tmp_path)]) == 2

    def test_console_entry_point(self, tmp_path):
        proc = subprocess.run([sys.executable, "-m", "compnet", "entropy-curve"], capture_output=True, text=True)
        assert proc.returncode == 0 and len(proc.stdout.splitlines()) == 102

    def test_usage_error(self):
        with pytest.raises(SystemExit) as info:
            main(["frobnicate"])
        assert info.value.code == 2
