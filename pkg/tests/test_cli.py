import json
import subprocess
import sys
import time
from importlib import resources

import jsonschema
import pytest

from vsarpm.cli import main
from vsarpm.domain import load_jsonl, verify_rules


@pytest.fixture(scope="module")
def schema():
    return json.loads(resources.files("vsarpm").joinpath("schemas/trace.schema.json").read_text())


@pytest.fixture
def dataset(tmp_path):
    path = tmp_path / "d.jsonl"
    assert main(["generate", "--seed", "3", "--n", "4", "--out", str(path)]) == 0
    return path


def test_generate_center(tmp_path):
    path = tmp_path / "c.jsonl"
    assert main(["generate", "--constellation", "center", "--n", "10", "--out", str(path)]) == 0
    tests = load_jsonl(path)
    assert len(path.read_text().splitlines()) == 10
    assert all(verify_rules(t) for t in tests)


def test_generate_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    for p in (a, b):
        main(["generate", "--seed", "5", "--n", "3", "--constellation", "3x3", "--constellation", "O-IC",
              "--mode", "fair", "--out", str(p)])
    assert a.read_bytes() == b.read_bytes()


def test_generate_full_suite_is_fast(tmp_path):
    t0 = time.perf_counter()
    main(["generate", "--n", "200", "--out", str(tmp_path / "all.jsonl")])
    assert time.perf_counter() - t0 < 10
    assert len((tmp_path / "all.jsonl").read_text().splitlines()) == 1400


def test_solve_trace_and_eval(tmp_path, dataset, schema, capsys):
    answers, trace = tmp_path / "a.txt", tmp_path / "t.json"
    assert main(["solve", str(dataset), "--out", str(answers), "--trace", str(trace)]) == 0
    assert "Center" in capsys.readouterr().err
    doc = json.loads(trace.read_text())
    jsonschema.validate(doc, schema)
    assert len(doc["tests"]) == 28
    assert main(["eval", str(dataset), "--answers", str(answers), "--out", str(tmp_path / "r.json")]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0].split()[1:] == ["Avg", "Center", "2x2", "3x3", "L-R", "U-D", "O-IC", "O-IG"]
    report = json.loads((tmp_path / "r.json").read_text())
    assert report["results"][0]["avg"] == 100.0


def test_eval_known_wrong_answers(tmp_path, dataset):
    tests = load_jsonl(dataset)
    wrong = [t.answer_index % 8 + 1 if i % 4 == 0 else t.answer_index for i, t in enumerate(tests)]
    (tmp_path / "w.txt").write_text("".join(f"{a}\n" for a in wrong))
    main(["eval", str(dataset), "--answers", str(tmp_path / "w.txt"), "--out", str(tmp_path / "r.json")])
    report = json.loads((tmp_path / "r.json").read_text())["results"][0]
    # an independent recount: one wrong answer in every constellation's four tests
    assert all(v == 75.0 for v in report["per_constellation"].values())
    assert report["avg"] == 75.0


def test_agreement_matrix_between_engines(tmp_path, capsys):
    data = tmp_path / "c.jsonl"
    main(["generate", "--n", "5", "--constellation", "center", "--constellation", "L-R", "--out", str(data)])
    main(["solve", str(data), "--out", str(tmp_path / "v.txt")])
    main(["solve", str(data), "--engine", "exact", "--out", str(tmp_path / "x.txt")])
    capsys.readouterr()
    main(["eval", str(data), "--answers", str(tmp_path / "v.txt"), "--answers", str(tmp_path / "x.txt"),
          "--out", str(tmp_path / "r.json")])
    report = json.loads((tmp_path / "r.json").read_text())
    assert report["agreement"]["percent"] == [[100.0, 100.0], [100.0, 100.0]]
    assert "agreement" in capsys.readouterr().out


def test_parallel_solve_preserves_order(tmp_path, dataset, monkeypatch):
    main(["solve", str(dataset), "--out", str(tmp_path / "serial.txt")])
    monkeypatch.setenv("NVSA_THREADS", "3")
    main(["solve", str(dataset), "--out", str(tmp_path / "pool.txt")])
    assert (tmp_path / "serial.txt").read_bytes() == (tmp_path / "pool.txt").read_bytes()


def test_exit_codes(tmp_path, dataset, capsys):
    assert main(["solve", str(tmp_path / "missing.jsonl")]) == 2
    lines = dataset.read_text().splitlines()
    lines[2] = lines[2][:-5]
    bad = tmp_path / "bad.jsonl"
    bad.write_text("\n".join(lines) + "\n")
    assert main(["solve", str(bad)]) == 3
    assert "line 3" in capsys.readouterr().err
    (tmp_path / "short.txt").write_text("1\n2\n")
    assert main(["eval", str(dataset), "--answers", str(tmp_path / "short.txt")]) == 4
    (tmp_path / "junk.txt").write_text("1\nx\n")
    assert main(["eval", str(dataset), "--answers", str(tmp_path / "junk.txt")]) == 3
    assert main(["generate", "--out", str(tmp_path / "no" / "dir" / "x.jsonl")]) == 2
    assert main(["generate", "--constellation", "hex"]) == 3


def test_codec_perception(tmp_path):
    data = tmp_path / "c.jsonl"
    main(["generate", "--n", "5", "--constellation", "center", "--out", str(data)])
    assert main(["solve", str(data), "--perception", "codec", "--out", str(tmp_path / "a.txt")]) == 0
    answers = [int(x) for x in (tmp_path / "a.txt").read_text().split()]
    assert answers == [t.answer_index for t in load_jsonl(data)]


def test_bench_backend_report(tmp_path, capsys):
    out = tmp_path / "b.json"
    assert main(["bench", "--reps", "2", "--n", "3", "--instances", "1", "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["position_distribute_three"]["speedup"] > 1
    assert {t["engine"] for t in report["throughput"]} == {"vsa", "exact"}
    assert "speedup" in capsys.readouterr().out


def test_bench_codec_report(tmp_path):
    out = tmp_path / "b.json"
    assert main(["bench", "--suite", "codec", "--reps", "2", "--n", "20", "--out", str(out)]) == 0
    assert [r["k"] for r in json.loads(out.read_text())["recovery"]] == list(range(1, 10))


def test_console_script_runs(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "vsarpm.cli", "generate", "--n", "1", "--constellation", "center"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["constellation"] == "center"
