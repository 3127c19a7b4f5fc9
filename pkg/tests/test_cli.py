import json
import subprocess
import sys

import numpy as np

import flashfps
from flashfps.bench import CSV_HEADER


def run_cli(*args, env=None):
    cmd = [sys.executable, "-m", "flashfps", *map(str, args)]
    return subprocess.run(cmd, capture_output=True, text=True, env=env)


def last_json(proc):
    return json.loads(proc.stdout.strip().splitlines()[-1])


def test_version_matches_package():
    proc = run_cli("--version")
    assert proc.returncode == 0
    assert proc.stdout.strip() == flashfps.__version__


def test_sample_collinear_worked_example(tmp_path):
    out = tmp_path / "idx.txt"
    proc = run_cli("sample", "--generate", "collinear:n=5", "--m", 5,
                   "--seed", 0, "--out-indices", out)
    assert proc.returncode == 0, proc.stderr
    assert out.read_text() == "0\n4\n3\n1\n2\n"
    stats = last_json(proc)
    assert stats["distance_evals"] == 20
    assert stats["iterations"] == 5


def test_flashfps_p0_byte_identical_to_fps(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    src = ["--generate", "uniform:n=500,seed=3", "--m", 100]
    assert run_cli("sample", *src, "--out-indices", a).returncode == 0
    assert run_cli("sample", *src, "--method", "flashfps", "--prune-ratio", 0,
                   "--out-indices", b).returncode == 0
    assert a.read_bytes() == b.read_bytes()


def test_missing_input_is_usage_error():
    proc = run_cli("sample", "--m", 5)
    assert proc.returncode == 2


def test_domain_errors_exit_2_with_structured_message():
    proc = run_cli("sample", "--generate", "uniform:n=10", "--m", 20)
    assert proc.returncode == 2
    err = json.loads(proc.stderr.strip())
    assert err["error"] == "BudgetOutOfRange"

    proc = run_cli("sample", "--generate", "nope:n=10", "--m", 2)
    assert proc.returncode == 2
    assert json.loads(proc.stderr.strip())["error"] == "InvalidSpec"


def test_fps_with_prune_ratio_rejected():
    proc = run_cli("sample", "--generate", "uniform:n=10", "--m", 2,
                   "--prune-ratio", 0.5)
    assert proc.returncode == 2


def test_sample_points_round_trip(tmp_path):
    out = tmp_path / "pts.xyz"
    proc = run_cli("sample", "--generate", "uniform:n=200,seed=9", "--m", 40,
                   "--out-points", out)
    assert proc.returncode == 0, proc.stderr
    from flashfps import GeneratorKind, GeneratorSpec, fps, generate, read_xyz
    cloud = generate(GeneratorSpec(kind=GeneratorKind.UNIFORM_CUBE, n=200,
                                   rng_seed=9))
    sample, _ = fps(cloud, 40, 0)
    assert np.array_equal(read_xyz(out).points, cloud.points[sample.indices])


def test_hier_cache_on_off_identical_files(tmp_path):
    src = ["--generate", "uniform:n=64,seed=5", "--budgets", "8,4,2"]
    on = run_cli("hier", *src, "--cache", "on", "--out-indices",
                 tmp_path / "on")
    off = run_cli("hier", *src, "--cache", "off", "--out-indices",
                  tmp_path / "off")
    assert on.returncode == 0 and off.returncode == 0
    for i in (1, 2, 3):
        a = (tmp_path / f"on_L{i}.txt").read_bytes()
        b = (tmp_path / f"off_L{i}.txt").read_bytes()
        assert a == b
    stats = last_json(on)
    assert [layer["distance_evals"] for layer in stats["layers"]][1:] == [0, 0]
    assert stats["layers"][0]["cache_bytes"] == 8 * 36


def test_hier_rejects_increasing_budgets():
    proc = run_cli("hier", "--generate", "uniform:n=64", "--budgets", "4,8")
    assert proc.returncode == 2
    assert json.loads(proc.stderr.strip())["error"] == "BudgetsNotMonotone"


def test_verify_suites_pass():
    proc = run_cli("verify", "--suite", "prefix", "--trials", 8,
                   "--max-n", 256, "--rng-seed", 1)
    assert proc.returncode == 0, proc.stderr
    stats = last_json(proc)
    assert stats["ok"] is True
    assert stats["suites"][0]["passed"] == 8

    proc = run_cli("verify", "--suite", "oracle", "--trials", 5,
                   "--max-n", 128)
    assert proc.returncode == 0
    assert last_json(proc)["ok"] is True

    proc = run_cli("verify", "--suite", "counters", "--max-n", 4000)
    assert proc.returncode == 0
    assert last_json(proc)["suites"][0]["passed"] == 3


def test_bench_csv_schema_and_counter_stability(tmp_path):
    out = tmp_path / "r.csv"
    proc = run_cli("bench", "--n-list", "512", "--m-ratio", 0.25, "--p-list",
                   "0.5", "--methods", "fps,flashfps", "--repeat", 1,
                   "--out", out)
    assert proc.returncode == 0, proc.stderr
    lines = out.read_text().splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 3  # header + baseline + one flashfps row

    out5 = tmp_path / "r5.csv"
    assert run_cli("bench", "--n-list", "512", "--m-ratio", 0.25, "--p-list",
                   "0.5", "--methods", "fps,flashfps", "--repeat", 5,
                   "--out", out5).returncode == 0
    evals1 = [row.split(",")[7] for row in lines[1:]]
    evals5 = [row.split(",")[7] for row in out5.read_text().splitlines()[1:]]
    assert evals1 == evals5


def test_bench_csv_json_equivalence(tmp_path):
    common = ["--n-list", "256", "--m-ratio", 0.25, "--p-list", "0.25,0.75",
              "--repeat", 1]
    csv_out, json_out = tmp_path / "r.csv", tmp_path / "r.jsonl"
    assert run_cli("bench", *common, "--format", "csv",
                   "--out", csv_out).returncode == 0
    assert run_cli("bench", *common, "--format", "json",
                   "--out", json_out).returncode == 0
    header = csv_out.read_text().splitlines()[0].split(",")
    csv_rows = []
    for line in csv_out.read_text().splitlines()[1:]:
        row = dict(zip(header, line.split(",")))
        csv_rows.append(row)
    json_rows = [json.loads(line) for line in json_out.read_text().splitlines()]
    assert len(csv_rows) == len(json_rows)
    for c, j in zip(csv_rows, json_rows):
        assert set(c) == set(j)
        for key in ("method", "fill"):
            assert c[key] == j[key]
        for key in ("n", "m", "distance_evals", "iterations", "cache_bytes"):
            assert int(c[key]) == j[key]
        for key in ("p", "coverage_radius"):
            assert float(c[key]) == j[key]
        # wall_time_ns differs between the two runs; same type either way
        assert int(c["wall_time_ns"]) >= 0 and j["wall_time_ns"] >= 0


def test_bench_invalid_sweep_exits_2():
    assert run_cli("bench", "--n-list", "256", "--methods", "warp").returncode == 2
    assert run_cli("bench", "--n-list", "", "--methods", "fps").returncode == 2


def test_bench_desk_scale_rows(tmp_path):
    out = tmp_path / "r.csv"
    proc = run_cli("bench", "--n-list", "16384", "--p-list", "0.75",
                   "--methods", "fps,flashfps", "--repeat", 1, "--out", out)
    assert proc.returncode == 0, proc.stderr
    rows = out.read_text().splitlines()[1:]
    assert len(rows) == 2
    fps_row, flash_row = (r.split(",") for r in rows)
    assert fps_row[0] == "fps" and flash_row[0] == "flashfps"
    assert int(flash_row[6]) < int(fps_row[6])  # wall_time_ns at this scale


def test_bench_baseline_row_always_present(tmp_path):
    out = tmp_path / "r.csv"
    assert run_cli("bench", "--n-list", "256", "--p-list", "0.5", "--methods",
                   "flashfps", "--repeat", 1, "--out", out).returncode == 0
    lines = out.read_text().splitlines()
    assert lines[1].startswith("fps,256")
    assert lines[2].startswith("flashfps,256")


def test_threads_do_not_change_bytes(tmp_path):
    files = []
    for threads in (1, 4):
        out = tmp_path / f"t{threads}.txt"
        proc = run_cli("sample", "--generate", "uniform:n=2000,seed=2",
                       "--m", 400, "--method", "flashfps", "--prune-ratio",
                       0.5, "--threads", threads, "--out-indices", out)
        assert proc.returncode == 0
        files.append(out.read_bytes())
    assert files[0] == files[1]


def test_threads_env_fallback(tmp_path):
    import os
    env = dict(os.environ, FLASHFPS_THREADS="3")
    proc = run_cli("sample", "--generate", "uniform:n=50", "--m", 10, env=env)
    assert proc.returncode == 0
    assert last_json(proc)["threads"] == 3


def test_coverage_command(tmp_path):
    idx = tmp_path / "all.txt"
    idx.write_text("0\n1\n2\n3\n4\n")
    proc = run_cli("coverage", "--generate", "collinear:n=5", "--indices", idx)
    assert proc.returncode == 0
    assert last_json(proc)["coverage_radius"] == 0.0

    idx.write_text("9\n")
    assert run_cli("coverage", "--generate", "collinear:n=5",
                   "--indices", idx).returncode == 2


def test_input_file_roundtrip_through_sample(tmp_path):
    cloud_path = tmp_path / "c.xyz"
    cloud_path.write_text("0 0 0\n1 0 0\n2 0 0\n3 0 0\n10 0 0\n")
    out = tmp_path / "o.txt"
    proc = run_cli("sample", "--input", cloud_path, "--m", 5,
                   "--out-indices", out)
    assert proc.returncode == 0
    assert out.read_text() == "0\n4\n3\n1\n2\n"


def test_missing_file_is_structured_error():
    proc = run_cli("sample", "--input", "/nonexistent.xyz", "--m", 5)
    assert proc.returncode == 2
    assert "error" in json.loads(proc.stderr.strip())
