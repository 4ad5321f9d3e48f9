import json
import socket
import threading
import time

import numpy as np
import pytest

from frane.cli import main


@pytest.fixture()
def dataset(tmp_path):
    rng = np.random.default_rng(12)
    names = ["f0", "f1", "f2", "f3", "label"]
    lines = [",".join(names)]
    for _ in range(14):
        row = [repr(float(v)) for v in rng.normal(size=4)] + ["1"]
        lines.append(",".join(row))
    path = tmp_path / "data.csv"
    path.write_text("\n".join(lines) + "\n")
    return path


def _run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestRankCommand:
    def test_default_json_output(self, dataset, capsys):
        code, out, err = _run(
            capsys, ["rank", "-i", str(dataset), "--ignore-columns", "label"]
        )
        assert code == 0
        body = json.loads(out)
        assert body["similarity"] == "pearson"
        assert body["progression"] == "geometric"
        assert [row["rank"] for row in body["ranking"]] == [1, 2, 3, 4]
        assert "candidates" not in body

    def test_csv_output(self, dataset, capsys):
        code, out, _ = _run(
            capsys,
            ["rank", "-i", str(dataset), "--ignore-columns", "label", "--format", "csv"],
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "rank,feature,importance"
        assert len(lines) == 5

    def test_output_file(self, dataset, tmp_path, capsys):
        out_path = tmp_path / "ranking.json"
        code, out, _ = _run(
            capsys,
            ["rank", "-i", str(dataset), "--ignore-columns", "label", "-o", str(out_path)],
        )
        assert code == 0
        assert out == ""
        assert json.loads(out_path.read_text())["ranking"]

    def test_alternative_measure_same_schema(self, dataset, capsys):
        code, out, _ = _run(
            capsys,
            [
                "rank", "-i", str(dataset), "--ignore-columns", "label",
                "--similarity", "euclidean", "--progression", "quantile",
            ],
        )
        assert code == 0
        body = json.loads(out)
        assert body["similarity"] == "euclidean"
        assert body["progression"] == "quantile"
        assert len(body["ranking"]) == 4

    def test_candidates_flag(self, dataset, capsys):
        code, out, _ = _run(
            capsys,
            ["rank", "-i", str(dataset), "--ignore-columns", "label", "--candidates"],
        )
        body = json.loads(out)
        assert body["candidates"]
        assert body["rqh"] == max(c["rqh"] for c in body["candidates"])

    def test_dump_graph(self, dataset, tmp_path, capsys):
        graph_path = tmp_path / "graph.txt"
        code, out, _ = _run(
            capsys,
            [
                "rank", "-i", str(dataset), "--ignore-columns", "label",
                "--dump-graph", str(graph_path),
            ],
        )
        assert code == 0
        body = json.loads(out)
        assert "graph_edges" not in body
        for line in graph_path.read_text().strip().splitlines():
            j, k, w = line.split()
            assert int(j) < int(k)
            assert float(w) >= body["threshold"]

    def test_weights_cache_round_trip(self, dataset, tmp_path, capsys):
        cache = tmp_path / "weights.txt"
        code, first, _ = _run(
            capsys,
            [
                "rank", "-i", str(dataset), "--ignore-columns", "label",
                "--save-weights", str(cache),
            ],
        )
        assert code == 0 and cache.exists()
        code, second, _ = _run(
            capsys,
            [
                "rank", "-i", str(dataset), "--ignore-columns", "label",
                "--weights", str(cache),
            ],
        )
        assert code == 0
        assert second == first

    def test_too_few_features_exits_one(self, tmp_path, capsys):
        path = tmp_path / "two.csv"
        path.write_text("a,b\n1,2\n3,4\n")
        code, out, err = _run(capsys, ["rank", "-i", str(path)])
        assert code == 1
        assert "at least 3 features" in err

    def test_missing_input_exits_one(self, tmp_path, capsys):
        code, _, err = _run(capsys, ["rank", "-i", str(tmp_path / "nope.csv")])
        assert code == 1
        assert "cannot read input" in err

    def test_unknown_similarity_exits_two(self, dataset):
        with pytest.raises(SystemExit) as excinfo:
            main(["rank", "-i", str(dataset), "--similarity", "cosine"])
        assert excinfo.value.code == 2

    def test_repeat_is_byte_identical(self, dataset, capsys):
        argv = ["rank", "-i", str(dataset), "--ignore-columns", "label", "--seed", "5"]
        _, first, _ = _run(capsys, argv)
        _, second, _ = _run(capsys, argv)
        assert first == second


class TestDefaults:
    def test_parser_defaults_match_pipeline_config(self):
        from frane.cli import build_parser
        from frane.ranking import FraneConfig

        args = build_parser().parse_args(["rank", "-i", "x.csv"])
        config = FraneConfig()
        assert args.similarity == config.similarity
        assert args.progression == config.progression
        assert args.iterations == config.iterations
        assert args.min_avg_degree == config.min_avg_degree
        assert args.damping == config.damping
        assert args.selection == config.selection
        assert args.seed == config.seed

    def test_evaluate_defaults(self):
        from frane.cli import build_parser
        from frane.evalharness import EvalConfig

        args = build_parser().parse_args(["evaluate", "-i", "x.csv"])
        config = EvalConfig()
        assert args.folds == config.folds
        assert args.k == config.k_neighbors
        assert tuple(args.n_prime) == config.n_prime_list


class TestEvaluateCommand:
    def test_csv_report(self, dataset, capsys):
        code, out, _ = _run(
            capsys,
            [
                "evaluate", "-i", str(dataset), "--ignore-columns", "label",
                "--folds", "2", "--n-prime", "1", "2",
            ],
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "fold,n_prime,rmae"
        assert len(lines) == 1 + 2 * 2 + 2
        assert lines[-2].startswith("mean,1,")

    def test_deterministic_output(self, dataset, capsys):
        argv = [
            "evaluate", "-i", str(dataset), "--ignore-columns", "label",
            "--folds", "2", "--seed", "1", "--n-prime", "2",
        ]
        _, first, _ = _run(capsys, argv)
        _, second, _ = _run(capsys, argv)
        assert first == second

    def test_n_prime_zero_exits_two(self, dataset):
        with pytest.raises(SystemExit) as excinfo:
            main(["evaluate", "-i", str(dataset), "--n-prime", "0"])
        assert excinfo.value.code == 2

    def test_json_format(self, dataset, capsys):
        code, out, _ = _run(
            capsys,
            [
                "evaluate", "-i", str(dataset), "--ignore-columns", "label",
                "--folds", "2", "--n-prime", "1", "--format", "json",
            ],
        )
        body = json.loads(out)
        assert body["rows"] and body["summary"]


class TestCurveCommand:
    def test_grid_rows_ascending(self, dataset, capsys):
        code, out, _ = _run(
            capsys,
            ["curve", "-i", str(dataset), "--ignore-columns", "label", "--folds", "2"],
        )
        assert code == 0
        mean_rows = [l for l in out.strip().splitlines() if l.startswith("mean,")]
        grid = [int(l.split(",")[1]) for l in mean_rows]
        assert grid == [1, 2, 4]  # 4 features


class TestSweepCommand:
    def test_grid_of_blocks(self, dataset, capsys):
        code, out, _ = _run(
            capsys,
            [
                "sweep", "-i", str(dataset), "--ignore-columns", "label",
                "--folds", "2", "--n-prime", "1",
                "--similarities", "pearson", "manhattan",
                "--progressions", "geometric", "quantile",
            ],
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "similarity,progression,fold,n_prime,rmae"
        pairs = {tuple(l.split(",")[:2]) for l in lines[1:]}
        assert pairs == {
            ("pearson", "geometric"), ("pearson", "quantile"),
            ("manhattan", "geometric"), ("manhattan", "quantile"),
        }

    def test_singleton_matches_evaluate(self, dataset, capsys):
        shared = [
            "-i", str(dataset), "--ignore-columns", "label",
            "--folds", "2", "--n-prime", "2", "--seed", "3",
        ]
        _, sweep_out, _ = _run(
            capsys,
            ["sweep", *shared, "--similarities", "chebyshev", "--progressions", "linear_min"],
        )
        _, eval_out, _ = _run(
            capsys,
            ["evaluate", *shared, "--similarity", "chebyshev", "--progression", "linear_min"],
        )
        stripped = [
            line.split(",", 2)[2]
            for line in sweep_out.strip().splitlines()[1:]
        ]
        assert stripped == eval_out.strip().splitlines()[1:]

    def test_unknown_similarity_listed(self, dataset, capsys):
        with pytest.raises(SystemExit) as excinfo:
            main(["sweep", "-i", str(dataset), "--similarities", "bogus"])
        assert excinfo.value.code == 2


@pytest.fixture(scope="module")
def server_url():
    import uvicorn

    from frane.service import create_app

    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        port = sock.getsockname()[1]
    config = uvicorn.Config(create_app(), host="127.0.0.1", port=port, log_level="error")
    server = uvicorn.Server(config)
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    deadline = time.time() + 10
    while not server.started:
        if time.time() > deadline:
            pytest.fail("server did not start")
        time.sleep(0.05)
    yield f"http://127.0.0.1:{port}"
    server.should_exit = True
    thread.join(timeout=5)


class TestRemoteServer:
    def test_remote_matches_local(self, dataset, capsys, server_url):
        argv = ["rank", "-i", str(dataset), "--ignore-columns", "label"]
        _, local, _ = _run(capsys, argv)
        code, remote, _ = _run(capsys, argv + ["--server", server_url])
        assert code == 0
        assert remote == local

    def test_remote_pipeline_error_exits_one(self, tmp_path, capsys, server_url):
        path = tmp_path / "bad.csv"
        path.write_text("a,b,c\n1,x,3\n")
        code, _, err = _run(capsys, ["rank", "-i", str(path), "--server", server_url])
        assert code == 1
        assert "server rejected request (400)" in err

    def test_unreachable_server_exits_one(self, dataset, capsys):
        code, _, err = _run(
            capsys, ["rank", "-i", str(dataset), "--server", "http://127.0.0.1:9"]
        )
        assert code == 1
        assert "failed" in err
