import io
import json
import random

import pytest

from rocstream.cli import ParseError, main, parse_line
from rocstream.core import DataPoint, Label
from rocstream.evaluate import ConfigError, RunConfig, SortedBaseline, run
from rocstream.oracles import offline_auc

from _streams import random_points

GOLDEN = "0.1,2\n0.2,1\n0.3,2\n0.4,1\n"
HEADER = "step,n,n1,n2,auc,h_exact,h_approx,update_micros,baseline_micros"


def invoke(argv, text=""):
    out = io.StringIO()
    code = main(argv, stdin=io.StringIO(text), stdout=out)
    return code, out.getvalue()


def masked(csv_text):
    rows = csv_text.strip().split("\n")
    return [rows[0]] + [",".join(r.split(",")[:7]) for r in rows[1:]]


def test_parse_line():
    assert parse_line("0.73,2") == DataPoint(0.73, Label.CLASS2)
    assert parse_line(" -1e3 , 1 \n") == DataPoint(-1000.0, Label.CLASS1)
    for bad, field in [("abc,1", "score"), ("inf,1", "score"), ("nan,2", "score"),
                       ("0.1,3", "label"), ("0.1", "line"), ("0.1,1,2", "line")]:
        with pytest.raises(ParseError) as e:
            parse_line(bad, line=7)
        assert e.value.line == 7 and e.value.field == field


def test_golden_cumulative():
    code, out = invoke(["-"], GOLDEN)
    assert code == 0
    assert masked(out) == [
        HEADER,
        "1,1,0,1,,,",
        "2,2,1,1,0.0,,",
        "3,3,1,2,0.5,,",
        "4,4,2,2,0.25,,",
    ]


def test_golden_series_matches_oracle():
    pts = [parse_line(l) for l in GOLDEN.split()]
    want = [offline_auc(pts[:i]) for i in range(1, 5)]
    got = [r.auc for r in run(RunConfig(), pts)]
    assert got == want == [None, 0.0, 0.5, 0.25]


def test_golden_sliding():
    code, out = invoke(["-", "--mode", "sliding", "--window", "2"], GOLDEN)
    assert code == 0
    assert masked(out)[-1] == "4,2,1,1,0.0,,"


def test_jsonl_and_file_output(tmp_path):
    src = tmp_path / "in.csv"
    src.write_text("score,label\n" + GOLDEN.replace(",1", ",pos").replace(",2", ",neg"))
    dst = tmp_path / "out.jsonl"
    code, _ = invoke([str(src), "--has-header", "--label-map", "1=pos,2=neg", "--format", "jsonl",
                      "--output", str(dst), "--metrics", "auc,h,happrox", "--baseline"])
    assert code == 0
    rows = [json.loads(l) for l in dst.read_text().splitlines()]
    assert [r["auc"] for r in rows] == [None, 0.0, 0.5, 0.25]
    assert rows[0]["h_exact"] is None and rows[0]["h_approx"] is None
    assert all(isinstance(r["baseline_micros"], int) for r in rows)


def test_report_every_row_count():
    text = "".join(f"{i % 7},{1 + i % 2}\n" for i in range(23))
    code, out = invoke(["-", "--report-every", "5"], text)
    assert code == 0
    assert len(out.strip().split("\n")) == 1 + 23 // 5


def test_rerun_is_deterministic():
    rng = random.Random(1)
    text = "".join(f"{p.score},{int(p.label)}\n" for p in random_points(rng, 200))
    argv = ["-", "--mode", "sliding", "--window", "50", "--metrics", "auc,h,happrox"]
    assert masked(invoke(argv, text)[1]) == masked(invoke(argv, text)[1])


@pytest.mark.parametrize("argv", [
    ["-", "--mode", "sliding"],
    ["-", "--mode", "sliding", "--window", "1"],
    ["-", "--metrics", "bogus"],
    ["-", "--epsilon", "0"],
    ["-", "--alpha", "-1"],
    ["-", "--priors", "0.3,0.3"],
    ["-", "--priors", "half"],
    ["-", "--report-every", "0"],
    ["-", "--label-map", "1=a,1=b"],
    ["-", "--format", "xml"],
    [],
])
def test_config_errors(argv):
    assert invoke(argv, GOLDEN)[0] == 1


@pytest.mark.parametrize("text", ["0.1,2\nabc,1\n", "0.1,2\ninf,1\n", "0.1,5\n", "0.1;2\n"])
def test_parse_errors(text):
    assert invoke(["-"], text)[0] == 2


def test_io_errors(tmp_path):
    assert invoke([str(tmp_path / "missing.csv")])[0] == 3
    assert invoke(["-", "--output", str(tmp_path / "no" / "such" / "dir.csv")], GOLDEN)[0] == 3


def test_explicit_priors_route_h_to_approx():
    cfg = RunConfig(metrics=("auc", "h"), priors=(0.2, 0.8))
    assert cfg.metrics == ("auc", "happrox")
    reps = list(run(cfg, [parse_line(l) for l in GOLDEN.split()]))
    assert reps[-1].h_exact is None and reps[-1].h_approx is not None


def test_run_config_validation():
    with pytest.raises(ConfigError):
        RunConfig(mode="tumbling")
    assert RunConfig(metrics=("h_exact", "h_approx")).metrics == ("h", "happrox")


@pytest.mark.parametrize("seed", range(5))
def test_baseline_agrees_on_random_streams(seed):
    rng = random.Random(seed)
    pts = random_points(rng, 400, distinct=rng.choice([5, 50]), p1=rng.choice([0.5, 0.1]))
    for cfg in [
        RunConfig(mode="sliding", window=60, metrics=("auc", "h", "happrox"), baseline=True),
        RunConfig(metrics=("auc", "h"), priors=(0.1, 0.9), epsilon=0.5, baseline=True, report_every=7),
    ]:
        for rep in run(cfg, pts):
            assert rep.baseline_micros is not None


def test_sorted_baseline_matches_oracle():
    rng = random.Random(8)
    pts = random_points(rng, 300, distinct=30)
    b = SortedBaseline()
    for p in pts:
        b.add(p)
    for p in pts[:100]:
        b.remove(p)
    assert b.auc() == offline_auc(pts[100:])
    with pytest.raises(KeyError):
        b.remove(DataPoint(5.0, Label.CLASS1))
