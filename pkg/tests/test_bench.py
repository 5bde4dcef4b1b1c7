from rocstream.bench import run_benchmark, scaling, synthetic_stream


def test_synthetic_stream_is_reproducible_and_tied():
    a = [p for _, p in zip(range(2000), synthetic_stream(3))]
    b = [p for _, p in zip(range(2000), synthetic_stream(3))]
    assert a == b
    assert len({p.score for p in a}) < len(a)


def test_small_benchmark_runs():
    r = run_benchmark(window=500, steps=200)
    for m in ("auc", "h"):
        assert r[m]["dynamic_s"] > 0 and r[m]["baseline_s"] > 0
    s = scaling(windows=(200, 400), steps=100, metrics=("auc",))
    assert len(s["ratios"]["auc"]) == 1
