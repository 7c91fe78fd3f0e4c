from bench import AggregateRow, FailedTask, MethodSummary, SuiteResult
from cli.commands import ClassificationRow, mark_top2
from cli.formatter import Formatter
from oracle import CheckResult


def test_format_number():
    f = Formatter()
    assert f.format_number(0.123456789) == "0.1235"
    assert f.format_number(3) == "3"
    assert f.format_number(True) == "yes"
    assert f.format_number(False) == ""


def test_table_columns_align():
    f = Formatter()
    result = f.format_table(["a", "long header"], [["xyz", 1], ["q", 22]])
    lines = result.splitlines()
    assert lines[0] == "a    long header"
    assert lines[1] == "---  -----------"
    assert lines[2] == "xyz  1"
    assert lines[3] == "q    22"


def test_bench_summary_lists_failures():
    f = Formatter()
    suite = SuiteResult(
        aggregates=[AggregateRow("D2-lam1-eps0.1", 2, 1, 0.1, "vnn", 3, 0.25, 0.05)],
        failures=[FailedTask("D2-lam1-eps0.1", "bbb", 1, "loss diverged")],
    )
    result = f.format_bench_summary(suite, [MethodSummary("vnn", 1, 0.25, 0.0)])
    assert "D2-lam1-eps0.1" in result
    assert "raw mean" in result
    assert "D2-lam1-eps0.1/bbb/seed=1: loss diverged" in result


def test_bench_summary_without_results():
    assert Formatter().format_bench_summary(SuiteResult(), []) == "No successful runs."


def test_checks_footer():
    f = Formatter()
    result = f.format_checks([CheckResult("a", True, "ok"), CheckResult("b", False, "off by 10%")])
    assert "PASS  a: ok" in result
    assert "FAIL  b: off by 10%" in result
    assert result.endswith("1/2 checks passed")


def test_top2_per_method_and_architecture():
    rows = [
        ClassificationRow("vnn", "vnn", "mlp", f"lr={lr}", 1, acc, acc, 0.5, None)
        for lr, acc in ((0.003, 0.9), (0.001, 0.7), (0.0003, 0.8))
    ]
    rows.append(ClassificationRow("vnn", "vnn", "micro", "lr=0.001", 1, 0.2, 0.2, 0.5, None))
    rows += [
        ClassificationRow("ensemble", f"ensemble-{k}", "mlp", f"lr=0.001 ensemble_size={k}", 1, acc, acc, 0.3, None)
        for k, acc in ((2, 0.6), (5, 0.4), (10, 0.5))
    ]
    mark_top2(rows)
    assert [r.top2 for r in rows] == [True, False, True, True, True, False, True]
    table = Formatter().format_classification(rows)
    assert "yes" in table
    assert "lr=0.001 ensemble_size=5" in table


def test_store_summary_names_worst_run():
    summary = [{"method": "bbb", "runs": 2, "mean_kl": 0.75}, {"method": "vnn", "runs": 1, "mean_kl": 0.2}]
    worst = {
        "bbb": {"label": "D2-lam1-eps0.1/bbb/seed=1", "mean_kl": 1.0},
        "vnn": {"label": "D2-lam1-eps0.1/vnn/seed=0", "mean_kl": 0.2},
    }
    result = Formatter().format_store_summary(summary, worst, 3)
    lines = result.splitlines()
    assert lines[0] == "Stored in results.db (3 failed run(s) recorded):"
    assert lines[1].split() == ["method", "runs", "mean_kl", "worst_run", "worst_kl"]
    assert lines[3].split() == ["bbb", "2", "0.75", "D2-lam1-eps0.1/bbb/seed=1", "1"]
