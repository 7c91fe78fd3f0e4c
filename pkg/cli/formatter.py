class Formatter:
    """Format benchmark tables, classification results and check lines for the terminal."""

    def format_number(self, value) -> str:
        if isinstance(value, bool):
            return "yes" if value else ""
        if isinstance(value, float):
            return f"{value:.4g}"
        return str(value)

    def format_table(self, headers: list[str], rows: list[list]) -> str:
        """Left-aligned text columns separated by two spaces."""
        cells = [[self.format_number(v) for v in row] for row in rows]
        widths = [len(h) for h in headers]
        for row in cells:
            for i, cell in enumerate(row):
                widths[i] = max(widths[i], len(cell))
        lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip()]
        lines.append("  ".join("-" * w for w in widths))
        for row in cells:
            lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
        return "\n".join(lines)

    def format_bench_summary(self, suite, summaries) -> str:
        """Per-cell aggregates, then the raw mean across cells per method."""
        if not suite.aggregates:
            return "No successful runs."
        lines = [
            self.format_table(
                ["config", "method", "seeds", "mean_kl", "std_kl"],
                [[a.config_id, a.method_id, a.seeds, a.mean_kl, a.std_kl] for a in suite.aggregates],
            ),
            "",
            "All cells (raw mean of per-cell mean KL):",
            self.format_table(
                ["method", "cells", "raw_mean_kl", "std"],
                [[s.method_id, s.cells, s.raw_mean_kl, s.std_kl] for s in summaries],
            ),
        ]
        if suite.failures:
            lines.append("")
            lines.append(f"{len(suite.failures)} run(s) failed and were excluded:")
            for f in suite.failures:
                lines.append(f"  {f.config_id}/{f.method_id}/seed={f.seed}: {f.error}")
        return "\n".join(lines)

    def format_store_summary(self, summary: list[dict], worst: dict[str, dict], failures: int) -> str:
        """Per-method view of results.db: every stored run, not per-cell means."""
        lines = [
            f"Stored in results.db ({failures} failed run(s) recorded):",
            self.format_table(
                ["method", "runs", "mean_kl", "worst_run", "worst_kl"],
                [
                    [s["method"], s["runs"], s["mean_kl"], worst[s["method"]]["label"], worst[s["method"]]["mean_kl"]]
                    for s in summary
                ],
            ),
        ]
        return "\n".join(lines)

    def format_classification(self, rows) -> str:
        return self.format_table(
            ["method", "architecture", "hparams", "val_acc", "test_acc", "entropy", "top2"],
            [[r.method_id, r.architecture, r.hparams, r.val_accuracy, r.test_accuracy, r.mean_entropy, r.top2] for r in rows],
        )

    def format_checks(self, results) -> str:
        lines = [f"{'PASS' if r.passed else 'FAIL'}  {r.name}: {r.detail}" for r in results]
        failed = sum(not r.passed for r in results)
        lines.append(f"{len(results) - failed}/{len(results)} checks passed")
        return "\n".join(lines)
