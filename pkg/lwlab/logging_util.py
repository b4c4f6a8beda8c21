"""Logging and suite reporting module."""

import logging
from datetime import datetime
from pathlib import Path

from .constants import DEFAULT_LOG_DIR


class SuiteLogger:
    def __init__(self, log_dir=DEFAULT_LOG_DIR, suite=None, show_success=False, run_dir=None):
        base_dir = Path(log_dir).resolve()
        run_label = run_dir or datetime.now().strftime("run_%Y%m%d_%H%M%S")
        self.suite = suite or "unnamed_suite"
        self.log_dir = base_dir / run_label
        self.log_file = self.log_dir / f"{self.suite}.log"
        self.failures_file = self.log_dir / "failures.md"
        self._initialized = False
        self._failures = []
        self.show_success = show_success
        self.logger = logging.getLogger("lwlab")
        self.logger.setLevel(logging.DEBUG)
        self.logger.handlers.clear()
        ch = logging.StreamHandler()
        ch.setLevel(logging.INFO)
        ch.setFormatter(logging.Formatter("[%(levelname)s] %(message)s"))
        self.logger.addHandler(ch)

    def _ensure_file_logging(self):
        if self._initialized:
            return
        self.log_dir.mkdir(parents=True, exist_ok=True)
        fh = logging.FileHandler(self.log_file, encoding="utf-8")
        fh.setLevel(logging.DEBUG)
        fh.setFormatter(
            logging.Formatter("[%(asctime)s] %(levelname)s: %(message)s", datefmt="%Y-%m-%d %H:%M:%S")
        )
        self.logger.addHandler(fh)
        self._initialized = True

    def close(self):
        for handler in list(self.logger.handlers):
            handler.close()
            self.logger.removeHandler(handler)
        self._initialized = False

    @staticmethod
    def _describe(row):
        return (
            f"{row.check_id} [{row.body_id}, n={row.dim}] lhs={row.lhs:.10g} rhs={row.rhs:.10g} "
            f"margin={row.margin:.3e} status={row.status.upper()}"
        )

    def log_row(self, index, row):
        if row.status in ("fail", "error", "drift"):
            self._ensure_file_logging()
            self._failures.append(row)
            self.logger.warning(f"[Row {index}] {self._describe(row)}")
            if row.status == "error":
                self.logger.warning(f"  {row.witness.get('error', 'unknown error')}")
        elif self.show_success:
            self.logger.info(f"[Row {index}] {self._describe(row)}")
        else:
            self.logger.debug(f"[Row {index}] {self._describe(row)}")

    def log_session_start(self, suites, cfg):
        self.logger.info("=" * 70)
        self.logger.info("INEQUALITY VERIFICATION STARTED")
        self.logger.info(f"Suites: {', '.join(suites)}")
        self.logger.info(f"Dims: {list(cfg.dims)} | Trials: {cfg.trials} | Seed: {cfg.seed}")
        self.logger.info(f"Threads: {cfg.threads} | Restarts: {cfg.restarts}")
        self.logger.info(f"Log: {self.log_file}")
        self.logger.info("=" * 70)

    def log_session_end(self, summary):
        self.logger.info("=" * 70)
        self.logger.info("VERIFICATION COMPLETED")
        self.logger.info(
            f"Total: {summary['total']} | Pass: {summary['pass']} | Report: {summary['report']} "
            f"| Fail: {summary['fail']} | Error: {summary['error']} | Drift: {summary['drift']}"
        )
        self.logger.info(f"Failure Rate: {summary['failure_rate'] * 100:.2f}%")
        self.logger.info("=" * 70)
        self._write_failures(summary)

    def _write_failures(self, summary):
        if not self._failures:
            return
        self._ensure_file_logging()
        with open(self.failures_file, "w", encoding="utf-8") as f:
            f.write(f"# {self.suite}\n\n")
            f.write("Rows that failed, errored or drifted from the regression snapshot.\n\n")
            f.write("## Summary\n\n")
            f.write(f"- Total rows: {summary['total']}\n")
            f.write(f"- Failures: {summary['fail']}\n")
            f.write(f"- Errors: {summary['error']}\n")
            f.write(f"- Drift: {summary['drift']}\n\n")
            by_check = {}
            for row in self._failures:
                by_check.setdefault(row.check_id, []).append(row)
            for check_id, rows in by_check.items():
                f.write(f"## {check_id}\n\n")
                f.write(f"Count: {len(rows)}\n\n")
                for row in rows[:3]:
                    f.write(f"- `{row.body_id}` (n={row.dim}): lhs {row.lhs:.17g}, rhs {row.rhs:.17g}, ")
                    f.write(f"margin {row.margin:.3e}, status {row.status}\n")
                    if row.status == "error":
                        f.write(f"  - {row.witness.get('error', '')}\n")
                if len(rows) > 3:
                    f.write(f"\n...and {len(rows) - 3} more\n")
                f.write("\n")
