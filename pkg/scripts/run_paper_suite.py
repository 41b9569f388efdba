#!/usr/bin/env python3
"""
Golden example suite runner for cron / CI.

Runs every golden case, logs one line per case with its provenance tag and
runtime, and exits nonzero when any case fails. DERHAM_THREADS caps the
number of cases computed at once (0 = one after another).

Examples:
  python scripts/run_paper_suite.py
  python scripts/run_paper_suite.py --golden /tmp/golden.json
  DERHAM_THREADS=4 python scripts/run_paper_suite.py
"""

import argparse
import asyncio
import logging
import os
import sys

from dotenv import load_dotenv

# Add parent directory to path to allow importing app modules
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

# Ensure environment variables are loaded
load_dotenv()

from app.services.suite import run_suite


def setup_cron_logging() -> logging.Logger:
    """Configure logging for cron jobs (stdout only)."""
    logging.basicConfig(
        level=logging.INFO,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
        handlers=[logging.StreamHandler(sys.stdout)],
    )
    logging.getLogger("sympy").setLevel(logging.WARNING)
    return logging.getLogger(__name__)


logger = setup_cron_logging()


async def main() -> int:
    parser = argparse.ArgumentParser(description="Run the golden example suite")
    parser.add_argument("--golden", default=None, help="Alternative golden file")
    parser.add_argument("--only", nargs="*", default=None, help="Run only these case names")
    args = parser.parse_args()

    report = await run_suite(args.golden, only=args.only)
    for case in report.cases:
        logger.info(
            "%-34s %-8s %-5s %.3fs", case.name, case.provenance, case.status, case.runtime_seconds
        )
        for line in case.diff or []:
            logger.warning("  %s", line)
        if case.error:
            logger.error("  %s", case.error)

    summary = report.summary()
    logger.info("Suite run %s: %s/%s passed", summary["run_id"], summary["passed"], summary["total"])
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(asyncio.run(main()))
