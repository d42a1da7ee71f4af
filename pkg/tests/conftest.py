import random
import subprocess
import sys

import pytest


@pytest.fixture
def rng():
    return random.Random(20240601)


def run_dgr(*args):
    """Run the console entry point in a fresh interpreter; returns (exit code, stdout bytes, stderr text)."""
    cmd = [sys.executable, "-c", "import sys; from dgr.cli import main; sys.exit(main())", *args]
    proc = subprocess.run(cmd, capture_output=True)
    return proc.returncode, proc.stdout, proc.stderr.decode()


@pytest.fixture(scope="session")
def reproduce_runs():
    """Two independent reproduce-paper runs at a = 0 with the same seed."""
    return [run_dgr("reproduce-paper", "--a", "0", "--seed", "7", "--quiet") for _ in range(2)]
