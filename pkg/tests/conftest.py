import json
import os
import subprocess
import sys
from pathlib import Path

import pytest
import sympy

ROOT = Path(__file__).resolve().parent.parent
INPUTS = ROOT / "inputs"


def to_sympy(p, symbols=None):
    """A Poly (or its string) as a sympy expression; ``I`` is the imaginary unit."""
    text = str(p).replace("^", "**")
    ns = {"I": sympy.I}
    if symbols:
        ns.update(symbols)
    return sympy.expand(sympy.sympify(text, locals=ns))


def run_cli(*args, check=None):
    """Run ``python -m isochron`` and return the completed process."""
    env = dict(os.environ)
    env["PYTHONPATH"] = str(ROOT / "src") + os.pathsep + env.get("PYTHONPATH", "")
    proc = subprocess.run(
        [sys.executable, "-m", "isochron", *map(str, args)],
        capture_output=True,
        text=True,
        cwd=ROOT,
        env=env,
        timeout=600,
    )
    if check is not None:
        assert proc.returncode == check, (proc.returncode, proc.stdout, proc.stderr)
    return proc


def cli_json(*args, check=0):
    return json.loads(run_cli("--format", "json", *args, check=check).stdout)


@pytest.fixture
def inputs():
    return INPUTS


CRITERIA = []


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in sorted(CRITERIA, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
