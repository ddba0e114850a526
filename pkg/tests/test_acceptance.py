"""The twelve acceptance criteria at their stated tolerances.

Each criterion prints one PASS/FAIL line.  Run directly with
``python tests/test_acceptance.py`` for just the summary.
"""

import subprocess
import sys
from concurrent.futures import ThreadPoolExecutor

import pytest

from robba.acceptance import CHECKS, run_check
from robba.series import Window

SEED = 42


@pytest.fixture(scope="module")
def results():
    return {}


@pytest.mark.parametrize("k", range(1, len(CHECKS) + 1), ids=lambda k: f"AC{k}")
def test_criterion(k, results, capsys):
    r = run_check(k, Window(), SEED)
    results[k] = r
    with capsys.disabled():
        print(f"\n{r.line()}")
    assert r.passed, r.details


def test_check_all_is_byte_identical(tmp_path, capsys):
    outs = [tmp_path / f"run{i}.json" for i in (1, 2)]
    cmd = [sys.executable, "-m", "robba.cli", "check", "all", "--seed", str(SEED)]
    with ThreadPoolExecutor(2) as ex:
        procs = list(ex.map(lambda o: subprocess.run(cmd + ["--out", str(o)], capture_output=True), outs))
    with capsys.disabled():
        print("\nAC12 byte-identical reports:", outs[0].read_bytes() == outs[1].read_bytes())
    assert [p.returncode for p in procs] == [0, 0], [p.stderr.decode()[-500:] for p in procs]
    assert outs[0].read_bytes() == outs[1].read_bytes()


if __name__ == "__main__":
    ok = True
    for k in range(1, len(CHECKS) + 1):
        r = run_check(k, Window(), SEED)
        print(r.line(), flush=True)
        ok &= r.passed
    sys.exit(0 if ok else 1)
