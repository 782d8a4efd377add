import os
import subprocess
import sys

import numpy as np

from bernseg import kernels
from bernseg._accel import ENV_FLAG


def _sweep_inputs(seq):
    seq = np.asarray(seq, dtype=np.int64)
    one_pos = np.flatnonzero(seq == 1).astype(np.int64) + 1
    cum1 = np.zeros(seq.size + 1, dtype=np.int64)
    np.cumsum(seq, out=cum1[1:])
    return one_pos, cum1, seq.size


def test_sweep_compiled_matches_fallback():
    rng = np.random.default_rng(11)
    for _ in range(25):
        n = int(rng.integers(10, 120))
        seq = (rng.random(n) < 0.15).astype(np.int64)
        if seq.sum() == 0:
            seq[0] = 1
        one_pos, cum1, n = _sweep_inputs(seq)
        fast = kernels.sweep_best_partition(one_pos, cum1, n, 2.0)
        slow = kernels.sweep_best_partition.py_func(one_pos, cum1, n, 2.0)
        assert np.array_equal(fast[0], slow[0])
        assert fast[1] == slow[1]
        assert fast[2] == slow[2]


def test_ward_compiled_matches_fallback():
    rng = np.random.default_rng(12)
    for _ in range(10):
        n = int(rng.integers(8, 60))
        mat = rng.random((n, 4))
        k = int(rng.integers(1, min(5, n - 1) + 1))
        fast = kernels.ward_adjacent_merge(mat, k)
        slow = kernels.ward_adjacent_merge.py_func(mat, k)
        assert np.array_equal(fast[0], slow[0])
        assert np.array_equal(fast[1], slow[1])


def test_sweep_event_count_is_quadratic_in_ones():
    rng = np.random.default_rng(13)
    for _ in range(10):
        n = int(rng.integers(20, 200))
        seq = (rng.random(n) < 0.2).astype(np.int64)
        if seq.sum() == 0:
            seq[0] = 1
        one_pos, cum1, n = _sweep_inputs(seq)
        _, _, events = kernels.sweep_best_partition(one_pos, cum1, n, 2.0)
        m = one_pos.size
        assert events == (m + 1) ** 2  # one event per gap per threshold value


def test_env_flag_selects_fallback():
    code = (
        "import bernseg.kernels as k; import bernseg._accel as a; "
        "assert not a.NUMBA_ENABLED; "
        "assert k.sweep_best_partition is k.sweep_best_partition.py_func; "
        "print('ok')"
    )
    env = dict(os.environ, **{ENV_FLAG: "1"})
    out = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True
    )
    assert out.returncode == 0, out.stderr
    assert out.stdout.strip() == "ok"
