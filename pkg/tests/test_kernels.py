import json
import os
import subprocess
import sys

import numpy as np
import pytest

from sl3web import _kernels
from sl3web.diagram import from_braid_word
from sl3web.statesum import engine_name, invariant

WORDS = [([1, 1, 1], 2), ([1, -2, 1, -2, 1], 3), ([1, 2, 3, 1, 2, 3, -2], 4)]

SCRIPT = """
import json, sys
from sl3web.diagram import from_braid_word
from sl3web.statesum import engine_name, invariant
out = {"engine": engine_name(),
       "values": [invariant(from_braid_word(w, n)).to_json() for w, n in json.loads(sys.argv[1])]}
print(json.dumps(out))
"""


def _run(flag):
    env = dict(os.environ, SL3WEB_NO_NUMBA=flag)
    res = subprocess.run([sys.executable, "-c", SCRIPT, json.dumps(WORDS)], env=env,
                         capture_output=True, text=True, check=True, timeout=600)
    return json.loads(res.stdout)


def test_fallback_matches_compiled():
    slow = _run("1")
    assert slow["engine"] == "python-fallback"
    fast = _run("0")
    expected = [invariant(from_braid_word(w, n)).to_json() for w, n in WORDS]
    assert slow["values"] == expected
    assert fast["values"] == expected


@pytest.mark.skipif(not _kernels.NUMBA_ENABLED, reason="numba not active")
def test_python_source_of_compiled_kernel():
    # the undecorated source must agree with its compiled form
    d = from_braid_word([1, 2, 1, 2], 3)
    from sl3web.statesum import _hist_shape, _kernel_inputs, _expand
    partner, pin, signs = _kernel_inputs(d)
    h1 = np.zeros(_hist_shape(d), dtype=np.int64)
    h2 = np.zeros_like(h1)
    _kernels.state_sum_range(partner, pin, signs, d.free_loops, 0, 1 << d.e, h1)
    _kernels.state_sum_range.py_func(partner, pin, signs, d.free_loops, 0, 1 << d.e, h2)
    assert (h1 == h2).all()
    assert _expand(h1, d.e) == invariant(d, engine="python")


def test_engine_name():
    assert engine_name() in ("numba", "python-fallback")
