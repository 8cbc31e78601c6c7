"""State-sum evaluation of the sl3 link polynomial.

A state picks the oriented (O) or web (W) resolution at every crossing.
With ``alpha``/``beta`` counting O/W choices on positive (``+``) and
negative (``-``) crossings, the phase of a state is

    (-1)^(beta+ + beta-) * q^(-2(alpha+ - alpha-) - 3(beta+ - beta-))

and the invariant is the sum over states of phase times the value of the
resolved web.  States are bitmasks over crossings in index order (bit set
means W).
"""

from __future__ import annotations

import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .diagram import LinkDiagram, State, resolution_state_diagram, seifert_circles
from .laurent import ZERO, LaurentPoly, qint_power
from .seifert import SeifertGraph, build_seifert_graph
from .web import evaluate as evaluate_web

DEFAULT_CAP = 20


class CapExceeded(ValueError):
    pass


class EngineError(RuntimeError):
    pass


@dataclass(frozen=True)
class StateWeight:
    alpha_plus: int
    beta_plus: int
    alpha_minus: int
    beta_minus: int
    phase: LaurentPoly
    web_value: LaurentPoly
    weight: LaurentPoly


def _counts(d: LinkDiagram, s: State) -> tuple[int, int, int, int]:
    ap = bp = am = bm = 0
    for c, x in enumerate(d.crossings):
        w = s.is_w(c)
        if x.sign > 0:
            bp += w
            ap += not w
        else:
            bm += w
            am += not w
    return ap, bp, am, bm


def phase(d: LinkDiagram, s: State) -> LaurentPoly:
    ap, bp, am, bm = _counts(d, s)
    sign = -1 if (bp + bm) % 2 else 1
    return LaurentPoly({-2 * (ap - am) - 3 * (bp - bm): sign})


def state_weight(d: LinkDiagram, s: State) -> StateWeight:
    ap, bp, am, bm = _counts(d, s)
    ph = phase(d, s)
    val = evaluate_web(resolution_state_diagram(d, s))
    return StateWeight(ap, bp, am, bm, ph, val, ph * val)


def degree(d: LinkDiagram, s: State) -> int:
    """Top degree of the state's weight."""
    w = state_weight(d, s).weight
    if w.is_zero():
        raise EngineError(f"state {s} has zero weight")
    return w.degree()


def state_graph(d: LinkDiagram, s: State) -> SeifertGraph:
    """Seifert graph restricted to the W-resolved crossings."""
    return build_seifert_graph(seifert_circles(d), keep=s.w_set())


# full sums


def _check_cap(d: LinkDiagram, cap: int | None) -> None:
    cap = DEFAULT_CAP if cap is None else cap
    if d.e > cap:
        raise CapExceeded(f"{d.e} crossings exceeds the enumeration cap of {cap}")


def _kernel_inputs(d: LinkDiagram):
    partner = np.array(d.port_partner(), dtype=np.int64)
    pin = np.array([x.p for x in d.crossings], dtype=np.int64)
    signs = np.array(d.signs, dtype=np.int64)
    return partner, pin, signs


def _hist_shape(d: LinkDiagram) -> tuple[int, int, int]:
    e = d.e
    return 6 * e + 1, e + 2, 3 * e + d.free_loops + 3


def _run_range(args) -> np.ndarray:
    partner, pin, signs, free, start, stop, shape = args
    hist = np.zeros(shape, dtype=np.int64)
    status = _kernels.state_sum_range(partner, pin, signs, free, start, stop, hist)
    if status != _kernels.OK:
        raise EngineError(f"state-sum kernel failed with status {status}")
    return hist


def _expand(hist: np.ndarray, e: int) -> LaurentPoly:
    out = ZERO
    for k, a, b in zip(*np.nonzero(hist)):
        n = int(hist[k, a, b])
        term = qint_power(2, int(a)) * qint_power(3, int(b))
        out = out + term.shift(int(k) - 3 * e) * n
    return out


def invariant(d: LinkDiagram, engine: str = "kernel", workers: int = 1,
              cap: int | None = DEFAULT_CAP) -> LaurentPoly:
    """Sum of the weights of all ``2^e`` states.

    ``engine="kernel"`` uses the array kernel (compiled when numba is
    active) and may fan out over ``workers`` processes; ``engine="python"``
    builds each state web as an object and evaluates it with the memoized
    reducer.
    """
    _check_cap(d, cap)
    if d.e == 0:
        return qint_power(3, d.free_loops)
    if engine == "python":
        total = ZERO
        for mask in range(1 << d.e):
            total = total + state_weight(d, State(mask, d.e)).weight
        return total
    if engine != "kernel":
        raise ValueError(f"unknown engine {engine!r}")
    partner, pin, signs = _kernel_inputs(d)
    shape = _hist_shape(d)
    n = 1 << d.e
    workers = max(1, int(workers))
    if workers == 1 or n < 256:
        hist = _run_range((partner, pin, signs, d.free_loops, 0, n, shape))
    else:
        chunks = min(n, workers * 4)
        bounds = [n * i // chunks for i in range(chunks + 1)]
        jobs = [(partner, pin, signs, d.free_loops, bounds[i], bounds[i + 1], shape)
                for i in range(chunks)]
        hist = np.zeros(shape, dtype=np.int64)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_run_range, jobs):
                hist += part
    return _expand(hist, d.e)


def web_value_kernel(w) -> LaurentPoly:
    """Evaluate a single web with the array reducer (cross-check helper)."""
    nv = w.num_vertices
    if nv == 0:
        return qint_power(3, w.loops)
    hist = np.zeros((1, nv + 2, nv + w.loops + 3), dtype=np.int64)
    status = _kernels.reduce_single(np.array(w.opp, dtype=np.int64), nv, w.loops, hist)
    if status != _kernels.OK:
        raise EngineError(f"web kernel failed with status {status}")
    return _expand(hist, 0)


# OW-move experiments


@dataclass
class OWReport:
    trials: int
    same: int
    drop_two: int
    violations: list
    web_up: int
    web_down: int
    web_violations: list

    @property
    def ok(self) -> bool:
        return not self.violations and not self.web_violations

    def to_json(self) -> dict:
        return {"trials": self.trials, "same": self.same, "drop_two": self.drop_two,
                "violations": self.violations, "web_up": self.web_up,
                "web_down": self.web_down, "web_violations": self.web_violations}


def ow_move_experiment(d: LinkDiagram, trials: int, seed: int = 0,
                       from_all_o: bool = False) -> OWReport:
    """Flip random O crossings to W and record how the weight degree moves.

    On a positive diagram the weight degree must stay put or drop by two;
    the web degree alone must move by exactly one.
    """
    if not d.is_positive():
        raise ValueError("OW-move experiment requires a positive diagram")
    if d.e == 0:
        raise ValueError("diagram has no crossings")
    rng = random.Random(seed)
    rep = OWReport(0, 0, 0, [], 0, 0, [])
    for _ in range(trials):
        if from_all_o:
            s = State.all_o(d.e)
        else:
            s = State(rng.getrandbits(d.e), d.e)
        o_cross = [c for c in range(d.e) if not s.is_w(c)]
        if not o_cross:
            s = s.flip(rng.randrange(d.e))
            o_cross = [c for c in range(d.e) if not s.is_w(c)]
        c = rng.choice(o_cross)
        s2 = s.flip(c)
        w1, w2 = state_weight(d, s), state_weight(d, s2)
        d1, d2 = w1.weight.degree(), w2.weight.degree()
        rep.trials += 1
        if d2 == d1:
            rep.same += 1
        elif d2 == d1 - 2:
            rep.drop_two += 1
        else:
            rep.violations.append((str(s), c, d1, d2))
        g = w2.web_value.degree() - w1.web_value.degree()
        if g == 1:
            rep.web_up += 1
        elif g == -1:
            rep.web_down += 1
        else:
            rep.web_violations.append((str(s), c, g))
    return rep


def numba_enabled() -> bool:
    return _kernels.NUMBA_ENABLED


def engine_name() -> str:
    return "numba" if _kernels.NUMBA_ENABLED else "python-fallback"


def default_workers() -> int:
    return int(os.environ.get("SL3WEB_WORKERS", "1"))
