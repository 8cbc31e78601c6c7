"""Array kernels for the state sum.

Every state of a diagram is resolved into a web held in flat integer
arrays and reduced to the empty web on an explicit stack.  Each leaf of
the reduction tree contributes ``sign * q^k * [2]^a * [3]^b``; the kernel
only counts leaves in ``hist[k + 3e, a, b]`` and the caller expands the
counts with exact integers.

The functions are compiled with numba when it is importable and the
environment variable ``SL3WEB_NO_NUMBA`` is unset (or ``0``).  Otherwise
the very same source runs as plain Python.
"""

from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("SL3WEB_NO_NUMBA", "0").lower() not in ("", "0", "false", "no")

try:
    if _DISABLED:
        raise ImportError
    from numba import njit as _njit

    NUMBA_ENABLED = True

    def jit(fn):
        return _njit(cache=True, nogil=True)(fn)

except ImportError:  # pragma: no cover - depends on the environment
    NUMBA_ENABLED = False

    def jit(fn):
        fn.py_func = fn
        return fn


OK = 0
ERR_IRREDUCIBLE = 1
ERR_BOUNDS = 2


@jit
def _sig(d):
    return 3 * (d // 3) + (d % 3 + 1) % 3


@jit
def _splice(opp, ts, match, n):
    """Join the ends reached through darts ``ts[:n]`` as ``match`` says.

    Returns the number of loops closed up entirely inside ``ts``.
    """
    done = np.zeros(4, np.bool_)
    for i in range(n):
        if done[i]:
            continue
        a = opp[ts[i]]
        inside = False
        for k in range(n):
            if ts[k] == a:
                inside = True
        if inside:
            continue
        done[i] = True
        j = match[i]
        done[j] = True
        b = opp[ts[j]]
        while True:
            kk = -1
            for k in range(n):
                if ts[k] == b:
                    kk = k
            if kk < 0:
                break
            done[kk] = True
            j = match[kk]
            done[j] = True
            b = opp[ts[j]]
        opp[a] = b
        opp[b] = a
    loops = 0
    for i in range(n):
        if done[i]:
            continue
        loops += 1
        k = i
        while not done[k]:
            done[k] = True
            j = match[k]
            done[j] = True
            b = opp[ts[j]]
            for kk in range(n):
                if ts[kk] == b:
                    k = kk
    return loops


@jit
def _reduce_web(opp0, alive0, nv, loops0, hist, ph, sgn, st_opp, st_alive, st_a, st_b):
    """Reduce one web completely, adding ``sgn`` to each leaf's histogram cell."""
    nd = 3 * nv
    ts = np.zeros(4, np.int64)
    mA = np.array([1, 0, 3, 2], np.int64)
    mB = np.array([3, 2, 1, 0], np.int64)
    m2 = np.array([1, 0, 0, 0], np.int64)
    walk = np.zeros(4, np.int64)
    for d in range(nd):
        st_opp[0, d] = opp0[d]
    for v in range(nv):
        st_alive[0, v] = alive0[v]
    st_a[0] = 0
    st_b[0] = loops0
    top = 1
    maxframes = st_opp.shape[0]
    amax = hist.shape[1]
    bmax = hist.shape[2]
    while top > 0:
        cur = top - 1
        opp = st_opp[cur]
        alive = st_alive[cur]
        while True:
            any_alive = False
            bigon = -1
            for d in range(nd):
                if not alive[d // 3]:
                    continue
                any_alive = True
                e = _sig(opp[d])
                if _sig(opp[e]) == d:
                    bigon = d
                    break
            if not any_alive:
                a = st_a[cur]
                b = st_b[cur]
                if a >= amax or b >= bmax:
                    return ERR_BOUNDS
                hist[ph, a, b] += sgn
                top -= 1
                break
            if bigon >= 0:
                d = bigon
                e = _sig(opp[d])
                u = d // 3
                w = e // 3
                oe = opp[e]
                od = opp[d]
                ts[0] = 3 * u + (3 - d % 3 - oe % 3)
                ts[1] = 3 * w + (3 - e % 3 - od % 3)
                st_b[cur] += _splice(opp, ts, m2, 2)
                alive[u] = False
                alive[w] = False
                st_a[cur] += 1
                continue
            found = False
            for d in range(nd):
                if not alive[d // 3]:
                    continue
                walk[0] = d
                x = d
                ok = True
                for i in range(1, 4):
                    x = _sig(opp[x])
                    walk[i] = x
                if _sig(opp[x]) != d:
                    continue
                for i in range(4):
                    for j in range(i + 1, 4):
                        if walk[i] // 3 == walk[j] // 3:
                            ok = False
                if ok:
                    found = True
                    break
            if not found:
                return ERR_IRREDUCIBLE
            if cur + 1 >= maxframes:
                return ERR_BOUNDS
            for i in range(4):
                prev = opp[walk[(i + 3) % 4]]
                ts[i] = 3 * (walk[i] // 3) + (3 - walk[i] % 3 - prev % 3)
            nxt = cur + 1
            for dd in range(nd):
                st_opp[nxt, dd] = opp[dd]
            for v in range(nv):
                st_alive[nxt, v] = alive[v]
            st_a[nxt] = st_a[cur]
            st_b[nxt] = st_b[cur]
            st_b[cur] += _splice(opp, ts, mA, 4)
            st_b[nxt] += _splice(st_opp[nxt], ts, mB, 4)
            for i in range(4):
                alive[walk[i] // 3] = False
                st_alive[nxt, walk[i] // 3] = False
            top = cur + 2
            break
    return OK


@jit
def _build_web(mask, e, partner, pin, opp, alive, visited):
    """Resolve the state ``mask`` into ``opp``/``alive``; return the loop count.

    W-crossing ``c`` owns sink ``2c`` and source ``2c+1``.  Sink darts are
    (middle, slot p, slot p+1) and source darts (middle, slot p+2, slot p+3),
    both counterclockwise.
    """
    for i in range(4 * e):
        visited[i] = False
    for c in range(e):
        w = (mask >> c) & 1
        alive[2 * c] = w == 1
        alive[2 * c + 1] = w == 1
        if w == 1:
            opp[6 * c] = 6 * c + 3
            opp[6 * c + 3] = 6 * c
    for port in range(4 * e):
        c = port // 4
        if ((mask >> c) & 1) == 0 or visited[port]:
            continue
        visited[port] = True
        q = partner[port]
        while ((mask >> (q // 4)) & 1) == 0:
            visited[q] = True
            cq = q // 4
            rel = (q % 4 - pin[cq]) % 4
            q2 = 4 * cq + (pin[cq] + 3 - rel) % 4
            visited[q2] = True
            q = partner[q2]
        visited[q] = True
        rel = (port % 4 - pin[c]) % 4
        da = 6 * c + 1 + rel if rel < 2 else 6 * c + 2 + rel
        cq = q // 4
        rel = (q % 4 - pin[cq]) % 4
        db = 6 * cq + 1 + rel if rel < 2 else 6 * cq + 2 + rel
        opp[da] = db
        opp[db] = da
    loops = 0
    for port in range(4 * e):
        if visited[port]:
            continue
        loops += 1
        q = port
        while not visited[q]:
            visited[q] = True
            cq = q // 4
            rel = (q % 4 - pin[cq]) % 4
            q2 = 4 * cq + (pin[cq] + 3 - rel) % 4
            visited[q2] = True
            q = partner[q2]
    return loops


@jit
def state_sum_range(partner, pin, signs, free_loops, start, stop, hist):
    """Accumulate states ``start <= mask < stop`` into ``hist``; return a status."""
    e = signs.shape[0]
    nv = 2 * e
    opp = np.zeros(3 * nv, np.int64)
    alive = np.zeros(nv, np.bool_)
    visited = np.zeros(4 * e, np.bool_)
    frames = nv // 2 + 3
    st_opp = np.zeros((frames, 3 * nv), np.int64)
    st_alive = np.zeros((frames, nv), np.bool_)
    st_a = np.zeros(frames, np.int64)
    st_b = np.zeros(frames, np.int64)
    for mask in range(start, stop):
        ap = 0
        bp = 0
        am = 0
        bm = 0
        for c in range(e):
            w = (mask >> c) & 1
            if signs[c] > 0:
                if w == 1:
                    bp += 1
                else:
                    ap += 1
            else:
                if w == 1:
                    bm += 1
                else:
                    am += 1
        k = -2 * (ap - am) - 3 * (bp - bm)
        sgn = 1 if (bp + bm) % 2 == 0 else -1
        loops = _build_web(mask, e, partner, pin, opp, alive, visited) + free_loops
        status = _reduce_web(opp, alive, nv, loops, hist, k + 3 * e, sgn,
                             st_opp, st_alive, st_a, st_b)
        if status != OK:
            return status
    return OK


@jit
def reduce_single(opp, nv, loops, hist):
    """Leaf histogram ``hist[0, a, b]`` of one web with all vertices alive."""
    alive = np.ones(nv, np.bool_)
    frames = nv // 2 + 3
    st_opp = np.zeros((frames, 3 * nv), np.int64)
    st_alive = np.zeros((frames, nv), np.bool_)
    st_a = np.zeros(frames, np.int64)
    st_b = np.zeros(frames, np.int64)
    return _reduce_web(opp, alive, nv, loops, hist, 0, 1, st_opp, st_alive, st_a, st_b)

