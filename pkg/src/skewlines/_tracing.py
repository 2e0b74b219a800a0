"""State-sum loop tracing over all smoothings of a line diagram.

One function, two builds: the plain Python version doubles as a reference
implementation, and the numba build handles the 2^21-state sweeps of the
seven-line classification.  States are bitmasks (bit c set = second
smoothing at crossing c); each state's disjoint curves are traced by
alternating segment hops and crossing turns over the 4C arc-end slots.

Slot layout: crossing c owns slots 4c..4c+3 =
(low line, before), (low line, after), (high line, before), (high line, after),
where before/after refer to the parameter order along each line.
"""

from __future__ import annotations

import numpy as np


def _trace_states(n_cross, seg_partner, seg_inf, pair_a, pair_b, counts):
    """Count states by (number of first-kind smoothings, contractible loops,
    noncontractible loops).

    ``seg_partner`` pairs slots joined by a segment of a projected line;
    ``seg_inf`` marks segments that close through infinity (a loop is
    noncontractible iff it crosses infinity an odd number of times).
    ``pair_a``/``pair_b`` pair slots within each crossing for the two
    smoothings.  ``counts`` has shape (C+1, max_loops+1, 2).
    """
    n_slots = 4 * n_cross
    visited = np.full(n_slots, -1, dtype=np.int64)
    n_states = 1 << n_cross
    for state in range(n_states):
        loops_contractible = 0
        loops_noncontractible = 0
        for start in range(n_slots):
            if visited[start] == state:
                continue
            passages = 0
            u = start
            while True:
                visited[u] = state
                v = seg_partner[u]
                passages += seg_inf[u]
                visited[v] = state
                if (state >> (v >> 2)) & 1:
                    w = pair_b[v]
                else:
                    w = pair_a[v]
                if w == start:
                    break
                u = w
            if passages & 1:
                loops_noncontractible += 1
            else:
                loops_contractible += 1
        remaining = state
        popcount = 0
        while remaining:
            remaining &= remaining - 1
            popcount += 1
        counts[n_cross - popcount, loops_contractible, loops_noncontractible] += 1


trace_states_python = _trace_states

try:
    from numba import njit

    trace_states_compiled = njit(cache=True)(_trace_states)
except ImportError:  # pragma: no cover - numba is a declared dependency
    trace_states_compiled = None

# below this many crossings the jit warm-up costs more than it saves
COMPILED_THRESHOLD = 12
