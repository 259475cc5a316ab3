"""Exhaustive enumeration of small 2-colour Turing machines.

Machines have `states` working states plus an explicit halt. Each of the
2*states transition-table entries is one of 4*states + 2 options: write a
bit, move left/right and go to a working state (4*states options), or write
a bit and halt in place (2 options). A machine is identified by its index
in the mixed-radix encoding of its table, which makes the enumeration order
canonical and shard partitions trivially deterministic.

Every machine runs from a blank (all-zero) tape for at most `step_bound`
steps; the recorded output of a halting machine is the bit content of the
tape region its head visited. With step bounds at the known maximal halting
step counts for each state count, the enumeration is exhaustive: anything
still running is a certified non-halter.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        return wrap if not (args and callable(args[0])) else args[0]


# Maximal steps of any halting n-state 2-colour machine from a blank tape.
KNOWN_STEP_BOUNDS = {1: 1, 2: 6, 3: 21, 4: 107}

MAX_EXHAUSTIVE_STATES = 4

# flat-count layout only viable while 2^(step_bound+2) stays in memory
_FLAT_LIMIT = 24


def machine_count(states: int) -> int:
    """(4*states + 2) ** (2*states) machines in the ensemble."""
    if not 1 <= states <= MAX_EXHAUSTIVE_STATES:
        raise ValueError(f"states must be in 1..{MAX_EXHAUSTIVE_STATES}")
    return (4 * states + 2) ** (2 * states)


def default_step_bound(states: int) -> int:
    return KNOWN_STEP_BOUNDS[states]


@dataclass(frozen=True)
class OutputDistribution:
    """Halting-output frequencies of an enumerated machine ensemble."""

    counts: dict[str, int]
    halting: int
    machines: int
    states: int
    step_bound: int
    exhaustive: bool

    def probability(self, s: str) -> float:
        return self.counts.get(s, 0) / self.halting

    def frequencies(self) -> dict[str, float]:
        return {s: c / self.halting for s, c in self.counts.items()}


def run_machine(index: int, states: int, step_bound: int) -> str | None:
    """Simulate one machine; returns its output string, or None if it does
    not halt within step_bound steps. Reference implementation, used by the
    sampled mode and as an oracle for the compiled kernel."""
    base = 4 * states + 2
    entries = []
    m = index
    for _ in range(2 * states):
        entries.append(m % base)
        m //= base
    tape: dict[int, int] = {}
    head = 0
    pmin = pmax = 0
    state = 0
    for _ in range(step_bound):
        sym = tape.get(head, 0)
        v = entries[state * 2 + sym]
        if v < 2:
            tape[head] = v
            return "".join(str(tape.get(p, 0)) for p in range(pmin, pmax + 1))
        w = v - 2
        tape[head] = w & 1
        head += -1 if (w >> 1) & 1 == 0 else 1
        pmin = min(pmin, head)
        pmax = max(pmax, head)
        state = w >> 2
    return None


@njit(cache=True)
def _enumerate_kernel(states, step_bound, start, stop):  # pragma: no cover
    base = 4 * states + 2
    n_entries = 2 * states
    counts = np.zeros((1 << (step_bound + 2)) - 2, dtype=np.int64)
    halting = 0
    tape = np.zeros(2 * step_bound + 3, dtype=np.uint8)
    halt_write = np.empty(n_entries, dtype=np.int8)
    wr = np.empty(n_entries, dtype=np.uint8)
    mv = np.empty(n_entries, dtype=np.int8)
    nx = np.empty(n_entries, dtype=np.uint8)
    origin = step_bound + 1
    for idx in range(start, stop):
        m = idx
        for e in range(n_entries):
            v = m % base
            m //= base
            if v < 2:
                halt_write[e] = v
            else:
                halt_write[e] = -1
                w = v - 2
                wr[e] = w & 1
                mv[e] = -1 if (w >> 1) & 1 == 0 else 1
                nx[e] = w >> 2
        head = origin
        pmin = origin
        pmax = origin
        state = 0
        halted = False
        for _ in range(step_bound):
            sym = tape[head]
            e = state * 2 + sym
            hw = halt_write[e]
            if hw >= 0:
                tape[head] = hw
                halted = True
                break
            tape[head] = wr[e]
            head += mv[e]
            if head < pmin:
                pmin = head
            elif head > pmax:
                pmax = head
            state = nx[e]
        if halted:
            halting += 1
            length = pmax - pmin + 1
            val = 0
            for p in range(pmin, pmax + 1):
                val = (val << 1) | tape[p]
            counts[(1 << length) - 2 + val] += 1
        for p in range(pmin, pmax + 1):
            tape[p] = 0
    return counts, halting


def _flat_to_counter(flat: np.ndarray, max_length: int) -> Counter:
    out: Counter = Counter()
    for length in range(1, max_length + 1):
        offset = (1 << length) - 2
        block = flat[offset : offset + (1 << length)]
        for val in np.nonzero(block)[0]:
            out[format(int(val), f"0{length}b")] = int(block[val])
    return out


def enumerate_range(
    states: int, step_bound: int, start: int, stop: int
) -> tuple[Counter, int]:
    """Halting-output counts over machine indices [start, stop)."""
    if start < 0 or stop > machine_count(states) or start > stop:
        raise ValueError("invalid machine index range")
    if HAVE_NUMBA and step_bound <= _FLAT_LIMIT:
        flat, halting = _enumerate_kernel(states, step_bound, start, stop)
        return _flat_to_counter(flat, step_bound + 1), halting
    counts: Counter = Counter()
    halting = 0
    for idx in range(start, stop):
        out = run_machine(idx, states, step_bound)
        if out is not None:
            counts[out] += 1
            halting += 1
    return counts, halting


def symmetrize_counts(counts: dict[str, int] | Counter) -> Counter:
    """Add the bit-complement of every output, doubling the total.

    A run from a blank-1 tape is the run of the write/read-complemented
    machine from a blank-0 tape with its output complemented, so counting
    complements is exactly evaluating the ensemble on both blank symbols.
    Without this the all-zero blank tape skews the distribution towards
    0-heavy strings; with it the distribution is closed under complement.
    """
    out: Counter = Counter()
    for s, c in counts.items():
        out[s] += c
        out["".join("1" if ch == "0" else "0" for ch in s)] += c
    return out


def shard_ranges(states: int, shards: int) -> list[tuple[int, int]]:
    total = machine_count(states)
    if shards < 1:
        raise ValueError("shards must be at least 1")
    bounds = np.linspace(0, total, shards + 1, dtype=np.int64)
    return [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:])]


def enumerate_machines(
    states: int, step_bound: int | None = None, shards: int = 1
) -> OutputDistribution:
    """Exhaustive enumeration of every machine with the given state count.

    The result is independent of the shard partition: shards are disjoint
    index ranges whose counts are summed.
    """
    if step_bound is None:
        step_bound = default_step_bound(states)
    if step_bound < default_step_bound(states):
        raise ValueError(
            f"step_bound {step_bound} below the known halting bound "
            f"{default_step_bound(states)} for {states} states; "
            "the enumeration would not be exhaustive"
        )
    counts: Counter = Counter()
    halting = 0
    for start, stop in shard_ranges(states, shards):
        c, h = enumerate_range(states, step_bound, start, stop)
        counts.update(c)
        halting += h
    return OutputDistribution(
        counts=dict(symmetrize_counts(counts)),
        halting=2 * halting,
        machines=machine_count(states),
        states=states,
        step_bound=step_bound,
        exhaustive=True,
    )


def sample_machines(
    states: int, budget: int, step_bound: int | None = None, seed: int = 0
) -> OutputDistribution:
    """Uniform random sample of the ensemble, for state counts where the
    exhaustive run is out of reach (4 states is ~11e9 machines)."""
    if step_bound is None:
        step_bound = default_step_bound(states)
    if budget < 1:
        raise ValueError("budget must be positive")
    rng = random.Random(seed)
    total = machine_count(states)
    counts: Counter = Counter()
    halting = 0
    for _ in range(budget):
        out = run_machine(rng.randrange(total), states, step_bound)
        if out is not None:
            counts[out] += 1
            halting += 1
    return OutputDistribution(
        counts=dict(symmetrize_counts(counts)),
        halting=2 * halting,
        machines=budget,
        states=states,
        step_bound=step_bound,
        exhaustive=False,
    )
