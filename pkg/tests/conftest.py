import itertools

import numpy as np
import pytest

from zipfcode import _pykernels, kernels

BACKENDS = ["python"] + (["cython"] if kernels.BACKEND == "cython" else [])


@pytest.fixture(params=BACKENDS)
def backend(request, monkeypatch):
    """Run a test once per available kernel backend."""
    if request.param == "python":
        monkeypatch.setattr(kernels, "_impl", _pykernels)
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def brute_force_strings(alphabet, max_length):
    """All non-empty strings up to ``max_length`` in length-then-lexicographic order."""
    out = []
    for length in range(1, max_length + 1):
        out.extend("".join(w) for w in itertools.product(alphabet, repeat=length))
    return out


def brute_force_tau_b(x, y):
    """O(n^2) Kendall tau-b straight from the pair definition."""
    n = len(x)
    conc = disc = tx = ty = 0
    for i in range(n):
        for j in range(i + 1, n):
            dx = np.sign(x[i] - x[j])
            dy = np.sign(y[i] - y[j])
            if dx == 0 and dy == 0:
                continue
            if dx == 0:
                tx += 1
            elif dy == 0:
                ty += 1
            elif dx == dy:
                conc += 1
            else:
                disc += 1
    return (conc - disc) / np.sqrt((conc + disc + tx) * (conc + disc + ty))


def ambiguous_up_to(codes, max_length):
    """Exhaustive search for a string of length <= max_length with two parses.

    Counts parse paths of each length through the automaton of codeword
    sequences and compares with the number of distinct strings of that
    length (via subset construction). Independent of Sardinas-Patterson.
    """
    codes = list(codes)
    # NFA states: 0 is the word boundary; (k, j) is 'read j symbols of code k'
    symbols = sorted(set("".join(codes)))

    def step(state, ch):
        out = []
        if state == 0:
            for k, c in enumerate(codes):
                if c[0] == ch:
                    out.append(0 if len(c) == 1 else (k, 1))
        else:
            k, j = state
            if codes[k][j] == ch:
                out.append(0 if j + 1 == len(codes[k]) else (k, j + 1))
        return out

    paths = {0: 1}
    subsets = {frozenset([0]): 1}
    for _ in range(max_length):
        new_paths = {}
        new_subsets = {}
        for state, cnt in paths.items():
            for ch in symbols:
                for nxt in step(state, ch):
                    new_paths[nxt] = new_paths.get(nxt, 0) + cnt
        for subset, cnt in subsets.items():
            for ch in symbols:
                nxt = frozenset(s for st in subset for s in step(st, ch))
                if nxt:
                    new_subsets[nxt] = new_subsets.get(nxt, 0) + cnt
        paths, subsets = new_paths, new_subsets
        accepted_paths = paths.get(0, 0)
        accepted_strings = sum(cnt for subset, cnt in subsets.items() if 0 in subset)
        if accepted_paths > accepted_strings:
            return True
    return False


def pytest_configure(config):
    config.acceptance_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "acceptance_lines", [])
    if lines:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
