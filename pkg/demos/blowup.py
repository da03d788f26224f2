"""Unfolding can be expensive, and right-linear components skip it.

For s => x1 s | ... | xn s | y the number of stack classes grows quickly
with n.  The grammar is right-linear, so the exemption compiles it directly
from the characteristic machine with no unfolding and the same language.

Run with:  python demos/blowup.py
"""

import sys
import time
from pathlib import Path

from fsapprox import fsa
from fsapprox.decompose import approximate_component

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))
from randgrammars import blowup  # noqa: E402


def main():
    print(" n  unfolded  seconds  exempt-unfolded  same language")
    for n in range(2, 6):
        g = blowup(n)
        t0 = time.perf_counter()
        forced = approximate_component(g, right_linear_exemption=False)
        secs = time.perf_counter() - t0
        exempt = approximate_component(g)
        same = fsa.equivalent(exempt.dfa, forced.dfa)
        print(f"{n:2d}  {forced.unfolded_states:8d}  {secs:7.3f}  {exempt.unfolded_states:15d}  {same}")


if __name__ == "__main__":
    main()
