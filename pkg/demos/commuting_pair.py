"""Commutation identity and cyclicity/distinguishedness sweep for one (n, k)."""

import sys

from parorbit.families import commuting_pair_report

n, k = (int(a) for a in sys.argv[1:3]) if len(sys.argv) > 2 else (12, 6)
rep = commuting_pair_report(n, k, q=101, ts=range(1, 21))
print("identity:", rep["identity"])
print(f"{rep['good']}/{rep['sampled']} good; exceptional t: {rep['exceptional']}")
