"""Print the finiteness verdict and witness family/case for every block vector up to a size."""

import sys

from parorbit.classifier import classify_P_on_Np
from parorbit.parabolic import compositions


def main(n_max: int = 6) -> None:
    for n in range(1, n_max + 1):
        for bv in compositions(n):
            v = classify_P_on_Np(bv)
            tag = v.witness.get("family") or v.witness.get("case")
            print(f"{str(bv):<18} {v.verdict:<9} {tag}")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 6)
