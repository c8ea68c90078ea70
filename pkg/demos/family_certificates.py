"""Certify every infinite family on a small sample and print one line per family."""

from parorbit.exact import GF
from parorbit.families import FAMILY_NAMES, FamilySpec, certify_family

for name in FAMILY_NAMES:
    if name == "commuting_pair":
        spec, field, sample = FamilySpec(name, 6, 12), GF(101), [1, 2, 3]
    elif name == "ext_kk":
        spec, field, sample = FamilySpec(name, 6, 12), GF(5), [1, 2, 3]
    else:
        spec, field, sample = FamilySpec(name), GF(5), [1, 2, 3]
    cert = certify_family(spec, sample, field)
    checks = ", ".join(f"{k}={'ok' if v['pass'] else 'FAIL'}" for k, v in cert.checks.items())
    print(f"{name:<14} bv={spec.bv} {checks}")
