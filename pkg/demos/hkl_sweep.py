"""Metabolicity of twisted Blanchfield forms over all prime-order characters of the HKL knot."""

import sys
import time

from linkform.knots import hkl_sweep

jobs = int(sys.argv[1]) if len(sys.argv) > 1 else 1

for ell in (3, 5, 13):
    start = time.perf_counter()
    report = hkl_sweep(ell, jobs=jobs)
    elapsed = time.perf_counter() - start
    print(f"ell={ell}: {report['nontrivial_classes']} nontrivial character classes, "
          f"{report['nontrivial_metabolic']} metabolic; trivial class metabolic: {report['trivial_metabolic']} "
          f"({elapsed:.2f}s)")
    for entry in report["classes"][:3]:
        counts = {f"{c['root']['num']}/{c['root']['den']}": c["count"] for c in entry["witt_class"]}
        print(f"  chi={entry['characters']} witt class {counts or 'zero'}")

print()
print(report["knot"])
print(report["note"])
