"""Run the full check suite on one family member and print the report."""
from weierstrass_disks import ConstructionParams, GridSpec, run_all, write_report
from _common import OUT

report = run_all(ConstructionParams([0.0], 0.1), GridSpec(nx=200, ny=41))
for c in sorted(report.checks, key=lambda c: c.name):
    status = "PASS" if c.passed else "FAIL"
    print(f"{status:4s} {c.name:22s} margin {c.margin:+.4g}  ({c.anchor})")
write_report(report, OUT / "report_n1.json")
print("overall:", "PASS" if report.passed else "FAIL")
