"""Print the cubic/mass-formula discrepancy report as JSON.

Usage: python scripts/discrepancy_report.py [--codata]
"""
import sys

from twofermion import io
from twofermion.constants import CouplingConfig
from twofermion.spectrum import mass_discrepancy_report


def main(argv):
    cfg = CouplingConfig.from_mode("codata" if "--codata" in argv else "paper")
    report = mass_discrepancy_report(cfg=cfg)
    for line in report["summary"]:
        print(line, file=sys.stderr)
    sys.stdout.write(io.dumps(report))


if __name__ == "__main__":
    main(sys.argv[1:])
