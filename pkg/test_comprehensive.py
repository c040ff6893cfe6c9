#!/usr/bin/env python3
"""
Acceptance runner for the Quandle Workbench
Runs every acceptance check through the report service and prints a check list
"""

import argparse
import sys
from pathlib import Path

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent))

CRITERIA = {
    1: "Trefoil 2-quandle",
    2: "Trefoil n-quandles",
    3: "Artin and Coxeter quandles",
    4: "Dehn quandle of S5",
    5: "Projective homological quandles",
    6: "Smallest quotients",
    7: "Centralizer shape",
    8: "Centralizer generators",
    9: "Braid group powers",
    10: "Properties",
}


def test_imports():
    """Test if all modules can be imported"""
    print("🔍 Testing module imports...")
    try:
        from src.services.report_service import ReportService  # noqa: F401
        from src.controllers.app_controller import AppController  # noqa: F401
        print("  ✅ Services and controller: OK")
        return True
    except Exception as e:
        print(f"  ❌ Imports: {e}")
        return False


def run_checks(quick: bool, csv_path=None):
    """Run the acceptance suite grouped by criterion"""
    from src.services.report_service import ReportService

    reports = ReportService()
    frame = reports.run_suite(quick=quick)
    for criterion, rows in frame.groupby('criterion', sort=True):
        print(f"\n📐 {criterion}. {CRITERIA.get(criterion, '')}")
        for row in rows.itertuples(index=False):
            mark = '✅' if row.passed else '❌'
            print(f"  {mark} {row.check}: {row.observed} ({row.seconds:.2f}s)")
    if csv_path:
        print(f"\n💾 Results written to {reports.export_csv(frame, csv_path)}")
    return reports.summary(frame)


def main():
    """Run all checks"""
    parser = argparse.ArgumentParser(description='Quandle Workbench acceptance runner')
    parser.add_argument('--quick', action='store_true', help='skip the slowest instances')
    parser.add_argument('--csv', help='export results as CSV')
    args = parser.parse_args()

    print("🧮 Quandle Workbench - Acceptance Suite")
    print("=" * 55)

    if not test_imports():
        return False
    summary = run_checks(args.quick, args.csv)

    print("\n" + "=" * 55)
    print(f"📊 Results: {summary['passed']}/{summary['checks']} checks passed "
          f"in {summary['seconds']:.1f}s")
    if summary['failed'] == 0:
        print("🎉 ALL CHECKS PASSED")
    else:
        print(f"⚠️ {summary['failed']} checks failed - see the list above")
    return summary['failed'] == 0


if __name__ == "__main__":
    success = main()
    sys.exit(0 if success else 1)
