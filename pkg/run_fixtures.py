"""
Bulk Fixture Analysis Script
Run the full pipeline over every bundled config in data_storage/configs.
"""

import sys
from pathlib import Path

from src.config.paths import CONFIG_DIR, REPORTS_DIR
from src.obstruct.pipeline import run_pipeline


def run_all(config_dir=CONFIG_DIR, out_root=REPORTS_DIR):
    """
    Analyze each config and print a one-line summary per group.

    Returns:
        number of configs that did not finish with exit code 0
    """
    print("=" * 80)
    print("ANALYZING BUNDLED GROUP CONFIGS")
    print("=" * 80)

    configs = sorted(Path(config_dir).glob("*.json"))
    if not configs:
        print(f"⚠️  No configs found in: {config_dir}")
        return 0

    failed = 0
    for idx, path in enumerate(configs, 1):
        print(f"\n[{idx}/{len(configs)}] {path.name}")
        result = run_pipeline(path, Path(out_root) / path.stem)
        if result.exit_code == 0:
            cls = result.report["classification"]
            print(f"  ✓ n={cls['n']} k={cls['k']} l={cls['l']} -> {cls['verdict']}")
        else:
            print(f"  ✗ exit {result.exit_code}: {result.report.get('error', 'see report')}")
            failed += 1

    print("\n" + "=" * 80)
    print("FIXTURE ANALYSIS COMPLETE")
    print(f"  Configs: {len(configs)}")
    print(f"  Failed: {failed}")
    print(f"  Reports: {out_root}")
    print("=" * 80)
    return failed


if __name__ == "__main__":
    sys.exit(1 if run_all() else 0)
