from pathlib import Path

ROOT_DIR = Path(__file__).parent.parent.parent
CONFIG_DIR = ROOT_DIR / "data_storage/configs"
REPORTS_DIR = ROOT_DIR / "data_storage/reports"
