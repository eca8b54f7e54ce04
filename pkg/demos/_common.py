from pathlib import Path

import matplotlib

matplotlib.use("Agg")

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)
