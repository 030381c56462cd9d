"""Regenerate data/synthetic_spectroscopy.csv (fixed seed, 0.2 MHz noise)."""
from pathlib import Path

from wtqsim.fit import synthetic_dataset
from wtqsim.io import write_dataset
from wtqsim.params import DESIGN_CIRCUIT

SEED = 2024
OUT = Path(__file__).resolve().parents[1] / "data" / "synthetic_spectroscopy.csv"

if __name__ == "__main__":
    data = synthetic_dataset(DESIGN_CIRCUIT, M_total=1.0, flux_offset=0.0, noise_mhz=0.2, seed=SEED)
    write_dataset(OUT, data, seed=SEED)
    print(f"wrote {OUT}")
