# scripts/reproduce_figure.py
"""
Reproduce the Tsallis information curve for the column (j, m) = (9/2, 1/2)
of the (5/2, 2) block and print the Shannon anchor values.

Usage:
    python scripts/reproduce_figure.py                 # writes tsallis_sweep.csv
    python scripts/reproduce_figure.py out/sweep.csv
"""
import math
import sys
from pathlib import Path

# Add parent directory to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from app.config import configure_logging
from app.entropy import LogBase, max_mutual_information, mutual_information, q_grid, tsallis_sweep
from app.errors import CGEntropyError
from app.formatters import render_sweep_csv
from app.prob import column_joint
from app.schemas import SweepReport, SweepRow

J1, J2, J, M = "5/2", "2", "9/2", "1/2"


def main(out_path: str = "tsallis_sweep.csv") -> int:
    configure_logging()
    print("=" * 60)
    print(f"TSALLIS SWEEP  (j1, j2) = ({J1}, {J2}), column (j, m) = ({J}, {M})")
    print("=" * 60)

    try:
        joint = column_joint(J1, J2, J, M)
        rows = tsallis_sweep(joint, q_grid(0.05, 3.0, 0.05))
        report = SweepReport(
            j1=joint.j1, j2=joint.j2, j=joint.j, m=joint.m,
            rows=[SweepRow(q=q, tsallis_information=value) for q, value in rows],
        )
        Path(out_path).parent.mkdir(parents=True, exist_ok=True)
        with open(out_path, "w", encoding="utf-8", newline="") as handle:
            handle.write(render_sweep_csv(report))

        nats = mutual_information(joint, LogBase.natural)
        bits = mutual_information(joint, LogBase.base2)
        bound = max_mutual_information(J1, J2, LogBase.base2)
    except CGEntropyError as e:
        print(f"❌ Error: {e}")
        return 1

    print(f"I (nats)      = {nats:.6f}")
    print(f"I (bits)      = {bits:.6f}   (= nats / ln 2 = {nats / math.log(2):.6f})")
    print(f"I_max (bits)  = {bound:.6f}   (log2(5))")
    print(f"I / I_max     = {bits / bound:.4f}")
    print("-" * 60)
    print(f"✅ {len(report.rows)} sweep rows written to {out_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main(*sys.argv[1:2]))
