#!/usr/bin/env python3
"""Generate a labeled planted-partition dataset in TU Dortmund format.

Gives the CLI something to chew on when the benchmark datasets are not
available.  Two classes differ by average degree.

Usage: python scripts/make_planted_tud.py [OUT_DIR] [N_PER_CLASS]
"""

import sys
from pathlib import Path

import numpy as np

from graphset.graphs import GraphCollection, generate_planted_partition
from graphset.io import write_tud_dataset


def main() -> None:
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("data/PLANTED")
    per_class = int(sys.argv[2]) if len(sys.argv) > 2 else 30
    graphs, labels = [], []
    for cls, degree in enumerate((4, 8)):
        for i in range(per_class):
            graphs.append(generate_planted_partition(
                30, [15, 15], 0.2, seed=(101, cls, i), degree=degree))
            labels.append(cls)
    coll = GraphCollection(graphs, labels=np.array(labels), name="PLANTED")
    out.mkdir(parents=True, exist_ok=True)
    write_tud_dataset(out, coll, "PLANTED")
    print(f"wrote {len(coll)} graphs to {out}")


if __name__ == "__main__":
    main()
