#!/usr/bin/env python3
"""Download TU Dortmund benchmark datasets into data/.

Run this on a machine with network access; the sandboxed test
environment cannot reach the dataset host, so the benchmark acceptance
tests skip until these files exist.

Usage: python scripts/fetch_tud.py [NAME ...]
Defaults to the three datasets the acceptance suite wants.
"""

import io
import sys
import urllib.request
import zipfile
from pathlib import Path

BASE = "https://ls11-www.cs.tu-dortmund.de/people/morris/graphkerneldatasets"
DEFAULT = ("MUTAG", "BZR", "IMDB-BINARY")
DATA = Path(__file__).resolve().parent.parent / "data"


def fetch(name: str) -> None:
    target = DATA / name
    if (target / f"{name}_A.txt").exists():
        print(f"{name}: already present")
        return
    url = f"{BASE}/{name}.zip"
    print(f"{name}: downloading {url}")
    with urllib.request.urlopen(url, timeout=60) as resp:
        blob = resp.read()
    with zipfile.ZipFile(io.BytesIO(blob)) as zf:
        zf.extractall(DATA)
    if not (target / f"{name}_A.txt").exists():
        raise SystemExit(f"{name}: archive did not contain {name}_A.txt")
    print(f"{name}: extracted to {target}")


def main() -> None:
    names = sys.argv[1:] or list(DEFAULT)
    DATA.mkdir(exist_ok=True)
    for name in names:
        fetch(name)


if __name__ == "__main__":
    main()
