#!/usr/bin/env python3
"""Converts the NFR classification dataset from .arff to the CSV schema
this project ingests (header id,text,label; label F or NF).

The upstream dataset labels functional requirements F and non-functional
requirements with one subtype code each (A, L, LF, MN, O, PE, SC, SE, US,
FT, PO, ...). Binary conversion maps F to F and every other class to NF.

Usage: python3 scripts/arff_to_csv.py nfr.arff out.csv
"""

import csv
import re
import sys


def parse_arff(path: str):
    """Yields (text, raw_label) from the @data section."""
    in_data = False
    with open(path, encoding="utf-8", errors="replace") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("%"):
                continue
            if line.lower().startswith("@data"):
                in_data = True
                continue
            if not in_data or line.startswith("@"):
                continue
            # Rows look like: 1,'The system shall ...',F
            row = next(csv.reader([line], quotechar="'"))
            if len(row) < 2:
                continue
            text = row[-2].strip().strip("'")
            label = row[-1].strip().strip("'")
            yield text, label


def main() -> None:
    if len(sys.argv) != 3:
        sys.exit(__doc__)
    src, dst = sys.argv[1], sys.argv[2]
    rows = []
    for i, (text, raw) in enumerate(parse_arff(src), start=1):
        text = re.sub(r"\s+", " ", text).strip()
        if not text:
            continue
        label = "F" if raw.upper() == "F" else "NF"
        rows.append((str(i), text, label))
    with open(dst, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["id", "text", "label"])
        writer.writerows(rows)
    f = sum(1 for r in rows if r[2] == "F")
    print(f"wrote {dst}: {len(rows)} rows, {f} F, {len(rows) - f} NF")


if __name__ == "__main__":
    main()
