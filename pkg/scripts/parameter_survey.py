#!/usr/bin/env python3
"""Print the parameter tables for the flagship code instances.

Covers the Reed-Muller ladder, the Hermitian family for small q, and the
additive (Artin-Schreier-type) family, each with its hierarchy levels and
availability counts.  Everything is recomputed from scratch; dimensions are
rank-verified during construction.
"""

import argparse

from hlrc import fileio
from hlrc.cli import _params_doc


SPECS = [
    '{"family": "rm", "q": 7, "v": 5, "m": 3}',
    '{"family": "rm", "q": 5, "v": 3, "m": 3}',
    '{"family": "rm", "q": 3, "v": 1, "m": 3}',
    '{"family": "hermitian", "q": 2}',
    '{"family": "hermitian", "q": 3}',
    '{"family": "hermitian", "q": 4}',
    '{"family": "artin-schreier", "p": 3, "h": 1, "t": 1, "l": 1}',
    '{"family": "artin-schreier", "p": 3, "h": 2, "t": 2, "l": 1}',
]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--json", action="store_true", help="emit one JSON document per code")
    args = ap.parse_args()

    for text in SPECS:
        sf = fileio.parse_spec(text)
        doc = _params_doc(sf)
        if args.json:
            print(fileio.report_text(doc), end="")
            continue
        name = f"{sf.family} {sf.params}"
        levels = " | ".join(
            f"L{lv['level']}: n={lv['n']} s={lv['s']} delta={lv['delta']} t={lv['availability']}"
            for lv in doc["hierarchy"]
        )
        print(f"{name}")
        print(
            f"  [n,k,d] = [{doc['n']['value']}, {doc['k']['value']}, {doc['d']['value']}]"
            f"  (k {doc['k']['provenance']}, d {doc['d']['provenance']})"
        )
        print(f"  {levels}")
        for note in doc["notes"]:
            print(f"  note: {note}")
        print()


if __name__ == "__main__":
    main()
