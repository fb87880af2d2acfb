#!/usr/bin/env python3
"""Extract the default TSV pair model: element table, .s3p file, coupling CSV."""

import pathlib

from tsvkit.cli import main

OUT = pathlib.Path(__file__).resolve().parent.parent / "out"


def run():
    OUT.mkdir(exist_ok=True)
    code = main([
        "extract",
        "--out", str(OUT / "tsv_pair.s3p"),
        "--csv", str(OUT / "tsv_pair_sparams.csv"),
        "--z-csv", str(OUT / "tsv_pair_impedance.csv"),
    ])
    raise SystemExit(code)


if __name__ == "__main__":
    run()
