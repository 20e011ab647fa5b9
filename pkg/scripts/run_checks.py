"""Run the three bundled left-adjointness checks and the closure checks.

This is the workbench's demo drive: the objects functor (criterion holds
outright), the pairing functor (criterion fails exactly), and the times-2
functor (three conditions won by play, the pairing condition inconclusive,
reproducing the known looping behavior).
"""

from __future__ import annotations

import pathlib
import sys
import time

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from pswork.cli import main

DATA = pathlib.Path(__file__).resolve().parent.parent / "src" / "pswork" / "data"


def run(title: str, argv: list[str]) -> None:
    print(f"== {title}")
    print(f"$ pswork {' '.join(argv)}")
    t0 = time.time()
    code = main(argv)
    print(f"(exit {code}, {time.time() - t0:.1f}s)\n")


if __name__ == "__main__":
    run("objects functor: criterion holds", [
        "check-la",
        "--kan", str(DATA / "f_ob.kan.json"),
        "--source", str(DATA / "cat.model.json"),
        "--target", str(DATA / "set.model.json"),
    ])
    run("pairing functor: criterion fails exactly", [
        "check-la",
        "--kan", str(DATA / "f_prod.kan.json"),
        "--source", str(DATA / "setset.model.json"),
        "--target", str(DATA / "set.model.json"),
    ])
    run("times-2 functor: three games won, pairing inconclusive", [
        "check-la",
        "--kan", str(DATA / "f_times2.kan.json"),
        "--source", str(DATA / "cat.model.json"),
        "--target", str(DATA / "cat.model.json"),
        "--budget", "25",
    ])
    run("pair model is cartesian closed", [
        "check-cc", "--model", str(DATA / "setset.model.json"),
    ])
    run("replay the bundled three-move winning trace", [
        "replay", "--trace", str(DATA / "times2_glu_domE.trace.json"),
    ])
