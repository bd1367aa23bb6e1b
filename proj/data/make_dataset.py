#!/usr/bin/env python3
"""Regenerates the synthetic multi-label dataset in this directory.

194 instances, 19 mixed attributes, 7 labels. Labels are planted functions of
the attributes with label noise, and two label pairs co-occur strongly so that
multi-label heads pay off. Fully deterministic.
"""

import random
from pathlib import Path

HERE = Path(__file__).resolve().parent
N_TRAIN = 194
N_INSTANCES = 194

NOMINAL = {
    "c0": ["red", "green", "blue", "gold", "white", "black", "orange", "brown"],
    "c1": ["none", "bars", "stripes", "circle", "cross"],
    "c2": ["old", "new"],
    "c3": ["low", "mid", "high"],
    "c4": ["yes", "no"],
    "c5": ["a", "b", "c", "d"],
    "c6": ["n", "e", "s", "w"],
    "c7": ["t0", "t1", "t2"],
    "c8": ["p", "q"],
}
NUMERIC = [f"a{i}" for i in range(10)]


def make_rows(rng):
    rows = []
    for _ in range(N_INSTANCES):
        row = {}
        for name in NUMERIC:
            row[name] = rng.randint(0, 10)
        for name, values in NOMINAL.items():
            row[name] = rng.choice(values)
        labels = {}
        labels["l0"] = int(row["a0"] > 5)
        labels["l1"] = int(row["c0"] in ("red", "green"))
        labels["l2"] = labels["l0"]
        labels["l3"] = int(row["a1"] <= 3 or row["c1"] == "stripes")
        labels["l4"] = int(row["a2"] > 8)
        labels["l5"] = labels["l1"]
        labels["l6"] = int(row["a3"] > 4 and row["c2"] == "old")
        flip = {
            "l0": 0.05,
            "l1": 0.05,
            "l2": 0.10,
            "l3": 0.08,
            "l4": 0.03,
            "l5": 0.12,
            "l6": 0.10,
        }
        for name, p in flip.items():
            if rng.random() < p:
                labels[name] = 1 - labels[name]
        row.update(labels)
        rows.append(row)
    return rows


def write_arff(rows, path):
    lines = ["@relation synthetic-banners", ""]
    for name in NUMERIC:
        lines.append(f"@attribute {name} numeric")
    for name, values in NOMINAL.items():
        lines.append(f"@attribute {name} {{{','.join(values)}}}")
    for i in range(7):
        lines.append(f"@attribute l{i} {{0,1}}")
    lines.append("")
    lines.append("@data")
    order = NUMERIC + list(NOMINAL) + [f"l{i}" for i in range(7)]
    for row in rows:
        lines.append(",".join(str(row[k]) for k in order))
    path.write_text("\n".join(lines) + "\n")


def write_xml(path):
    lines = ['<?xml version="1.0" encoding="utf-8"?>']
    lines.append('<labels xmlns="http://mulan.sourceforge.net/labels">')
    for i in range(7):
        lines.append(f'  <label name="l{i}"></label>')
    lines.append("</labels>")
    path.write_text("\n".join(lines) + "\n")


def main():
    rng = random.Random(20240817)
    rows = make_rows(rng)
    write_arff(rows, HERE / "banners.arff")
    write_xml(HERE / "banners.xml")


if __name__ == "__main__":
    main()
