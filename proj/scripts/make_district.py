#!/usr/bin/env python3
"""Generates the bundled synthetic district (configs/district.json).

Four rectangular regions, each split into a 3x3 grid of sub-regions.
Region population totals follow the per-PDC batch means; inside a region
the weight pattern is fixed so the output is reproducible.
"""
import json
import sys

# (x0, y0, width, height) in meters; PDC sits at the rectangle centre.
REGIONS = [
    (0.0, 3000.0, 2400.0, 2400.0),
    (2400.0, 3000.0, 5400.0, 5400.0),
    (0.0, 600.0, 2400.0, 2400.0),
    (2400.0, -2400.0, 5400.0, 5400.0),
]
TOTALS = [55.0, 50.0, 75.0, 90.0]
PATTERN = [1.0, 2.0, 1.0, 2.0, 3.0, 2.0, 1.0, 2.0, 1.0]
PORT = [2400.0, 3000.0]


def region(x0, y0, w, h, total):
    cells = []
    scale = total / sum(PATTERN)
    for k, weight in enumerate(PATTERN):
        i, j = k % 3, k // 3
        cells.append({
            "min": [x0 + i * w / 3, y0 + j * h / 3],
            "max": [x0 + (i + 1) * w / 3, y0 + (j + 1) * h / 3],
            "weight": round(weight * scale, 6),
        })
    return {"pdc": [x0 + w / 2, y0 + h / 2], "subregions": cells}


def main():
    district = {
        "regions": [region(*r, t) for r, t in zip(REGIONS, TOTALS)],
        "port": PORT,
        "total_uavs": 60,
        "speed_kph": 18.0,
    }
    out = sys.argv[1] if len(sys.argv) > 1 else "configs/district.json"
    with open(out, "w") as f:
        json.dump(district, f, indent=2)
        f.write("\n")


if __name__ == "__main__":
    main()
