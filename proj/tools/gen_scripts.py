#!/usr/bin/env python3
"""Regenerates the master scripts bundled under scenarios/scripts/.

Each script line is one message applied before the controller runs at
"tick"; "repeat" re-applies it on consecutive ticks. Master displacements are
in the scenario's length unit and are scaled by the motion scaling on the
slave side.
"""

import argparse
import json
import math
from pathlib import Path


def cmd(tick, master, clutch=True, dt=None, dr=None, repeat=None):
    msg = {"tick": tick, "type": "master_cmd", "master_id": master, "clutch": clutch}
    if dt is not None:
        msg["dt"] = [float(v) for v in dt]
    if dr is not None:
        msg["dr"] = [float(v) for v in dr]
    if repeat is not None:
        msg["repeat"] = repeat
    return msg


def stroke(start, master, displacement, ticks):
    """Straight master stroke spread evenly over `ticks` ticks."""
    step = [d / ticks for d in displacement]
    return [cmd(start, master, dt=step, repeat=ticks)]


def dvrk_cross():
    # Left master slides 0.1 m along +y (0.05 m at the tool), pushing the left
    # shaft across the right one. The right master is engaged but still.
    msgs = [cmd(0, 0), cmd(0, 1)]
    msgs += stroke(500, 0, [0.0, 0.1, 0.0], 4000)
    return msgs


def dvrk_plane():
    # Left tool driven straight down through the board and held there.
    msgs = [cmd(0, 0), cmd(0, 1)]
    msgs += stroke(200, 0, [0.0, 0.0, -0.06], 1500)
    msgs += stroke(3000, 0, [0.04, 0.0, 0.0], 1500)
    return msgs


def infant_entry(duration_s=60.0, ts=1e-3):
    # Both masters trace slow loops (mm) with clutch releases in between, so the
    # shafts pivot about the entry points for the whole run.
    msgs = [cmd(0, 0), cmd(0, 1)]
    period = 4000
    ticks = int(round(duration_s / ts))
    k = 0
    tick = 100
    while tick + period < ticks:
        for master in (0, 1):
            sign = 1.0 if master == 0 else -1.0
            angle = 0.7 * k + 0.9 * master
            # Master radius 18 mm, tool radius 6 mm after scaling.
            r = 18.0
            n = 40
            for s in range(n):
                a0 = 2.0 * math.pi * s / n
                a1 = 2.0 * math.pi * (s + 1) / n
                d = [r * (math.cos(a1) - math.cos(a0)), sign * r * (math.sin(a1) - math.sin(a0)),
                     6.0 * (math.sin(a1 + angle) - math.sin(a0 + angle))]
                msgs += stroke(tick + s * (period // n), master, d, period // n)
        # Wrist twist on the left master during the second half of each loop.
        half = math.radians(10.0) / 2.0
        msgs.append(cmd(tick + period // 2, 0, dr=[math.cos(half / 400), 0.0, 0.0, math.sin(half / 400)],
                        repeat=400))
        tick += period
        # Push both tools past their box walls and bring them back.
        if k == 4:
            msgs += stroke(tick, 0, [120.0, 0.0, 0.0], 2000)
            msgs += stroke(tick, 1, [0.0, 0.0, -90.0], 2000)
            msgs += stroke(tick + 3000, 0, [-120.0, 0.0, 0.0], 2000)
            msgs += stroke(tick + 3000, 1, [0.0, 0.0, 90.0], 2000)
            tick += 5500
        # Clutch out, reposition the masters (no slave motion), clutch back in.
        if k % 3 == 2:
            msgs.append(cmd(tick, 0, clutch=False))
            msgs += stroke(tick + 1, 0, [-15.0, 0.0, 0.0], 200)
            msgs.append(cmd(tick + 300, 0, clutch=True))
            tick += 400
        k += 1
    return msgs


SCRIPTS = {
    "dvrk-cross.jsonl": dvrk_cross,
    "dvrk-plane.jsonl": dvrk_plane,
    "infant-entry.jsonl": infant_entry,
}


def write(path, msgs):
    msgs = sorted(msgs, key=lambda m: m["tick"])
    with open(path, "w", encoding="utf-8") as f:
        for m in msgs:
            f.write(json.dumps(m, separators=(",", ":")) + "\n")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "scenarios" / "scripts")
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for name, fn in SCRIPTS.items():
        write(args.out / name, fn())
        print(args.out / name)


if __name__ == "__main__":
    main()
