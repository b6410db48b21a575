#!/usr/bin/env python3
"""Writes the shipped frame configs into data/frames/."""

import json
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
OUT = ROOT / "data" / "frames"

POOLS = {"W": "../sections/w_shapes.csv", "W14": "../sections/w14.csv"}


def grid(bays, stories, story_h):
    nodes = []
    x = [0.0]
    for b in bays:
        x.append(x[-1] + b)
    for level in range(stories + 1):
        for xi in x:
            nodes.append([round(xi, 6), round(level * story_h, 6)])
    return nodes, len(x)


def frame(name, bays, stories, story_h, groups, column_group, beam_group, material, constraints, functioning,
          lateral, beam_load, experiment):
    nodes, per_level = grid(bays, stories, story_h)

    def node(level, col):
        return level * per_level + col

    members = []
    member_loads = []
    for s in range(1, stories + 1):
        for c in range(per_level):
            members.append([node(s - 1, c), node(s, c), column_group(s, c, per_level)])
    for s in range(1, stories + 1):
        for b in range(len(bays)):
            members.append([node(s, b), node(s, b + 1), beam_group(s, b, stories)])
            w = beam_load(s, b, stories)
            if w:
                member_loads.append({"member": len(members) - 1, "w": w})
    loads = []
    for s in range(1, stories + 1):
        fx = lateral(s, stories)
        if fx:
            loads.append({"node": node(s, 0), "fx": fx})
    return {
        "name": name,
        "provenance": "reconstructed",
        "material": material,
        "analysis": {"second_order": False},
        "pools": POOLS,
        "groups": groups,
        "nodes": nodes,
        "members": members,
        "supports": [{"node": node(0, c), "fix": ["ux", "uy", "rot"]} for c in range(per_level)],
        "loads": loads,
        "member_loads": member_loads,
        "story_levels": [round(s * story_h, 6) for s in range(1, stories + 1)],
        "constraints": constraints,
        "functioning": functioning,
        "experiment": experiment,
    }


def eight_story():
    story_h = 305.0
    groups = [{"name": f"B{k + 1}", "role": "beam", "pool": "W"} for k in range(4)]
    groups += [{"name": f"C{k + 1}", "role": "column", "pool": "W"} for k in range(4)]
    lateral = [2.94, 3.73, 4.91, 6.08, 7.26, 8.44, 9.62, 10.80]
    return frame(
        "frame-1bay-8story", [610.0], 8, story_h, groups,
        column_group=lambda s, c, n: 4 + (s - 1) // 2,
        beam_group=lambda s, b, n: (s - 1) // 2,
        material={"elastic_modulus": 20000.0, "yield_stress": 24.82, "density": 0.00785},
        constraints={"roof_drift_limit": 5.08},
        functioning=[{"name": "columns", "group_ids": [4, 5, 6, 7],
                      "heights_cm": [k * 2 * story_h for k in range(4)]}],
        lateral=lambda s, n: lateral[s - 1],
        beam_load=lambda s, b, n: 0.0,
        experiment={"population": {"none": 25, "ifx": 25, "fx": 20},
                    "max_fe": {"none": 5000, "ifx": 5000, "fx": 3000}},
    )


def fifteen_story():
    story_h = 300.0
    groups = [{"name": "B", "role": "beam", "pool": "W"}]
    groups += [{"name": f"CE{k + 1}", "role": "column", "pool": "W"} for k in range(5)]
    groups += [{"name": f"CI{k + 1}", "role": "column", "pool": "W"} for k in range(5)]
    heights = [k * 3 * story_h for k in range(5)]

    def column_group(s, c, n):
        band = (s - 1) // 3
        return 1 + band if c in (0, n - 1) else 6 + band

    return frame(
        "frame-3bay-15story", [500.0, 500.0, 500.0], 15, story_h, groups,
        column_group=column_group,
        beam_group=lambda s, b, n: 0,
        material={"elastic_modulus": 20000.0, "yield_stress": 24.82, "density": 0.00785},
        constraints={"lrfd": True, "roof_drift_limit": 23.5},
        functioning=[{"name": "exterior", "group_ids": [1, 2, 3, 4, 5], "heights_cm": heights},
                     {"name": "interior", "group_ids": [6, 7, 8, 9, 10], "heights_cm": heights}],
        lateral=lambda s, n: 25.0,
        beam_load=lambda s, b, n: -0.32,
        experiment={"population": {"none": 40, "ifx": 40, "fx": 25},
                    "max_fe": {"none": 10000, "ifx": 10000, "fx": 4000}},
    )


def twenty_four_story():
    story_h = 366.0
    groups = [{"name": "B-outer", "role": "beam", "pool": "W"},
              {"name": "B-inner", "role": "beam", "pool": "W"},
              {"name": "B-roof-outer", "role": "beam", "pool": "W"},
              {"name": "B-roof-inner", "role": "beam", "pool": "W"}]
    groups += [{"name": f"CE{k + 1}", "role": "column", "pool": "W14"} for k in range(8)]
    groups += [{"name": f"CI{k + 1}", "role": "column", "pool": "W14"} for k in range(8)]
    heights = [k * 3 * story_h for k in range(8)]

    def column_group(s, c, n):
        band = (s - 1) // 3
        return 4 + band if c in (0, n - 1) else 12 + band

    def beam_group(s, b, n):
        roof = s == n
        if b == 1:
            return 3 if roof else 1
        return 2 if roof else 0

    floor_w = [-0.06362, -0.06917, -0.05954]

    return frame(
        "frame-3bay-24story", [610.0, 366.0, 853.0], 24, story_h, groups,
        column_group=column_group,
        beam_group=beam_group,
        material={"elastic_modulus": 20500.0, "yield_stress": 23.03, "density": 0.00785},
        constraints={"lrfd": True, "interstory_index": 1.0 / 300.0},
        functioning=[{"name": "exterior", "group_ids": list(range(4, 12)), "heights_cm": heights},
                     {"name": "interior", "group_ids": list(range(12, 20)), "heights_cm": heights}],
        lateral=lambda s, n: 25.628,
        beam_load=lambda s, b, n: -0.04378 if s == n else floor_w[b],
        experiment={"population": {"none": 60, "ifx": 60, "fx": 25},
                    "max_fe": {"none": 15000, "ifx": 15000, "fx": 5000}},
    )


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for name, cfg in [("frame8.json", eight_story()), ("frame15.json", fifteen_story()),
                      ("frame24.json", twenty_four_story())]:
        (OUT / name).write_text(json.dumps(cfg, indent=1) + "\n")


if __name__ == "__main__":
    main()
