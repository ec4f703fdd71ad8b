#!/usr/bin/env python3
"""Writes the rail-car factory scenario pack into this directory.

Two truck unloading areas feed two receiving areas; bulk goods go on to floor
storage, kit parts wait in racks and an ASRS, four kitting stations build one
kit per line station, and four lines of seven stations assemble one car each.
Workers also fetch tools in batches.
"""

import csv
import json
import pathlib

OUT = pathlib.Path(__file__).resolve().parent
LINES = 4
STATIONS = 7
BOLTS_PER_STAGE = 8
KIT_PARTS = {"a": 2, "b": 3}  # per kit, per stage


def receptor(rid, x, y, z=0, groups=()):
    r = {"id": rid, "x": x, "y": y}
    if z:
        r["z"] = z
    if groups:
        r["groups"] = list(groups)
    return r


def layout():
    receptors = [
        receptor("UA1", 2, 2, groups=["UnloadingArea"]),
        receptor("UA2", 2, 6, groups=["UnloadingArea"]),
        receptor("RA1", 8, 2, groups=["ReceivingArea"]),
        receptor("RA2", 8, 6, groups=["ReceivingArea"]),
    ]
    for i, x in enumerate(range(14, 22, 2), start=1):
        receptors.append(receptor(f"FS{i}", x, 2, groups=["Storage", "FloorStorage"]))
    for i, x in enumerate((14, 16, 18), start=1):
        for z in range(3):
            receptors.append(receptor(f"RK{i}-{z}", x, 6, z, ["Storage", "RackStorage", "PartsStorage"]))
    for i, y in enumerate((2, 6), start=1):
        for z in range(5):
            receptors.append(receptor(f"AS{i}-{z}", 24, y, z, ["Storage", "ASRS", "PartsStorage"]))
    for i, (x, y) in enumerate(((30, 2), (30, 6), (34, 2), (34, 6)), start=1):
        receptors.append(receptor(f"KS{i}", x, y, groups=["KittingStation"]))
    receptors.append(receptor("ToolCrib", 2, 10, groups=["Tools"]))
    for k in range(1, LINES + 1):
        for j in range(1, STATIONS + 1):
            receptors.append(receptor(f"L{k}S{j}", 10 + 6 * j, 14 + 6 * (k - 1), groups=["AssemblyST", f"Line{k}"]))

    agents = [
        {"id": "FA1", "type": "Forklift_TypeA", "x": 4, "y": 4},
        {"id": "FA2", "type": "Forklift_TypeA", "x": 4, "y": 5},
        {"id": "FB1", "type": "Forklift_TypeB", "x": 12, "y": 4},
        {"id": "FB2", "type": "Forklift_TypeB", "x": 12, "y": 5},
        {"id": "AGV1", "type": "AGV", "x": 32, "y": 9},
        {"id": "AGV2", "type": "AGV", "x": 33, "y": 9},
    ]
    for k in range(1, LINES + 1):
        agents.append({"id": f"W{k}", "type": "Worker", "x": 12, "y": 15 + 6 * (k - 1), "groups": [f"Crew{k}"]})

    return {
        "parameters": {
            "width": 64,
            "depth": 36,
            "height": 5,
            "voxel_edge_length": 1.0,
            "default_processing_time": 30,
            "random_seed": 7,
            "agent_types": [
                {"id": "Forklift_TypeA", "speed": 2, "load_time": 10, "unload_time": 10,
                 "elevation_penalty": 0, "capacity": 1, "groups": ["Forklift"]},
                {"id": "Forklift_TypeB", "speed": 2, "load_time": 8, "unload_time": 8,
                 "elevation_penalty": 4, "capacity": 1, "groups": ["Forklift"]},
                {"id": "AGV", "speed": 1.5, "load_time": 3, "unload_time": 3,
                 "elevation_penalty": 0, "capacity": 2},
                {"id": "Worker", "speed": 1, "load_time": 2, "unload_time": 2,
                 "elevation_penalty": 1, "capacity": 3},
            ],
        },
        "receptors": receptors,
        "agents": agents,
        "material_flows": [
            {"source": "UnloadingArea", "destination": "ReceivingArea", "agent_types": ["Forklift_TypeA"]},
            {"source": "ReceivingArea", "destination": "FloorStorage", "agent_types": ["Forklift_TypeB"]},
            {"source": "PartsStorage", "destination": "KittingStation", "agent_types": ["Forklift_TypeB"]},
            {"source": "KittingStation", "destination": "AssemblyST", "agent_types": ["AGV"]},
        ],
    }


def stage(k, j):
    """BOM node for line k, station j; nests the previous stage and the kit."""
    kit = {
        "parts": {f"Part{j}{name}": n for name, n in KIT_PARTS.items()},
        "where": "KittingStation",
        "count": 1,
        "processing_time": 20,
    }
    parts = {}
    if j == 1:
        parts["Frame"] = 1
    else:
        parts[f"Car{k}-S{j - 1}"] = stage(k, j - 1)
    parts[f"Kit{k}-{j}"] = kit
    parts["Bolt"] = BOLTS_PER_STAGE
    return {
        "parts": parts,
        "where": f"L{k}S{j}",
        "count": 1,
        "agent_type": "Worker",
        "processing_time": 60,
        "Line": f"Line{k}",
    }


def assembly_orders():
    return {f"RailCar{k}": stage(k, STATIONS) for k in range(1, LINES + 1)}


def item_locations():
    rows = [("UA1", "Frame", LINES), ("UA1", "Bolt", 120), ("UA2", "Bolt", LINES * STATIONS * BOLTS_PER_STAGE - 120)]
    for i in range(1, 7):
        rows.append((f"UA{1 + i % 2}", f"Panel{i}", 5 + i))
    # Kit parts are split across racks and the ASRS so deficits draw from two sources.
    parts_storage = [f"RK{i}-{z}" for i in (1, 2, 3) for z in range(3)] + [f"AS{i}-{z}" for i in (1, 2) for z in range(5)]
    slot = 0
    for j in range(1, STATIONS + 1):
        for name, n in KIT_PARTS.items():
            total = n * LINES
            first = total // 2 + 1
            rows.append((parts_storage[slot % len(parts_storage)], f"Part{j}{name}", first))
            rows.append((parts_storage[(slot + 7) % len(parts_storage)], f"Part{j}{name}", total - first))
            slot += 1
    for k in range(1, LINES + 1):
        for j in range(1, STATIONS + 1):
            rows.append(("ToolCrib", f"Tool{k}-{j}", 1))
    return rows


def tool_orders():
    rows = []
    for k in range(1, LINES + 1):
        for j in range(1, STATIONS + 1):
            rows.append((f"Tool{k}-{j}", 1, f"L{k}S{j}", "ToolCrib", f"Crew{k}", f"TOOLS-L{k}", "high" if j == 1 else ""))
    return rows


def main():
    (OUT / "layout.json").write_text(json.dumps(layout(), indent=2) + "\n")
    (OUT / "assembly_orders.json").write_text(json.dumps(assembly_orders(), indent=2) + "\n")
    with open(OUT / "item_locations.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["ReceptorID", "ItemID", "Count"])
        w.writerows(item_locations())
    with open(OUT / "transportation_orders.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["ItemIDs", "pcs", "DestLocID", "SourceLocID", "AgentType", "BatchID", "Priority"])
        w.writerows(tool_orders())


if __name__ == "__main__":
    main()
