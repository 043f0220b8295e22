#!/usr/bin/env python3
"""Writes the Balanced Assignment corpus models.

Employee attributes are synthetic (seeded), since the original data set is
not bundled. The large instance also gets a greedy baseline assignment whose
score is recorded as the bound any solver incumbent must meet.
"""

import argparse
import json
import random
from pathlib import Path

ATTRIBUTES = {
    "Department": ["Sales", "Finance", "Legal", "Research", "Support", "Operations"],
    "Location": ["Brussels", "Ghent", "Leuven", "Antwerp"],
    "Gender": ["Female", "Male"],
    "Title": ["Junior", "Senior", "Manager"],
}


def employees(count, seed, pools):
    rng = random.Random(seed)
    rows = []
    for i in range(1, count + 1):
        rows.append((f"E{i:03d}", {a: rng.choice(pools[a]) for a in ATTRIBUTES}))
    return rows


def model_text(title, rows, groups, capacity):
    lines = [
        f"# {title}: {len(rows)} employees, {groups} groups of at most {capacity}.",
        "# Generated by tools/gen_balanced.py.",
        "",
        "type: Types",
        "Name | Type | Values",
        "Person | string |",
        "Department | string |",
        "Location | string |",
        "Gender | string |",
        "Title | string |",
        f"Group Number | int | [1..{groups}]",
        "",
        "function: Functions",
        "Name | Type",
        "Department of Person | Department",
        "Location of Person | Location",
        "Gender of Person | Gender",
        "Title of Person | Title",
        "Group of Person | Group Number",
        "Size of Group Number | int",
        "",
        "constant: Constants",
        "Name | Type",
        "Score | int",
        "",
        "data: Employees",
        "Person || Department of Person | Location of Person | Gender of Person | Title of Person",
    ]
    for name, attrs in rows:
        lines.append(f"{name} || " + " | ".join(attrs[a] for a in ATTRIBUTES))
    lines += [
        "",
        "table: Diversity score",
        "C+ | Person called p1 | Person called p2 | Department of p1 | Location of p1 | Gender of p1"
        " | Title of p1 | Group of p1 || Score",
        "1 | - | - | = Department of p2 | - | - | - | not(Group of p2) || 1",
        "2 | - | - | - | = Location of p2 | - | - | not(Group of p2) || 1",
        "3 | - | - | - | - | = Gender of p2 | - | not(Group of p2) || 1",
        "4 | - | - | - | - | - | = Title of p2 | not(Group of p2) || 1",
        "",
        "table: Group size",
        "C# | Person called p | Group Number called g | Group of p || Size of g",
        "1 | - | - | = g || -",
        "",
        "table: Groups are not overfull",
        "E* | Group Number called g || Size of g",
        f"1 | - || <= {capacity}",
        "",
        "execute",
        "Minimize Score",
        "",
    ]
    return "\n".join(lines)


def score(rows, group):
    total = 0
    for i, (_, a) in enumerate(rows):
        for j, (_, b) in enumerate(rows):
            if i != j and group[i] != group[j]:
                total += sum(a[k] == b[k] for k in ATTRIBUTES)
    return total


def greedy(rows, groups, capacity):
    """Employees in order; each joins the open group adding the least score, lowest number on ties."""
    group = []
    sizes = [0] * (groups + 1)
    for i, (_, a) in enumerate(rows):
        best = None
        for g in range(1, groups + 1):
            if sizes[g] >= capacity:
                continue
            added = 0
            for j in range(i):
                if group[j] != g:
                    added += 2 * sum(a[k] == rows[j][1][k] for k in ATTRIBUTES)
            if best is None or added < best[0]:
                best = (added, g)
        group.append(best[1])
        sizes[best[1]] += 1
    return group


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "corpus")
    parser.add_argument("--seed", type=int, default=20201)
    parser.add_argument("--timeout", type=float, default=30.0)
    args = parser.parse_args()

    small_pools = {a: values[:2] for a, values in ATTRIBUTES.items()}
    desk = employees(8, args.seed, small_pools)
    (args.out / "balanced_assignment.cdmn").write_text(model_text("Balanced Assignment", desk, 2, 4))

    full = employees(210, args.seed + 1, ATTRIBUTES)
    (args.out / "balanced_assignment_full.cdmn").write_text(
        model_text("Balanced Assignment (full size)", full, 12, 18))
    baseline = greedy(full, 12, 18)
    expected = {
        "kind": "bound",
        "objective": str(score(full, baseline)),
        "timeout": args.timeout,
        "note": "objective of the greedy baseline in balanced_assignment_full.baseline.json",
    }
    (args.out / "balanced_assignment_full.expected.json").write_text(json.dumps(expected, indent=2, sort_keys=True) + "\n")
    assignment = {f"Group({name})": g for (name, _), g in zip(full, baseline)}
    (args.out / "balanced_assignment_full.baseline.json").write_text(
        json.dumps({"objective": score(full, baseline), "assignment": assignment}, indent=2, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
