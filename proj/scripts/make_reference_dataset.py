#!/usr/bin/env python3
"""Regenerates data/promise_nfr.csv, the reference classification export.

The original NFR dataset is distributed as an .arff file under its own
license, so this repository ships a synthetic export with the same shape:
621 requirements, 253 labelled F and 368 labelled NF, one CSV row each
with the header id,text,label. Texts are generated deterministically from
a fixed seed; regenerating always yields byte-identical output.

Usage: python3 scripts/make_reference_dataset.py [out.csv]
"""

import csv
import random
import sys

TOTAL = 621
FUNCTIONAL = 253
NON_FUNCTIONAL = 368

F_SUBJECTS = [
    "The system", "The product", "The application", "The scheduler",
    "The administrator console", "The reporting module", "The dispatcher",
]
F_ACTIONS = [
    "shall allow {role} to {verb} {obj}",
    "shall {verb} {obj} when {event}",
    "shall record {obj} for every {unit}",
    "shall notify {role} after {event}",
    "shall display {obj} on the {unit} screen",
    "shall let {role} cancel {obj} before {event}",
]
ROLES = ["an operator", "a registered user", "the supervisor", "a dispatcher",
         "the site manager", "an auditor"]
VERBS = ["create", "update", "archive", "search", "approve", "merge", "export",
         "import", "reassign", "validate"]
OBJECTS = ["work orders", "customer records", "shift reports", "route plans",
           "inventory adjustments", "billing statements", "maintenance tickets",
           "seat reservations", "audit entries", "meter readings"]
EVENTS = ["the nightly batch completes", "a conflict is detected",
          "the approval deadline passes", "a duplicate entry is found",
          "the shift closes", "an escalation is raised"]
UNITS = ["transaction", "session", "shift", "route", "batch", "case"]

NF_TEMPLATES = [
    "{subj} shall respond to {obj} queries within {n} seconds under normal load.",
    "{subj} shall be available {pct}% of the time, measured monthly.",
    "{subj} shall support {n} concurrent users without degraded response.",
    "{subj} shall conform to the corporate style guide for all screens.",
    "{subj} shall store all personal data encrypted at rest.",
    "{subj} shall be operable by new staff after no more than {n} hours of training.",
    "{subj} shall run on the approved server platform without vendor-specific extensions.",
    "{subj} shall complete the nightly batch in under {n} minutes.",
    "{subj} shall present error messages in plain language, avoiding internal codes.",
    "{subj} shall keep an audit trail that satisfies the retention policy.",
    "{subj} shall isolate tenant data so that no customer can read another's records.",
    "{subj} shall remain usable on displays as narrow as {n} pixels.",
]


def f_text(rng: random.Random) -> str:
    action = rng.choice(F_ACTIONS).format(
        role=rng.choice(ROLES), verb=rng.choice(VERBS), obj=rng.choice(OBJECTS),
        event=rng.choice(EVENTS), unit=rng.choice(UNITS))
    return f"{rng.choice(F_SUBJECTS)} {action}."


def nf_text(rng: random.Random) -> str:
    return rng.choice(NF_TEMPLATES).format(
        subj=rng.choice(F_SUBJECTS), obj=rng.choice(OBJECTS),
        n=rng.choice([2, 3, 5, 10, 15, 30, 45, 90, 480, 800]),
        pct=rng.choice(["99", "99.5", "99.9"]))


def main() -> None:
    out = sys.argv[1] if len(sys.argv) > 1 else "data/promise_nfr.csv"
    rng = random.Random(20240621)
    labels = ["F"] * FUNCTIONAL + ["NF"] * NON_FUNCTIONAL
    rng.shuffle(labels)
    seen = set()
    rows = []
    for i, label in enumerate(labels, start=1):
        while True:
            text = f_text(rng) if label == "F" else nf_text(rng)
            if i % 97 == 0:
                text += ' The acceptance checklist calls this the "must hold" case.'
            if text not in seen:
                seen.add(text)
                break
        rows.append((str(i), text, label))
    assert len(rows) == TOTAL
    with open(out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["id", "text", "label"])
        writer.writerows(rows)
    print(f"wrote {out}: {TOTAL} rows, {FUNCTIONAL} F, {NON_FUNCTIONAL} NF")


if __name__ == "__main__":
    main()
