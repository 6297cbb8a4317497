#!/usr/bin/env python3
"""Run toric_lab and validate its JSON output against the shipped schemas."""

import json
import subprocess
import sys
from pathlib import Path

from jsonschema import Draft202012Validator
from referencing import Registry, Resource

CASES = [
    ("certificate", ["certify", "--dims", "4,4", "--f", "exp:2"], 0),
    ("certificate", ["certify", "--dims", "8", "--metric", "euclid-sq", "--f", "exp:1.05"], 1),
    ("certificate", ["certify", "--dims", "4,8,2", "--metric", "chebyshev", "--f", "inverse-power:1"], None),
    ("eigs", ["eigs", "--dims", "6,4", "--metric", "euclid", "--f", "inverse-power:2"], 0),
    ("eigs", ["eigs", "--dims", "10,10", "--f", "exp:3:sq", "--dft", "fast"], 0),
    ("search", ["search", "--dims", "4,4", "--p", "4", "--f", "exp:2", "--top-k", "3"], 0),
    ("search", ["search", "--dims", "6,6", "--p", "9", "--f", "exp:2", "--method", "local",
                "--restarts", "5", "--objective", "max"], 0),
    ("energy", ["energy", "--dims", "4,4", "--f", "exp:2", "--sites", "0,0;1,1;2,2"], 0),
    ("sweep", ["sweep", "--dims-list", "2,2;4,4;6,2", "--f", "exp:2"], None),
]


def main() -> int:
    exe, schema_dir = sys.argv[1], Path(sys.argv[2])
    schemas = {p.name: json.loads(p.read_text()) for p in schema_dir.glob("*.schema.json")}
    registry = Registry().with_resources((name, Resource.from_contents(s)) for name, s in schemas.items())
    failures = 0
    for name, args, expected in CASES:
        proc = subprocess.run([exe, *args, "--format", "json"], capture_output=True, text=True)
        label = " ".join(args)
        if expected is not None and proc.returncode != expected:
            print(f"FAIL {label}: exit {proc.returncode}, expected {expected}\n{proc.stderr}")
            failures += 1
            continue
        validator = Draft202012Validator(schemas[f"{name}.schema.json"], registry=registry)
        errors = list(validator.iter_errors(json.loads(proc.stdout)))
        for e in errors:
            print(f"FAIL {label}: {e.json_path}: {e.message}")
        failures += bool(errors)
        if not errors:
            print(f"ok   {label}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
