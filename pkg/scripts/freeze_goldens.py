#!/usr/bin/env python3
"""Freeze golden values into the packaged suite configs.

Runs every suite whose config has a ``golden`` section with null entries
and writes the measured batch statistics back into the JSON.  Re-running
on frozen configs reports drift instead of overwriting; pass --force to
re-freeze.  Freezing is a reviewed change: diff the configs before
committing.
"""

import argparse
import json
import sys
from pathlib import Path

CONFIG_DIR = Path(__file__).resolve().parent.parent / "src" / "weaklab" / "configs"


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--force", action="store_true",
                    help="overwrite already-frozen values")
    ap.add_argument("suites", nargs="*", help="subset of suites to freeze")
    args = ap.parse_args()

    sys.path.insert(0, str(CONFIG_DIR.parent.parent))
    from weaklab.suites import run_suite

    rc = 0
    for path in sorted(CONFIG_DIR.glob("*.json")):
        cfg = json.loads(path.read_text())
        golden = cfg.get("golden") or {}
        if not golden or (args.suites and cfg["suite"] not in args.suites):
            continue
        todo = [k for k, v in golden.items() if v is None or args.force]
        if not todo:
            print(f"{cfg['suite']}: already frozen")
            continue
        result = run_suite(cfg)
        for key in sorted(golden):
            if key not in result.measured:
                print(f"{cfg['suite']}: MISSING measurement {key}")
                rc = 1
                continue
            val = result.measured[key]
            if key in todo:
                golden[key] = val
                print(f"{cfg['suite']}: froze {key} = {val!r}")
            else:
                drift = abs(val - golden[key]) / max(abs(golden[key]), 1e-300)
                print(f"{cfg['suite']}: {key} drift {drift:.3e}")
        cfg["golden"] = golden
        path.write_text(json.dumps(cfg, indent=2) + "\n")
    return rc


if __name__ == "__main__":
    sys.exit(main())
