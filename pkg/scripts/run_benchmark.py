#!/usr/bin/env python3
"""Synthetic benchmark: train both scopes for every device and print the
accuracy table.

Generates a labeled corpus per device profile plus one public-layout
fixture, runs the full ingest -> train -> evaluate pipeline, and prints one
row per (device, scope). Everything is seeded, so reruns reproduce the same
numbers.

    python3 scripts/run_benchmark.py --total 120 --seed 0 --out /tmp/eeglog-bench
"""

import argparse
import time
from pathlib import Path

from eeglog import ingest, pipeline, synthgen
from eeglog.datamodel import builtin_profiles
from eeglog.store import Store


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--total", type=int, default=120,
                    help="epochs per device corpus")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", type=Path, default=Path("/tmp/eeglog-bench"),
                    help="work directory for fixtures and the store")
    ap.add_argument("--skip-general", action="store_true",
                    help="device-scope models only (skips the public fixture)")
    args = ap.parse_args()

    public_root = args.out / "public"
    if not args.skip_general:
        if not (public_root / "p32").exists():
            t0 = time.time()
            synthgen.generate_public_fixture(public_root, seed=args.seed)
            print(f"public fixture written in {time.time() - t0:.1f}s")

    rows = []
    for profile in builtin_profiles():
        dev = profile.device_id
        fixture = args.out / f"fixture-{dev}"
        store = Store(args.out / f"data-{dev}")
        t0 = time.time()
        corpus = synthgen.generate_corpus(profile, total=args.total,
                                          seed=args.seed)
        synthgen.write_corpus(corpus, fixture)
        for session, _ in corpus.sessions:
            pipeline.ingest_session(store, session,
                                    fixture / session.recording_ref)
        print(f"{dev}: {args.total} epochs ingested in {time.time() - t0:.1f}s")

        t0 = time.time()
        row = pipeline.train_and_store(store, dev, "device", seed=args.seed)
        rows.append((dev, "device", row, time.time() - t0))
        if not args.skip_general:
            t0 = time.time()
            row = pipeline.train_and_store(store, dev, "general",
                                           seed=args.seed,
                                           public_root=public_root)
            rows.append((dev, "general", row, time.time() - t0))

    print()
    print(f"{'device':<12}{'scope':<9}metrics")
    for dev, scope, row, secs in rows:
        cols = "  ".join(f"{k}={v:.4f}" for k, v in row.items())
        print(f"{dev:<12}{scope:<9}{cols}  ({secs:.1f}s)")


if __name__ == "__main__":
    main()
