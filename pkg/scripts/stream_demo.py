#!/usr/bin/env python3
"""Streaming-detection demo on a synthetic signal, no server required.

Trains a quick device-scope model pair (if the work directory has none),
then pushes a seeded synthetic stream through the sliding-window detector
and prints every emitted message, including the gap/reset behaviour.

    python3 scripts/stream_demo.py --quadrant PV_PA --seconds 10
"""

import argparse
from pathlib import Path

from eeglog import pipeline, synthgen
from eeglog.datamodel import EmotionQuadrant, get_profile
from eeglog.store import Store


def ensure_models(store: Store, device: str, seed: int) -> None:
    if store.has_model("valence", "device", device):
        return
    profile = get_profile(device)
    fixture = store.root / "bootstrap"
    corpus = synthgen.generate_corpus(profile, total=60, seed=seed)
    synthgen.write_corpus(corpus, fixture)
    for session, _ in corpus.sessions:
        pipeline.ingest_session(store, session, fixture / session.recording_ref)
    row = pipeline.train_and_store(store, device, "device", seed=seed)
    print(f"trained {device} device models: "
          + "  ".join(f"{k}={v:.3f}" for k, v in row.items()))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--device", default="muse2")
    ap.add_argument("--quadrant", default="PV_PA",
                    choices=[q.value for q in EmotionQuadrant])
    ap.add_argument("--seconds", type=float, default=10.0)
    ap.add_argument("--gap-at", type=float, default=None,
                    help="inject a 2 s dropout at this stream time")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--data", type=Path, default=Path("/tmp/eeglog-stream"))
    args = ap.parse_args()

    store = Store(args.data)
    ensure_models(store, args.device, args.seed)
    profile = get_profile(args.device)
    fs = profile.sampling_rate_hz
    epoch = synthgen.generate_epoch(profile, EmotionQuadrant(args.quadrant),
                                    duration_s=max(args.seconds, 10.0),
                                    seed=args.seed)
    samples = epoch.samples[: int(args.seconds * fs)]

    detector = pipeline.StreamDetector(store, args.device)
    step = fs // 4  # 250 ms frames
    offset = 0.0
    for i in range(0, len(samples), step):
        ts = i / fs + offset
        if args.gap_at is not None and offset == 0.0 and i / fs >= args.gap_at:
            offset = 2.0  # everything after this point arrives 2 s late
            ts += offset
        for message in detector.feed(ts, samples[i:i + step]):
            if message["type"] == "detection":
                print(f"[{message['window_end_ts']:6.2f}s] "
                      f"{message['quadrant']}  "
                      f"alpha={message['band_powers']['alpha']:.1f} "
                      f"beta={message['band_powers']['beta']:.1f}")
            else:
                print(f"-- {message['type']}: {message}")
    print(f"ground truth: {args.quadrant}")


if __name__ == "__main__":
    main()
