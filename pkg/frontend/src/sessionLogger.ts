/** Session-logging state machine: Play/Stop timestamps, post-song scoring
 * sliders, and an offline queue that flushes when the service is reachable.
 *
 * Sliders start at 0 and clamp to [-5, +5] with 0.1 granularity; a trial
 * whose sliders were never touched is recorded as (0, 0) and flagged
 * "unmodified".
 */

import type { ApiClient } from "./api.js";
import type { SessionLog, Song, Trial } from "./types.js";
import { validateSessionLog } from "./types.js";

export const SLIDER_MIN = -5;
export const SLIDER_MAX = 5;
export const SLIDER_STEP = 0.1;

export function clampScore(value: number): number {
  const clamped = Math.min(SLIDER_MAX, Math.max(SLIDER_MIN, value));
  return Math.round(clamped / SLIDER_STEP) * SLIDER_STEP;
}

export type LoggerPhase = "idle" | "baseline" | "playing" | "scoring";

interface PendingTrial {
  song: Song;
  baseline_start_ts: number;
  play_ts: number;
  stop_ts: number;
}

export class SliderPair {
  valence = 0;
  arousal = 0;
  private touched = false;

  setValence(value: number): void {
    this.valence = clampScore(value);
    this.touched = true;
  }

  setArousal(value: number): void {
    this.arousal = clampScore(value);
    this.touched = true;
  }

  get unmodified(): boolean {
    return !this.touched;
  }

  reset(): void {
    this.valence = 0;
    this.arousal = 0;
    this.touched = false;
  }
}

export class SessionLogger {
  phase: LoggerPhase = "idle";
  readonly sliders = new SliderPair();
  private trials: Trial[] = [];
  private pending: PendingTrial | null = null;
  private baselineStart = 0;

  constructor(
    private readonly sessionId: string,
    private readonly userId: string,
    private readonly deviceId: string,
    private readonly now: () => number = () => Date.now() / 1000,
  ) {}

  /** Play is reachable from idle (after baseline) and right after scoring. */
  get canPlay(): boolean {
    return this.phase === "baseline";
  }

  get canStop(): boolean {
    return this.phase === "playing";
  }

  /** Mark the pre-listening baseline start for the next trial. */
  startBaseline(): void {
    if (this.phase === "playing") throw new Error("stop the current song first");
    this.baselineStart = this.now();
    this.phase = "baseline";
  }

  play(song: Song): void {
    if (!this.canPlay) throw new Error("play is disabled outside baseline");
    this.pending = {
      song,
      baseline_start_ts: this.baselineStart,
      play_ts: this.now(),
      stop_ts: NaN,
    };
    this.phase = "playing";
  }

  stop(): void {
    if (!this.canStop) throw new Error("stop is disabled before play");
    this.pending!.stop_ts = this.now();
    this.sliders.reset();
    this.phase = "scoring";
  }

  /** Commit the report of the just-stopped song and return to idle. */
  score(): Trial {
    if (this.phase !== "scoring" || !this.pending) {
      throw new Error("nothing to score");
    }
    const trial: Trial = {
      ...this.pending,
      valence: this.sliders.valence,
      arousal: this.sliders.arousal,
      unmodified: this.sliders.unmodified,
    };
    this.trials.push(trial);
    this.pending = null;
    this.phase = "idle";
    return trial;
  }

  /** Assemble the final document; throws if it would not validate. */
  endSession(recordingRef: string): SessionLog {
    const doc: SessionLog = {
      format_version: 1,
      session_id: this.sessionId,
      user_id: this.userId,
      device_id: this.deviceId,
      recording_ref: recordingRef,
      trials: this.trials,
    };
    const problems = validateSessionLog(doc);
    if (problems.length > 0) throw new Error(problems.join("; "));
    return doc;
  }
}

/** Offline-first uploader: failed posts stay queued until flush succeeds. */
export class SessionQueue {
  private queue: SessionLog[] = [];

  constructor(private readonly api: ApiClient) {}

  get pendingCount(): number {
    return this.queue.length;
  }

  async submit(session: SessionLog): Promise<boolean> {
    this.queue.push(session);
    return this.flush();
  }

  /** Post queued sessions in order; stops at the first failure. */
  async flush(): Promise<boolean> {
    while (this.queue.length > 0) {
      try {
        await this.api.postSession(this.queue[0]);
      } catch {
        return false;
      }
      this.queue.shift();
    }
    return true;
  }
}
