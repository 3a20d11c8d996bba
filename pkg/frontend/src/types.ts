/** Payload types for the local service API (see docs/api.md). */

export type Quadrant = "PV_PA" | "PV_NA" | "NV_PA" | "NV_NA";
export type Band = "theta" | "alpha" | "beta" | "gamma";
export type Dimension = "valence" | "arousal";

export const QUADRANTS: readonly Quadrant[] = ["PV_PA", "PV_NA", "NV_PA", "NV_NA"];
export const BANDS: readonly Band[] = ["theta", "alpha", "beta", "gamma"];

export interface Song {
  title: string;
  artist: string;
}

export interface Trial {
  song: Song;
  baseline_start_ts: number;
  play_ts: number;
  stop_ts: number;
  valence: number;
  arousal: number;
  /** true when the user never touched either slider (both stayed at 0). */
  unmodified?: boolean;
}

export interface SessionLog {
  format_version: number;
  session_id: string;
  user_id: string;
  device_id: string;
  recording_ref: string;
  trials: Trial[];
}

export interface SummaryPayload {
  eeg_minutes: number;
  n_reports: number;
  n_songs: number;
}

export interface ActivityPoint {
  timestamp: number;
  score: number;
  song: string;
}

export interface ActivityPayload {
  span: string;
  dimension: Dimension;
  period: string;
  points: ActivityPoint[];
  daily_means: { day: string; mean: number }[];
}

export interface Moment {
  day: string;
  value: number;
  song: string;
}

export interface MomentsPayload {
  max_valence: Moment;
  min_valence: Moment;
  max_arousal: Moment;
  min_arousal: Moment;
}

export interface ScopeResult {
  valence_label: number;
  arousal_label: number;
  quadrant: Quadrant;
}

export interface DetectPayload extends ScopeResult {
  band_powers: Record<Band, number>;
  scopes: Partial<Record<"device" | "general", ScopeResult>>;
}

export interface DetectionMessage extends DetectPayload {
  type: "detection";
  window_end_ts: number;
}

export interface StreamGapMessage {
  type: "stream_gap";
  expected_ts: number;
  resumed_ts: number;
}

export interface StreamErrorMessage {
  type: "error";
  error?: string;
  message: string;
}

export type StreamMessage = DetectionMessage | StreamGapMessage | StreamErrorMessage;

export interface PlaylistEntry {
  title: string;
  artist: string;
  listen_count: number;
  last_listened_ts: number;
  quadrant: Quadrant;
}

export interface RecommendPayload {
  quadrant: Quadrant;
  playlist: PlaylistEntry[];
  notice?: "NoMatch";
}

export interface ApiError {
  error: string;
  message: string;
}

/** Validate a SessionLog document before it leaves the client. */
export function validateSessionLog(doc: SessionLog): string[] {
  const problems: string[] = [];
  if (doc.format_version !== 1) problems.push("format_version must be 1");
  for (const field of ["session_id", "user_id", "device_id", "recording_ref"] as const) {
    if (!doc[field]) problems.push(`${field} must be non-empty`);
  }
  let prevStop = -Infinity;
  doc.trials.forEach((t, i) => {
    if (!t.song.title) problems.push(`trial ${i}: song title must be non-empty`);
    if (!(t.baseline_start_ts < t.play_ts && t.play_ts < t.stop_ts)) {
      problems.push(`trial ${i}: need baseline_start < play < stop`);
    }
    if (t.baseline_start_ts < prevStop) problems.push(`trial ${i}: overlaps previous trial`);
    prevStop = t.stop_ts;
    for (const dim of ["valence", "arousal"] as const) {
      const v = t[dim];
      if (!Number.isFinite(v) || v < -5 || v > 5) problems.push(`trial ${i}: ${dim} out of [-5, 5]`);
      if (Math.abs(v * 10 - Math.round(v * 10)) > 1e-9) {
        problems.push(`trial ${i}: ${dim} must have 0.1 granularity`);
      }
    }
  });
  return problems;
}
