/** Pure render functions: service payload in, HTML string out.
 *
 * Contract: every number shown comes verbatim from a payload field — the
 * client computes nothing (enforced by the contract tests).
 */

import { markersFor, REFERENCE_EMOTIONS } from "./circumplex.js";
import type {
  ActivityPayload,
  Band,
  DetectionMessage,
  MomentsPayload,
  RecommendPayload,
  StreamMessage,
  SummaryPayload,
} from "./types.js";
import { BANDS, QUADRANTS } from "./types.js";

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function renderSummary(payload: SummaryPayload, week: string): string {
  return [
    `<section class="summary" data-week="${esc(week)}">`,
    `<div class="tile"><span class="value">${payload.eeg_minutes}</span><span class="label">EEG minutes</span></div>`,
    `<div class="tile"><span class="value">${payload.n_reports}</span><span class="label">reports</span></div>`,
    `<div class="tile"><span class="value">${payload.n_songs}</span><span class="label">songs</span></div>`,
    `</section>`,
  ].join("\n");
}

export function renderActivity(payload: ActivityPayload): string {
  const points = payload.points
    .map(
      (p) =>
        `<li data-ts="${p.timestamp}"><span class="score">${p.score}</span>` +
        `<span class="song">${esc(p.song)}</span></li>`,
    )
    .join("\n");
  const means = payload.daily_means
    .map((m) => `<li data-day="${esc(m.day)}">${m.mean}</li>`)
    .join("\n");
  return [
    `<section class="activity" data-span="${esc(payload.span)}" data-dimension="${esc(payload.dimension)}" data-period="${esc(payload.period)}">`,
    `<ol class="points">`,
    points,
    `</ol>`,
    `<ol class="daily-means">`,
    means,
    `</ol>`,
    `</section>`,
  ].join("\n");
}

const MOMENT_TITLES = {
  max_valence: "Happiest moment",
  min_valence: "Lowest moment",
  max_arousal: "Most energized",
  min_arousal: "Calmest moment",
} as const;

export function renderMoments(payload: MomentsPayload, month: string): string {
  const cards = (Object.keys(MOMENT_TITLES) as (keyof typeof MOMENT_TITLES)[])
    .map((key) => {
      const m = payload[key];
      return (
        `<div class="moment" data-kind="${key}">` +
        `<h3>${MOMENT_TITLES[key]}</h3>` +
        `<span class="day">${esc(m.day)}</span>` +
        `<span class="value">${m.value}</span>` +
        `<span class="song">${esc(m.song)}</span>` +
        `</div>`
      );
    })
    .join("\n");
  return `<section class="moments" data-month="${esc(month)}">\n${cards}\n</section>`;
}

export function renderRecommendations(payload: RecommendPayload): string {
  if (payload.playlist.length === 0) {
    return (
      `<section class="recommend" data-quadrant="${payload.quadrant}">` +
      `<p class="empty">No songs from your history match this mood yet.</p>` +
      `</section>`
    );
  }
  const rows = payload.playlist
    .map(
      (entry) =>
        `<li><span class="title">${esc(entry.title)}</span>` +
        `<span class="artist">${esc(entry.artist)}</span>` +
        `<span class="count">x${entry.listen_count}</span></li>`,
    )
    .join("\n");
  return (
    `<section class="recommend" data-quadrant="${payload.quadrant}">` +
    `<ol>\n${rows}\n</ol></section>`
  );
}

/** Detection view: band selector + live trace + circumplex markers. */
export class DetectionView {
  selectedBand: Band = "alpha";
  /** (window_end_ts, band power of the selected band) pairs, oldest first. */
  readonly trace: { ts: number; power: number }[] = [];
  latest: DetectionMessage | null = null;
  gapCount = 0;

  constructor(private readonly maxTracePoints = 60) {}

  selectBand(band: Band): void {
    if (!BANDS.includes(band)) throw new Error(`unknown band ${band}`);
    if (band === this.selectedBand) return;
    this.selectedBand = band;
    this.trace.length = 0;
    if (this.latest) this.pushTracePoint(this.latest);
  }

  onMessage(message: StreamMessage): void {
    if (message.type === "stream_gap") {
      this.gapCount += 1;
      return;
    }
    if (message.type !== "detection") return;
    this.latest = message;
    this.pushTracePoint(message);
  }

  private pushTracePoint(message: DetectionMessage): void {
    this.trace.push({
      ts: message.window_end_ts,
      power: message.band_powers[this.selectedBand],
    });
    if (this.trace.length > this.maxTracePoints) this.trace.shift();
  }

  render(): string {
    const bands = BANDS.map(
      (b) =>
        `<button data-band="${b}"${b === this.selectedBand ? ' class="active"' : ""}>${b}</button>`,
    ).join("");
    const trace = this.trace
      .map((p) => `<span data-ts="${p.ts}">${p.power}</span>`)
      .join("");
    const markers = this.latest
      ? markersFor(this.latest.scopes)
          .map(
            (m) =>
              `<span class="marker ${m.shape}" data-scope="${m.scope}" ` +
              `data-quadrant="${m.quadrant}" style="left:${m.x * 100}%;bottom:${m.y * 100}%"></span>`,
          )
          .join("")
      : "";
    const labels = QUADRANTS.map(
      (q) => `<span class="ref" data-quadrant="${q}">${REFERENCE_EMOTIONS[q]}</span>`,
    ).join("");
    return [
      `<section class="detect">`,
      `<nav class="bands">${bands}</nav>`,
      `<div class="trace">${trace}</div>`,
      `<div class="circumplex">${labels}${markers}</div>`,
      `<div class="gaps" data-count="${this.gapCount}"></div>`,
      `</section>`,
    ].join("\n");
  }
}
