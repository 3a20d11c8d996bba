/** Thin typed client over the local service; no business logic here. */

import type {
  ActivityPayload,
  ApiError,
  DetectPayload,
  Dimension,
  MomentsPayload,
  Quadrant,
  RecommendPayload,
  SessionLog,
  SummaryPayload,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ServiceError extends Error {
  constructor(public status: number, public body: ApiError) {
    super(`${body.error}: ${body.message}`);
  }
}

export class ApiClient {
  constructor(
    private baseUrl: string = "http://127.0.0.1:8410",
    private fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}/api/v1${path}`, init);
    const body = await response.json();
    if (!response.ok) throw new ServiceError(response.status, body as ApiError);
    return body as T;
  }

  postSession(session: SessionLog, recordingPath?: string): Promise<{ session_id: string }> {
    return this.request("/sessions", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ session, recording_path: recordingPath ?? null }),
    });
  }

  summary(user: string, week: string): Promise<SummaryPayload> {
    const q = new URLSearchParams({ user, week });
    return this.request(`/summary?${q}`);
  }

  activity(user: string, span: string, dimension: Dimension, period: string): Promise<ActivityPayload> {
    const q = new URLSearchParams({ user, span, dimension, period });
    return this.request(`/activity?${q}`);
  }

  moments(user: string, month: string): Promise<MomentsPayload> {
    const q = new URLSearchParams({ user, month });
    return this.request(`/moments?${q}`);
  }

  detect(device: string, epoch: number[][]): Promise<DetectPayload> {
    return this.request("/detect", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ device, epoch }),
    });
  }

  recommend(user: string, quadrant: Quadrant, limit = 10): Promise<RecommendPayload> {
    const q = new URLSearchParams({ user, quadrant, limit: String(limit) });
    return this.request(`/recommend?${q}`);
  }

  /** ws:// URL of the streaming detection channel for one device. */
  streamUrl(device: string): string {
    return `${this.baseUrl.replace(/^http/, "ws")}/api/v1/stream/detect?device=${encodeURIComponent(device)}`;
  }
}
