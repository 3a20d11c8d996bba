/** Browser entry point: wires the views to the local service. */

import { ApiClient, ServiceError } from "./api.js";
import { SessionLogger, SessionQueue } from "./sessionLogger.js";
import {
  DetectionView,
  renderActivity,
  renderMoments,
  renderRecommendations,
  renderSummary,
} from "./views.js";
import type { Quadrant, StreamMessage } from "./types.js";

const api = new ApiClient();
const queue = new SessionQueue(api);
const detection = new DetectionView();

function byId(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing #${id}`);
  return el;
}

async function refreshDashboard(user: string, week: string, month: string): Promise<void> {
  try {
    byId("summary").innerHTML = renderSummary(await api.summary(user, week), week);
    byId("activity").innerHTML = renderActivity(
      await api.activity(user, "month", "valence", month),
    );
    byId("moments").innerHTML = renderMoments(await api.moments(user, month), month);
  } catch (err) {
    if (err instanceof ServiceError && err.status === 404) {
      byId("summary").innerHTML = `<p class="empty">No sessions yet.</p>`;
      return;
    }
    throw err;
  }
}

async function showPlaylist(user: string, quadrant: Quadrant): Promise<void> {
  byId("recommend").innerHTML = renderRecommendations(await api.recommend(user, quadrant));
}

function openStream(device: string): WebSocket {
  const socket = new WebSocket(api.streamUrl(device));
  socket.onmessage = (event) => {
    const message = JSON.parse(event.data) as StreamMessage;
    detection.onMessage(message);
    byId("detect").innerHTML = detection.render();
  };
  return socket;
}

export { api, queue, detection, refreshDashboard, showPlaylist, openStream, SessionLogger };
