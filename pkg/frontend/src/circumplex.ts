/** Valence-arousal circumplex geometry: quadrant -> marker position.
 *
 * The labeled discrete emotions around the rim are decorative reference
 * text only; marker positions come solely from service-reported labels.
 */

import type { Quadrant, ScopeResult } from "./types.js";

/** Unit-square marker center per quadrant (x: valence, y: arousal; y up). */
export function quadrantCenter(quadrant: Quadrant): { x: number; y: number } {
  const valencePositive = quadrant.startsWith("PV");
  const arousalPositive = quadrant.endsWith("PA");
  return {
    x: valencePositive ? 0.75 : 0.25,
    y: arousalPositive ? 0.75 : 0.25,
  };
}

/** Reference emotion labels per quadrant (decoration, not data). */
export const REFERENCE_EMOTIONS: Record<Quadrant, string> = {
  PV_PA: "excited / happy",
  PV_NA: "relaxed / calm",
  NV_PA: "tense / angry",
  NV_NA: "sad / bored",
};

export interface Marker {
  scope: "device" | "general";
  quadrant: Quadrant;
  x: number;
  y: number;
  shape: "circle" | "square";
}

/** One distinct marker per reported scope. */
export function markersFor(scopes: Partial<Record<"device" | "general", ScopeResult>>): Marker[] {
  const markers: Marker[] = [];
  for (const scope of ["device", "general"] as const) {
    const result = scopes[scope];
    if (!result) continue;
    const { x, y } = quadrantCenter(result.quadrant);
    markers.push({
      scope,
      quadrant: result.quadrant,
      x,
      y,
      shape: scope === "device" ? "circle" : "square",
    });
  }
  return markers;
}
