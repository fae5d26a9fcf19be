import type { PredictResponse } from "./types.js";

/** Linear scale over the reachable EVSEs' p_tot range of one response.
 * Returns a CSS color; unreachable EVSEs get a fixed distinct style. */
export function colorScale(response: PredictResponse): (pTot: number) => string {
  const values = response.evses.filter((e) => e.reachable).map((e) => e.p_tot_kwh);
  const min = Math.min(...values);
  const max = Math.max(...values);
  return (pTot: number) => {
    const t = max > min ? (pTot - min) / (max - min) : 0.5;
    return heat(Math.max(0, Math.min(1, t)));
  };
}

/** Blue (cold) through to red (hot). */
export function heat(t: number): string {
  const r = Math.round(40 + 215 * t);
  const g = Math.round(60 + 80 * (1 - Math.abs(2 * t - 1)));
  const b = Math.round(255 - 215 * t);
  return `rgb(${r}, ${g}, ${b})`;
}

export const UNREACHABLE_COLOR = "#555555";
