import type { CellType, EvsePrediction, PredictResponse } from "./types.js";

// Cell cycle advanced by clicking; Door is only legal on boundary cells.
const CYCLE: CellType[] = ["P", "R", "E", "D"];

export interface GridEditorState {
  height: number;
  width: number;
  cells: CellType[][];
  dirty: boolean;
  prediction: PredictResponse | null;
}

export function createState(height = 30, width = 30): GridEditorState {
  if (height < 2 || width < 2) {
    throw new Error("grid must be at least 2x2");
  }
  const cells = Array.from({ length: height }, () =>
    Array.from({ length: width }, () => "P" as CellType),
  );
  return { height, width, cells, dirty: true, prediction: null };
}

export function isBoundary(state: GridEditorState, row: number, col: number): boolean {
  return row === 0 || col === 0 || row === state.height - 1 || col === state.width - 1;
}

/** Advance the cell through Parking -> Road -> EVSE -> Door -> Parking,
 * skipping Door on interior cells. Any edit marks predictions stale. */
export function toggleCell(state: GridEditorState, row: number, col: number): void {
  if (row < 0 || col < 0 || row >= state.height || col >= state.width) {
    throw new Error(`cell (${row}, ${col}) outside grid`);
  }
  let next = CYCLE[(CYCLE.indexOf(state.cells[row][col]) + 1) % CYCLE.length];
  if (next === "D" && !isBoundary(state, row, col)) {
    next = "P";
  }
  state.cells[row][col] = next;
  state.dirty = true;
}

/** Rows in the layout file character format (what /api/predict expects). */
export function gridRows(state: GridEditorState): string[] {
  return state.cells.map((row) => row.join(""));
}

export function serializeGrid(state: GridEditorState): string {
  return gridRows(state).join("\n") + "\n";
}

/** Parse layout text back into a fresh editor state (import path). */
export function parseGrid(text: string): GridEditorState {
  const lines = text.split("\n").filter((line) => line.length > 0);
  if (lines.length < 2) {
    throw new Error("layout needs at least 2 rows");
  }
  const width = lines[0].length;
  const cells: CellType[][] = lines.map((line, i) => {
    if (line.length !== width) {
      throw new Error(`ragged row ${i}: expected ${width} cells, got ${line.length}`);
    }
    return Array.from(line, (ch) => {
      if (ch !== "D" && ch !== "R" && ch !== "E" && ch !== "P") {
        throw new Error(`unknown cell character '${ch}' in row ${i}`);
      }
      return ch;
    });
  });
  return { height: lines.length, width, cells, dirty: true, prediction: null };
}

export function applyPrediction(state: GridEditorState, response: PredictResponse): void {
  state.prediction = response;
  state.dirty = false;
}

export function predictionFor(
  state: GridEditorState,
  row: number,
  col: number,
): EvsePrediction | null {
  if (!state.prediction) return null;
  return state.prediction.evses.find((e) => e.row === row && e.col === col) ?? null;
}

/** Tooltip text for a hovered cell, or null when there is nothing to show. */
export function hoverText(state: GridEditorState, row: number, col: number): string | null {
  if (state.cells[row][col] !== "E" || !state.prediction) return null;
  if (state.dirty) {
    return "prediction stale: grid edited since last run";
  }
  const e = predictionFor(state, row, col);
  if (!e) return null;
  return `τ = ${e.tau_kw.toFixed(2)} kW, P_tot = ${e.p_tot_kwh.toFixed(2)} kWh`;
}
