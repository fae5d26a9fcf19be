import { ApiError, PredictClient } from "./api.js";
import { UNREACHABLE_COLOR, colorScale } from "./color.js";
import {
  GridEditorState,
  applyPrediction,
  createState,
  gridRows,
  hoverText,
  parseGrid,
  predictionFor,
  serializeGrid,
  toggleCell,
} from "./state.js";

const CELL_FILL: Record<string, string> = {
  P: "#e8e4da",
  R: "#9a9a9a",
  E: "#7ec97e",
  D: "#d8b94d",
};

let state: GridEditorState = createState(30, 30);
const client = new PredictClient("");

const app = document.getElementById("app")!;
app.innerHTML = `
  <h1>EV lot layout studio</h1>
  <div class="toolbar">
    <button id="run">Run prediction</button>
    <label>rows <input id="rows" type="number" min="2" max="60" value="30"></label>
    <label>cols <input id="cols" type="number" min="2" max="60" value="30"></label>
    <button id="resize">New grid</button>
    <span id="status" class="status"></span>
  </div>
  <div id="grid" class="grid"></div>
  <div id="tooltip" class="tooltip" hidden></div>
  <details>
    <summary>Import / export layout file</summary>
    <textarea id="io" rows="12" spellcheck="false"></textarea>
    <div>
      <button id="export">Export current grid</button>
      <button id="import">Import from text</button>
    </div>
  </details>
  <p class="legend">
    click a cell to cycle parking &rarr; road &rarr; EVSE &rarr; door (doors on the
    boundary only); hover an EVSE after a run to see its predicted usage
  </p>
`;

const gridEl = document.getElementById("grid")!;
const statusEl = document.getElementById("status")!;
const tooltipEl = document.getElementById("tooltip")!;
const ioEl = document.getElementById("io") as HTMLTextAreaElement;

function setStatus(text: string, isError = false): void {
  statusEl.textContent = text;
  statusEl.classList.toggle("error", isError);
}

function render(): void {
  gridEl.style.gridTemplateColumns = `repeat(${state.width}, 18px)`;
  gridEl.replaceChildren();
  const scale = state.prediction && !state.dirty ? colorScale(state.prediction) : null;
  for (let r = 0; r < state.height; r++) {
    for (let c = 0; c < state.width; c++) {
      const type = state.cells[r][c];
      const cell = document.createElement("div");
      cell.className = `cell cell-${type}`;
      cell.style.background = CELL_FILL[type];
      if (type === "E" && scale) {
        const e = predictionFor(state, r, c);
        if (e) {
          cell.style.background = e.reachable ? scale(e.p_tot_kwh) : UNREACHABLE_COLOR;
          if (!e.reachable) cell.classList.add("unreachable");
        }
      }
      cell.dataset.row = String(r);
      cell.dataset.col = String(c);
      gridEl.appendChild(cell);
    }
  }
}

gridEl.addEventListener("click", (event) => {
  const target = event.target as HTMLElement;
  if (target.dataset.row === undefined) return;
  toggleCell(state, Number(target.dataset.row), Number(target.dataset.col));
  if (state.prediction) setStatus("grid edited, predictions stale");
  render();
});

gridEl.addEventListener("mousemove", (event) => {
  const target = event.target as HTMLElement;
  const text =
    target.dataset.row !== undefined
      ? hoverText(state, Number(target.dataset.row), Number(target.dataset.col))
      : null;
  if (!text) {
    tooltipEl.hidden = true;
    return;
  }
  tooltipEl.textContent = text;
  tooltipEl.hidden = false;
  tooltipEl.style.left = `${event.pageX + 12}px`;
  tooltipEl.style.top = `${event.pageY + 12}px`;
});

gridEl.addEventListener("mouseleave", () => {
  tooltipEl.hidden = true;
});

document.getElementById("run")!.addEventListener("click", async () => {
  setStatus("predicting...");
  try {
    const response = await client.predict(gridRows(state));
    applyPrediction(state, response);
    setStatus(`model ${response.model_id}: ${response.evses.length} EVSEs predicted`);
    render();
  } catch (err) {
    // keep the grid; surface the failure
    const msg = err instanceof ApiError ? err.message : String(err);
    setStatus(`prediction failed: ${msg}`, true);
  }
});

document.getElementById("resize")!.addEventListener("click", () => {
  const rows = Number((document.getElementById("rows") as HTMLInputElement).value);
  const cols = Number((document.getElementById("cols") as HTMLInputElement).value);
  try {
    state = createState(rows, cols);
    setStatus("");
    render();
  } catch (err) {
    setStatus(String(err), true);
  }
});

document.getElementById("export")!.addEventListener("click", () => {
  ioEl.value = serializeGrid(state);
});

document.getElementById("import")!.addEventListener("click", () => {
  try {
    state = parseGrid(ioEl.value);
    setStatus("layout imported");
    render();
  } catch (err) {
    setStatus(`import failed: ${err}`, true);
  }
});

render();
