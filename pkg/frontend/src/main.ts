import { analyze, fetchModels } from "./api";
import { renderComparison, renderEmptyState, renderErrorPanel, renderSentence } from "./render";
import {
  ViewState,
  ResponseCache,
  buildRequest,
  clickToken,
  initialState,
  setSentence,
  toggleModel,
  tokenize,
} from "./state";

let state: ViewState = initialState();
const cache = new ResponseCache();
let inflight: AbortController | null = null;

const $ = (id: string) => document.getElementById(id)!;

function renderControls(): void {
  ($("sentence-input") as HTMLInputElement).value = state.sentence;
  $("token-strip").innerHTML = renderSentence(tokenize(state.sentence), state.targetIndex);
}

async function refresh(): Promise<void> {
  renderControls();
  const req = buildRequest(state);
  if (req === null) {
    $("view").innerHTML =
      state.selectedModels.length === 0
        ? renderEmptyState()
        : `<div class="empty-state">Click a token above to mark the target.</div>`;
    return;
  }

  const cached = cache.get(req);
  if (cached) {
    $("view").innerHTML = renderComparison(cached);
    return;
  }

  // one in-flight request per ViewState change: newer cancels older
  inflight?.abort();
  const controller = new AbortController();
  inflight = controller;
  try {
    const response = await analyze(req, controller.signal);
    cache.put(req, response);
    if (inflight === controller) {
      $("view").innerHTML = renderComparison(response);
    }
  } catch (err) {
    if ((err as Error).name === "AbortError") return;
    if (inflight === controller) {
      $("view").innerHTML = renderErrorPanel((err as Error).message);
    }
  }
}

function update(next: ViewState): void {
  state = next;
  void refresh();
}

async function boot(): Promise<void> {
  try {
    const listing = await fetchModels();
    const boxes = listing.models
      .map(
        (m) =>
          `<label class="model-pick"><input type="checkbox" data-model="${m.name}"> ` +
          `${m.name} <span class="dim">(${m.backend})</span></label>`,
      )
      .join("");
    $("model-picker").innerHTML = boxes;
    $("model-picker").addEventListener("change", (ev) => {
      const box = ev.target as HTMLInputElement;
      const name = box.dataset.model;
      if (name) update(toggleModel(state, name));
    });
  } catch (err) {
    $("view").innerHTML = renderErrorPanel((err as Error).message);
  }

  $("token-strip").addEventListener("click", (ev) => {
    const span = (ev.target as HTMLElement).closest(".token") as HTMLElement | null;
    if (!span || span.dataset.idx === undefined) return; // click outside tokens: no-op
    update(clickToken(state, Number(span.dataset.idx)));
  });

  $("sentence-input").addEventListener("change", (ev) => {
    update(setSentence(state, (ev.target as HTMLInputElement).value));
  });

  ($("topk-input") as HTMLInputElement).value = String(state.topK);
  $("topk-input").addEventListener("change", (ev) => {
    const k = Number((ev.target as HTMLInputElement).value);
    if (Number.isInteger(k) && k >= 1 && k <= 50) update({ ...state, topK: k });
  });

  ($("pos-select") as HTMLSelectElement).value = state.pos;
  $("pos-select").addEventListener("change", (ev) => {
    update({ ...state, pos: (ev.target as HTMLSelectElement).value });
  });

  void refresh();
}

void boot();
