import type { AnalyzeRequest, AnalyzeResponse } from "./types";

export interface ViewState {
  sentence: string;
  targetIndex: number | null;
  selectedModels: string[];
  topK: number;
  pos: string;
}

export function initialState(): ViewState {
  return {
    sentence: "the bright girl reads a book",
    targetIndex: null,
    selectedModels: [],
    topK: 10,
    pos: "adj",
  };
}

export function tokenize(sentence: string): string[] {
  return sentence.split(/\s+/).filter((t) => t.length > 0);
}

// Character span of token i under whitespace tokenization, for the
// adhoc analyze request. Returns null when i is out of range.
export function tokenCharSpan(sentence: string, index: number): [number, number] | null {
  const re = /\S+/g;
  let i = 0;
  let m: RegExpExecArray | null;
  while ((m = re.exec(sentence)) !== null) {
    if (i === index) return [m.index, m.index + m[0].length];
    i += 1;
  }
  return null;
}

// Click on token i: select it, deselect on re-click, ignore clicks that
// land outside the token range.
export function clickToken(state: ViewState, index: number): ViewState {
  const n = tokenize(state.sentence).length;
  if (index < 0 || index >= n) return state;
  const targetIndex = state.targetIndex === index ? null : index;
  return { ...state, targetIndex };
}

export function setSentence(state: ViewState, sentence: string): ViewState {
  // a new sentence invalidates the old span
  return { ...state, sentence, targetIndex: null };
}

export function toggleModel(state: ViewState, name: string): ViewState {
  const selected = state.selectedModels.includes(name)
    ? state.selectedModels.filter((m) => m !== name)
    : [...state.selectedModels, name];
  return { ...state, selectedModels: selected };
}

export function buildRequest(state: ViewState): AnalyzeRequest | null {
  if (state.targetIndex === null || state.selectedModels.length === 0) return null;
  const span = tokenCharSpan(state.sentence, state.targetIndex);
  if (span === null) return null;
  const word = state.sentence.slice(span[0], span[1]).toLowerCase();
  return {
    sentence: state.sentence,
    target_char_span: span,
    lemma: word,
    pos: state.pos,
    models: state.selectedModels.map((name) => ({ name })),
    top_k: state.topK,
  };
}

function stableStringify(value: unknown): string {
  if (Array.isArray(value)) {
    return `[${value.map(stableStringify).join(",")}]`;
  }
  if (value !== null && typeof value === "object") {
    const obj = value as Record<string, unknown>;
    const body = Object.keys(obj)
      .sort()
      .filter((k) => obj[k] !== undefined)
      .map((k) => `${JSON.stringify(k)}:${stableStringify(obj[k])}`);
    return `{${body.join(",")}}`;
  }
  return JSON.stringify(value);
}

// Cache key: the request under a normalized form (sorted keys at every
// level, models sorted by name) so that toggling model order hits the
// same entry.
export function requestKey(req: AnalyzeRequest): string {
  const normalized = {
    ...req,
    models: [...req.models].sort((a, b) => a.name.localeCompare(b.name)),
  };
  return stableStringify(normalized);
}

export class ResponseCache {
  private entries = new Map<string, AnalyzeResponse>();

  get(req: AnalyzeRequest): AnalyzeResponse | undefined {
    return this.entries.get(requestKey(req));
  }

  put(req: AnalyzeRequest, response: AnalyzeResponse): void {
    this.entries.set(requestKey(req), response);
  }

  get size(): number {
    return this.entries.size;
  }
}
