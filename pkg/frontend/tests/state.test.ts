import { describe, expect, it } from "vitest";
import {
  ResponseCache,
  buildRequest,
  clickToken,
  initialState,
  requestKey,
  setSentence,
  toggleModel,
  tokenCharSpan,
  tokenize,
} from "../src/state";
import type { AnalyzeResponse } from "../src/types";

function stateWith(overrides: Partial<ReturnType<typeof initialState>>) {
  return { ...initialState(), ...overrides };
}

describe("target selection", () => {
  it("click on token 3 selects token 3", () => {
    const s = clickToken(initialState(), 3);
    expect(s.targetIndex).toBe(3);
  });

  it("re-click on the selected token deselects it", () => {
    const s1 = clickToken(initialState(), 3);
    const s2 = clickToken(s1, 3);
    expect(s2.targetIndex).toBeNull();
  });

  it("click outside the token range is a no-op", () => {
    const s0 = clickToken(initialState(), 2);
    expect(clickToken(s0, 99)).toBe(s0);
    expect(clickToken(s0, -1)).toBe(s0);
  });

  it("changing the sentence clears the selection", () => {
    const s = setSentence(clickToken(initialState(), 1), "a new sentence");
    expect(s.targetIndex).toBeNull();
    expect(s.sentence).toBe("a new sentence");
  });
});

describe("tokenization and spans", () => {
  it("splits on runs of whitespace", () => {
    expect(tokenize("  the  bright\tgirl ")).toEqual(["the", "bright", "girl"]);
  });

  it("computes the character span of a token", () => {
    expect(tokenCharSpan("the bright girl", 1)).toEqual([4, 10]);
    expect(tokenCharSpan("the bright girl", 0)).toEqual([0, 3]);
    expect(tokenCharSpan("the bright girl", 7)).toBeNull();
  });
});

describe("request building", () => {
  it("needs both a target and at least one model", () => {
    expect(buildRequest(initialState())).toBeNull();
    expect(buildRequest(stateWith({ targetIndex: 1 }))).toBeNull();
    expect(buildRequest(stateWith({ selectedModels: ["demo-toy"] }))).toBeNull();
  });

  it("builds an adhoc analyze request from the view state", () => {
    const s = stateWith({ targetIndex: 1, selectedModels: ["demo-toy"], topK: 5 });
    const req = buildRequest(s);
    expect(req).toEqual({
      sentence: "the bright girl reads a book",
      target_char_span: [4, 10],
      lemma: "bright",
      pos: "adj",
      models: [{ name: "demo-toy" }],
      top_k: 5,
    });
  });
});

describe("model toggling and the response cache", () => {
  it("toggles a model in and out of the selection", () => {
    const s1 = toggleModel(initialState(), "demo-toy");
    expect(s1.selectedModels).toEqual(["demo-toy"]);
    const s2 = toggleModel(s1, "demo-toy");
    expect(s2.selectedModels).toEqual([]);
  });

  it("keys the cache on the normalized request", () => {
    const a = { sentence: "x y", target_char_span: [0, 1] as [number, number], lemma: "x", pos: "noun", models: [{ name: "m1" }, { name: "m2" }], top_k: 10 };
    const b = { ...a, models: [{ name: "m2" }, { name: "m1" }] };
    expect(requestKey(a)).toBe(requestKey(b));
    const c = { ...a, top_k: 11 };
    expect(requestKey(a)).not.toBe(requestKey(c));
  });

  it("returns cached responses for re-toggled model sets", () => {
    const cache = new ResponseCache();
    const req = { sentence: "x", target_char_span: [0, 1] as [number, number], lemma: "x", pos: "noun", models: [{ name: "m1" }, { name: "m2" }], top_k: 10 };
    const resp = { schema_version: 1 } as AnalyzeResponse;
    cache.put(req, resp);
    expect(cache.get({ ...req, models: [{ name: "m2" }, { name: "m1" }] })).toBe(resp);
    expect(cache.size).toBe(1);
  });
});
