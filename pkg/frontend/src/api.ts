import type { AnalyzeRequest, AnalyzeResponse, ModelsResponse } from "./types";

// The UI talks to the service exclusively through /api/* paths; in dev
// these are proxied to `lexsub serve` (see vite.config.ts).

async function parseError(r: Response): Promise<string> {
  try {
    const body = await r.json();
    return body?.error?.code ?? body?.detail ?? `HTTP ${r.status}`;
  } catch {
    return `HTTP ${r.status}`;
  }
}

export async function fetchModels(): Promise<ModelsResponse> {
  const r = await fetch("/api/models");
  if (!r.ok) throw new Error(await parseError(r));
  return r.json();
}

export async function analyze(
  req: AnalyzeRequest,
  signal?: AbortSignal,
): Promise<AnalyzeResponse> {
  const r = await fetch("/api/analyze", {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(req),
    signal,
  });
  if (!r.ok) throw new Error(await parseError(r));
  return r.json();
}
