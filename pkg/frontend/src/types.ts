// Wire types for the /api/* endpoints. These mirror the service's JSON
// exactly; nothing here is computed client-side.

export type RelationLabel =
  | "synonym"
  | "hypernym"
  | "hyponym"
  | "co-hyponym"
  | "transitive-hypernym"
  | "transitive-hyponym"
  | "co-hyponym-3"
  | "unknown-relation"
  | "unknown-word";

export interface Substitute {
  word: string;
  probability: number;
  relation: RelationLabel;
}

export interface ModelResult {
  name: string;
  injection: string;
  substitutes: Substitute[];
  true_positives: number;
  // gold word -> 1-based rank among this model's substitutes, null if absent
  gold_ranks: Record<string, number | null>;
}

export interface AnalyzeResponse {
  schema_version: number;
  tokens: string[];
  target_index: number;
  target_word: string;
  target_lemma: string;
  pos: string;
  gold: Record<string, number>;
  models: ModelResult[];
}

export interface ApiError {
  schema_version: number;
  error: { code: string; message?: string };
}

export interface ModelInfo {
  name: string;
  backend: string;
  default_injection: string;
  supported_injections: string[];
  reentrant: boolean;
  vocabulary_size: number | null;
}

export interface ModelsResponse {
  schema_version: number;
  models: ModelInfo[];
}

export interface ModelSpec {
  name: string;
  injection?: string;
}

export interface AnalyzeRequest {
  sentence?: string;
  target_char_span?: [number, number];
  lemma?: string;
  pos?: string;
  dataset?: string;
  instance_id?: string;
  models: ModelSpec[];
  top_k?: number;
  postproc?: string;
}
