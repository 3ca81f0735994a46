import type { RelationLabel } from "./types";

// One swatch per relation label, fixed. Okabe–Ito palette (plus black),
// chosen for color-blind safety. Anchors follow the usual convention:
// similar-to words are blue, words with no relation at all are red.
export const RELATION_COLORS: Record<RelationLabel, string> = {
  synonym: "#0072B2", // blue
  hypernym: "#009E73", // bluish green
  hyponym: "#56B4E9", // sky blue
  "co-hyponym": "#E69F00", // orange
  "transitive-hypernym": "#CC79A7", // reddish purple
  "transitive-hyponym": "#F0E442", // yellow
  "co-hyponym-3": "#000000", // black
  "unknown-relation": "#999999", // grey
  "unknown-word": "#D55E00", // vermillion red
};

export const RELATION_LABELS = Object.keys(RELATION_COLORS) as RelationLabel[];

export function colorFor(relation: string): string {
  const hex = (RELATION_COLORS as Record<string, string>)[relation];
  // an unrecognized label from a newer server is treated as "no relation"
  return hex ?? RELATION_COLORS["unknown-word"];
}
