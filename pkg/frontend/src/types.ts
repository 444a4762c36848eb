/** Wire types mirroring the service's JSON report, field for field. */

export type SpanKind = "evidence" | "pronunciation" | "country";

export interface WireSpan {
  start: number;
  end: number;
  kind: SpanKind;
  payload: Record<string, unknown>;
}

export interface WireGuess {
  answer: string;
  score: number;
  confidence: number;
}

export interface BuzzHistoryEntry {
  pass_id: number;
  prefix_end: number;
  confidence: number;
  matches: boolean;
  top_guess: string | null;
}

export interface WireBuzz {
  locked: boolean;
  position: number | null;
  history_len: number;
  regression_events: number;
  first_wrong_position: number | null;
  first_wrong_guess: string | null;
  history: BuzzHistoryEntry[];
}

export interface WireSimilar {
  id: string;
  similarity: number;
}

export interface WireDifficulty {
  label: string;
  p: number;
}

export interface WireRecommendation {
  country: string;
  count: number;
}

export interface WireScore {
  adversarial: number;
  diversity: number;
  total: number;
}

export interface WireGame {
  remaining_s: number;
  estimate: WireScore | null;
}

export interface WireReport {
  report_hash: string;
  spans: WireSpan[];
  guesses: WireGuess[];
  buzz: WireBuzz;
  similar: WireSimilar[];
  difficulty: WireDifficulty | null;
  distribution: Record<string, number>;
  recommendations: WireRecommendation[];
  errors: Record<string, string>;
  game: WireGame | null;
}

export interface SubmissionRecord {
  session_id: string;
  finalized_at: string;
  text: string;
  answer: string;
  category: string | null;
  difficulty: { label: string | null; p: number | null };
  score: { adversarial: number; diversity: number; total: number } | null;
  snapshots: unknown[];
  buzz_history: unknown[];
}
