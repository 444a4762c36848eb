/**
 * The buzz log explains every position change instead of leaving the author
 * guessing: each evaluation becomes a row, later moves of the would-buzz
 * point are called out, and the locking row is pinned.
 */

import type { WireBuzz } from "./types.js";

export interface HistoryRow {
  passId: number;
  prefixEnd: number;
  confidence: number;
  matches: boolean;
  topGuess: string | null;
  note: string;
  pinned: boolean;
}

export function historyRows(buzz: WireBuzz, thresholdHint = 0.5): HistoryRow[] {
  const rows: HistoryRow[] = [];
  let wouldBuzz: number | null = null;
  let locked = false;
  for (const ev of buzz.history) {
    let note = "";
    let pinned = false;
    const confident = ev.confidence >= thresholdHint;
    if (!locked && confident && ev.matches) {
      note = "locked";
      pinned = true;
      locked = true;
    } else if (!locked && confident) {
      if (wouldBuzz !== null && ev.prefix_end > wouldBuzz) {
        note = "position moved later";
      } else {
        note = "would buzz here";
      }
      wouldBuzz = ev.prefix_end;
    }
    rows.push({
      passId: ev.pass_id,
      prefixEnd: ev.prefix_end,
      confidence: ev.confidence,
      matches: ev.matches,
      topGuess: ev.top_guess,
      note,
      pinned,
    });
  }
  return rows;
}

export function renderHistoryHtml(buzz: WireBuzz, thresholdHint = 0.5): string {
  const rows = historyRows(buzz, thresholdHint);
  if (rows.length === 0) {
    return "<p class='placeholder'>no evaluations yet</p>";
  }
  const body = rows
    .map((row) => {
      const cls = row.pinned ? ' class="pinned"' : "";
      const verdict = row.matches ? "match" : "miss";
      return (
        `<tr${cls}><td>${row.passId}</td><td>${row.prefixEnd}</td>` +
        `<td>${row.confidence.toFixed(3)}</td><td>${verdict}</td>` +
        `<td>${row.topGuess ?? "-"}</td><td>${row.note}</td></tr>`
      );
    })
    .join("");
  return (
    "<table><thead><tr><th>pass</th><th>offset</th><th>conf</th>" +
    "<th>verdict</th><th>top guess</th><th>note</th></tr></thead>" +
    `<tbody>${body}</tbody></table>`
  );
}
