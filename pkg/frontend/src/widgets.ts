/**
 * Widget panel state. Toggling is display-only: data flows into every panel
 * on each report whether visible or not, and flipping visibility never talks
 * to the network.
 */

import type { WireReport } from "./types.js";

export const WIDGET_NAMES = [
  "guesses",
  "buzzer",
  "evidence",
  "pronunciation",
  "countries",
  "similar",
  "difficulty",
  "distribution",
] as const;

export type WidgetName = (typeof WIDGET_NAMES)[number];

export class WidgetPanels {
  visible: Record<WidgetName, boolean>;
  report: WireReport | null = null;
  updates = 0;

  constructor() {
    this.visible = Object.fromEntries(
      WIDGET_NAMES.map((name) => [name, true]),
    ) as Record<WidgetName, boolean>;
  }

  update(report: WireReport): void {
    this.report = report;
    this.updates += 1;
  }

  toggle(name: WidgetName): boolean {
    this.visible[name] = !this.visible[name];
    return this.visible[name];
  }

  errorFor(name: WidgetName): string | null {
    if (this.report === null) return null;
    return this.report.errors[name] ?? null;
  }

  /** Panel body as HTML; panels render from stored data only. */
  renderBody(name: WidgetName): string {
    const r = this.report;
    if (r === null) return "<p class='placeholder'>waiting for a draft</p>";
    const error = this.errorFor(name);
    if (error !== null) return `<p class="widget-error">${error}</p>`;
    switch (name) {
      case "guesses":
        if (r.guesses.length === 0) return "<p class='placeholder'>no guesses yet</p>";
        return (
          "<ol>" +
          r.guesses
            .slice(0, 10)
            .map(
              (g) =>
                `<li>${escape(g.answer)} <small>${g.score.toFixed(3)} / conf ${g.confidence.toFixed(3)}</small></li>`,
            )
            .join("") +
          "</ol>"
        );
      case "buzzer": {
        const b = r.buzz;
        if (b.locked)
          return `<p>locked at offset <strong>${b.position}</strong></p>`;
        if (b.position !== null)
          return `<p>would buzz at ${b.position} (not locked; top guess misses)</p>`;
        return "<p class='placeholder'>no confident buzz yet</p>";
      }
      case "evidence":
        return listSpans(r, "evidence", (p) => String(p.term ?? ""));
      case "pronunciation":
        return listSpans(r, "pronunciation", (p) => String(p.word ?? ""));
      case "countries": {
        const mentions = listSpans(r, "country", (p) => String(p.country ?? ""));
        const recs = r.recommendations
          .map((rec) => `${escape(rec.country)} (${rec.count})`)
          .join(", ");
        return `${mentions}<p>try: ${recs || "-"}</p>`;
      }
      case "similar":
        if (r.similar.length === 0) return "<p class='placeholder'>nothing similar</p>";
        return (
          "<ul>" +
          r.similar
            .map(
              (s) => `<li>${escape(s.id)} <small>${s.similarity.toFixed(3)}</small></li>`,
            )
            .join("") +
          "</ul>"
        );
      case "difficulty":
        if (r.difficulty === null) return "<p class='placeholder'>not rated</p>";
        return `<p>${escape(r.difficulty.label)} <small>p=${r.difficulty.p.toFixed(3)}</small></p>`;
      case "distribution":
        return (
          "<ul>" +
          Object.entries(r.distribution)
            .sort((a, b) => b[1] - a[1])
            .map(([cat, n]) => `<li>${escape(cat)}: ${n}</li>`)
            .join("") +
          "</ul>"
        );
    }
  }
}

function listSpans(
  r: WireReport,
  kind: string,
  labelOf: (payload: Record<string, unknown>) => string,
): string {
  const spans = r.spans.filter((s) => s.kind === kind);
  if (spans.length === 0) return "<p class='placeholder'>none</p>";
  return (
    "<ul>" +
    spans
      .map(
        (s) =>
          `<li>${escape(labelOf(s.payload))} <small>@${s.start}-${s.end}</small></li>`,
      )
      .join("") +
    "</ul>"
  );
}

function escape(raw: string): string {
  return raw.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}
