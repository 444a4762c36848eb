/**
 * Editor state: the draft, its decorations, and the stale-report gate.
 *
 * A report is applied only if the draft it was computed for is still the
 * draft on screen; anything else is dropped, never rendered.
 */

import { validSpans } from "./decorations.js";
import type { WireReport, WireSpan } from "./types.js";

export interface RequestSnapshot {
  text: string;
  answer: string;
}

export class EditorState {
  text = "";
  answer = "";
  dirty = false;
  readOnly = false;
  lastReportHash: string | null = null;
  decorations: WireSpan[] = [];
  buzzMarker: number | null = null;
  lastReport: WireReport | null = null;

  edit(text: string, answer: string): void {
    if (this.readOnly) return;
    if (text === this.text && answer === this.answer) return;
    this.text = text;
    this.answer = answer;
    this.dirty = true;
  }

  snapshot(): RequestSnapshot {
    return { text: this.text, answer: this.answer };
  }

  /**
   * Apply a server report. Returns false (and changes nothing) when the
   * report is stale, i.e. the draft has moved on since the request.
   */
  acceptReport(report: WireReport, requestedFor: RequestSnapshot): boolean {
    if (
      requestedFor.text !== this.text ||
      requestedFor.answer !== this.answer
    ) {
      return false;
    }
    this.lastReport = report;
    this.lastReportHash = report.report_hash;
    this.decorations = validSpans(report.spans, this.text.length);
    this.buzzMarker = report.buzz.position;
    this.dirty = false;
    return true;
  }
}
