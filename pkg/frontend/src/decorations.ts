/**
 * Pure decoration math: split the draft into segments whose boundaries are
 * exactly the server-reported span offsets. No re-tokenization happens on
 * the client; an offset either comes from the server or it is not rendered.
 */

import type { WireSpan } from "./types.js";

export interface Segment {
  start: number;
  end: number;
  kinds: string[];
}

/** Drop spans the current text cannot contain (defense in depth; stale
 * reports are already rejected upstream by hash). */
export function validSpans(spans: WireSpan[], textLength: number): WireSpan[] {
  return spans.filter(
    (s) => s.start >= 0 && s.start < s.end && s.end <= textLength,
  );
}

export function segmentByDecorations(
  textLength: number,
  spans: WireSpan[],
  extraBoundaries: number[] = [],
): Segment[] {
  const usable = validSpans(spans, textLength);
  const cuts = new Set<number>([0, textLength]);
  for (const s of usable) {
    cuts.add(s.start);
    cuts.add(s.end);
  }
  for (const b of extraBoundaries) {
    if (b >= 0 && b <= textLength) cuts.add(b);
  }
  const ordered = [...cuts].sort((a, b) => a - b);
  const segments: Segment[] = [];
  for (let i = 0; i + 1 < ordered.length; i++) {
    const start = ordered[i]!;
    const end = ordered[i + 1]!;
    const kinds = usable
      .filter((s) => s.start <= start && end <= s.end)
      .map((s) => s.kind);
    segments.push({ start, end, kinds: [...new Set(kinds)].sort() });
  }
  return segments;
}

function escapeHtml(raw: string): string {
  return raw
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/**
 * Render the highlight overlay as HTML. The buzz marker, when given, is
 * placed directly after the character at that offset boundary.
 */
export function renderOverlayHtml(
  text: string,
  spans: WireSpan[],
  buzzMarker: number | null,
): string {
  const extra = buzzMarker === null ? [] : [buzzMarker];
  const segments = segmentByDecorations(text.length, spans, extra);
  const parts: string[] = [];
  for (const seg of segments) {
    if (buzzMarker !== null && seg.start === buzzMarker) {
      parts.push('<span class="buzz-marker">[buzz]</span>');
    }
    const slice = escapeHtml(text.slice(seg.start, seg.end));
    if (seg.kinds.length === 0) {
      parts.push(slice);
    } else {
      const classes = seg.kinds.map((k) => `deco-${k}`).join(" ");
      parts.push(
        `<mark class="${classes}" data-start="${seg.start}" data-end="${seg.end}">${slice}</mark>`,
      );
    }
  }
  if (buzzMarker !== null && buzzMarker === text.length) {
    parts.push('<span class="buzz-marker">[buzz]</span>');
  }
  return parts.join("");
}
