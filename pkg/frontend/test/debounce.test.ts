import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { Debouncer } from "../src/debounce.js";

describe("Debouncer", () => {
  beforeEach(() => {
    vi.useFakeTimers();
  });

  afterEach(() => {
    vi.useRealTimers();
  });

  it("collapses rapid calls into one trailing invocation", () => {
    const debouncer = new Debouncer(500);
    const calls: number[] = [];
    for (let i = 0; i < 10; i++) {
      debouncer.schedule(() => calls.push(i));
      vi.advanceTimersByTime(100);
    }
    expect(calls).toHaveLength(0);
    vi.advanceTimersByTime(500);
    expect(calls).toEqual([9]);
  });

  it("fires again for a later burst", () => {
    const debouncer = new Debouncer(500);
    let n = 0;
    debouncer.schedule(() => n++);
    vi.advanceTimersByTime(500);
    debouncer.schedule(() => n++);
    vi.advanceTimersByTime(500);
    expect(n).toBe(2);
  });

  it("cancel stops the pending call", () => {
    const debouncer = new Debouncer(500);
    let fired = false;
    debouncer.schedule(() => {
      fired = true;
    });
    expect(debouncer.pending).toBe(true);
    debouncer.cancel();
    vi.advanceTimersByTime(1000);
    expect(fired).toBe(false);
    expect(debouncer.pending).toBe(false);
  });
});
