import { describe, expect, it } from "vitest";

import { Countdown, GameHud } from "../src/gameHud.js";

describe("Countdown", () => {
  it("counts down from the configured duration", () => {
    let expired = 0;
    const countdown = new Countdown(300, () => expired++);
    for (let i = 0; i < 299; i++) countdown.tick(1);
    expect(countdown.remainingS).toBe(1);
    expect(expired).toBe(0);
    countdown.tick(1);
    expect(countdown.remainingS).toBe(0);
    expect(expired).toBe(1);
  });

  it("fires expiry exactly once", () => {
    let expired = 0;
    const countdown = new Countdown(2, () => expired++);
    countdown.tick(5);
    countdown.tick(5);
    expect(expired).toBe(1);
  });
});

describe("GameHud", () => {
  it("expiry makes the editor read-only but keeps submit enabled", () => {
    const hud = new GameHud();
    hud.start(300);
    expect(hud.state.editorReadOnly).toBe(false);
    for (let i = 0; i < 300; i++) hud.tick(1);
    expect(hud.state.editorReadOnly).toBe(true);
    expect(hud.state.submitEnabled).toBe(true);
    expect(hud.state.remainingS).toBe(0);
  });

  it("resyncs the clock from server reports", () => {
    const hud = new GameHud();
    hud.start(300);
    hud.tick(100);
    hud.syncFromServer(250, { adversarial: 1, diversity: 1, total: 100 });
    expect(hud.state.remainingS).toBe(250);
    expect(hud.state.estimate!.total).toBe(100);
  });

  it("a server deadline shows the banner and locks editing", () => {
    const hud = new GameHud();
    hud.start(300);
    hud.deadlineFromServer();
    expect(hud.state.deadlineBanner).toBe(true);
    expect(hud.state.editorReadOnly).toBe(true);
    expect(hud.state.submitEnabled).toBe(true);
  });
});
