/**
 * Game-mode HUD: a local countdown seeded from the server's remaining time.
 * Expiry makes the editor read-only exactly once; submitting stays possible
 * so timed work is never lost.
 */

import type { WireScore } from "./types.js";

export class Countdown {
  remainingS: number;
  private fired = false;

  constructor(
    remainingS: number,
    private readonly onExpire: () => void,
  ) {
    this.remainingS = remainingS;
    if (remainingS <= 0) this.fire();
  }

  /** Advance local time; also used to re-sync from server reports. */
  tick(dtS: number): void {
    this.setRemaining(this.remainingS - dtS);
  }

  setRemaining(remainingS: number): void {
    this.remainingS = Math.max(0, remainingS);
    if (this.remainingS <= 0) this.fire();
  }

  get expired(): boolean {
    return this.fired;
  }

  private fire(): void {
    if (!this.fired) {
      this.fired = true;
      this.onExpire();
    }
  }
}

export interface HudState {
  editorReadOnly: boolean;
  submitEnabled: boolean;
  remainingS: number | null;
  estimate: WireScore | null;
  deadlineBanner: boolean;
}

export class GameHud {
  state: HudState = {
    editorReadOnly: false,
    submitEnabled: true,
    remainingS: null,
    estimate: null,
    deadlineBanner: false,
  };
  private countdown: Countdown | null = null;

  start(remainingS: number): void {
    this.state.remainingS = remainingS;
    this.countdown = new Countdown(remainingS, () => this.expire());
  }

  tick(dtS: number): void {
    if (this.countdown === null) return;
    this.countdown.tick(dtS);
    this.state.remainingS = this.countdown.remainingS;
  }

  syncFromServer(remainingS: number, estimate: WireScore | null): void {
    this.state.estimate = estimate;
    if (this.countdown === null) {
      this.start(remainingS);
    } else {
      this.countdown.setRemaining(remainingS);
      this.state.remainingS = this.countdown.remainingS;
    }
  }

  /** A 410 from the server is the authoritative deadline signal. */
  deadlineFromServer(): void {
    this.state.deadlineBanner = true;
    this.expire();
  }

  private expire(): void {
    this.state.editorReadOnly = true;
    this.state.submitEnabled = true;
    this.state.remainingS = 0;
  }
}
