/** Trailing-edge debouncer; repeated calls collapse into one after the delay. */

export class Debouncer {
  private handle: ReturnType<typeof setTimeout> | undefined;

  constructor(readonly delayMs = 500) {}

  schedule(op: () => void): void {
    if (this.handle !== undefined) clearTimeout(this.handle);
    this.handle = setTimeout(() => {
      this.handle = undefined;
      op();
    }, this.delayMs);
  }

  cancel(): void {
    if (this.handle !== undefined) {
      clearTimeout(this.handle);
      this.handle = undefined;
    }
  }

  get pending(): boolean {
    return this.handle !== undefined;
  }
}
