/** Looping playback: advances the phase by elapsed time over the loop period.
 *
 * The stepper is pure so tests can drive frames deterministically; the app
 * hooks it to a wall-clock interval timer.
 */

export class Player {
  periodMs: number;

  constructor(periodMs = 2000) {
    this.periodMs = periodMs;
  }

  /** Next phase after dtMs of playback; reaches 1 before wrapping so the
   * cycle-end sample is visited. Accumulated float drift at the cycle
   * boundary is snapped to exactly 1. */
  step(phase: number, dtMs: number): number {
    let next = phase + dtMs / this.periodMs;
    if (Math.abs(next - 1) < 1e-9) next = 1;
    while (next > 1) next -= 1;
    return next;
  }
}
