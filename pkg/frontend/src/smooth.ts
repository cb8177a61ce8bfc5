/** Trailing moving average with an expanding head, so the output has the
 * same length as the input. window = 1 is the identity; a window of equal
 * values passes through bit-exactly. Never mutates its input. */

export function movingAverage(values: readonly number[], window: number): number[] {
  if (!Number.isInteger(window) || window < 1) {
    throw new Error(`window must be an integer >= 1, got ${window}`);
  }
  if (window === 1) return values.slice();
  const out = new Array<number>(values.length);
  for (let i = 0; i < values.length; i++) {
    const start = Math.max(0, i - window + 1);
    let lo = values[start];
    let hi = values[start];
    let sum = 0;
    for (let j = start; j <= i; j++) {
      sum += values[j];
      if (values[j] < lo) lo = values[j];
      if (values[j] > hi) hi = values[j];
    }
    // constant stretches stay exactly constant
    out[i] = lo === hi ? lo : sum / (i - start + 1);
  }
  return out;
}
