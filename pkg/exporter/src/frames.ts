/** Decoded video frames and fixed-rate temporal sampling. */

export interface RgbFrame {
  width: number;
  height: number;
  /** Interleaved RGB, 3 bytes per pixel, row-major. */
  pixels: Uint8ClampedArray;
}

function clamp8(x: number): number {
  return x < 0 ? 0 : x > 255 ? 255 : x;
}

/**
 * Convert planar YCbCr (BT.601 limited range) to an interleaved RGB frame.
 * Chroma planes may be subsampled; nearest-neighbor upsampling.
 */
export function ycbcrToRgb(
  y: Uint8Array,
  cb: Uint8Array,
  cr: Uint8Array,
  width: number,
  height: number,
  chromaWidth: number,
  chromaHeight: number,
): RgbFrame {
  const pixels = new Uint8ClampedArray(width * height * 3);
  const xStep = width / Math.max(1, chromaWidth);
  const yStep = height / Math.max(1, chromaHeight);
  for (let row = 0; row < height; row++) {
    const cRow = Math.min(chromaHeight - 1, Math.floor(row / yStep));
    for (let col = 0; col < width; col++) {
      const cCol = Math.min(chromaWidth - 1, Math.floor(col / xStep));
      const ci = cRow * chromaWidth + cCol;
      const c = 298 * (y[row * width + col] - 16);
      const d = (cb.length ? cb[ci] : 128) - 128;
      const e = (cr.length ? cr[ci] : 128) - 128;
      const o = (row * width + col) * 3;
      pixels[o] = clamp8((c + 409 * e + 128) >> 8);
      pixels[o + 1] = clamp8((c - 100 * d - 208 * e + 128) >> 8);
      pixels[o + 2] = clamp8((c + 516 * d + 128) >> 8);
    }
  }
  return { width, height, pixels };
}

/**
 * Pick one frame per second of source time: the first frame of each whole
 * second. A 10-second video yields 10 frames; anything shorter than one
 * second yields its first frame.
 */
export function sampleOneFps(
  frames: RgbFrame[],
  fpsNum: number,
  fpsDen: number,
): RgbFrame[] {
  if (frames.length === 0) {
    return [];
  }
  const seconds = Math.floor((frames.length * fpsDen) / fpsNum);
  if (seconds < 1) {
    return [frames[0]];
  }
  const out: RgbFrame[] = [];
  for (let i = 0; i < seconds; i++) {
    const idx = Math.min(frames.length - 1, Math.floor((i * fpsNum) / fpsDen));
    out.push(frames[idx]);
  }
  return out;
}
