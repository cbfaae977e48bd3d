/** Handcrafted video buffers for decoder and export tests. */

import { RgbFrame } from '../src/frames';

export interface Y4mSpec {
  width: number;
  height: number;
  fpsNum?: number;
  fpsDen?: number;
  colorspace?: string;
  /** Solid chroma per frame; luma via paint or solid lumas. */
  lumas?: number[];
  paint?: (frame: number, x: number, y: number) => number;
  frameCount?: number;
  cb?: number;
  cr?: number;
  omitRate?: boolean;
}

export function makeY4m(spec: Y4mSpec): Buffer {
  const {
    width,
    height,
    fpsNum = 30,
    fpsDen = 1,
    colorspace = '420',
    cb = 128,
    cr = 128,
  } = spec;
  const frameCount = spec.frameCount ?? spec.lumas?.length ?? 1;
  const rate = spec.omitRate ? '' : ` F${fpsNum}:${fpsDen}`;
  const headerTail = colorspace === '420' ? '' : ` C${colorspace}`;
  const header = `YUV4MPEG2 W${width} H${height}${rate} Ip A1:1${headerTail}\n`;

  let cw: number;
  let ch: number;
  if (colorspace.startsWith('420')) {
    cw = (width + 1) >> 1;
    ch = (height + 1) >> 1;
  } else if (colorspace === '422') {
    cw = (width + 1) >> 1;
    ch = height;
  } else if (colorspace === '444') {
    cw = width;
    ch = height;
  } else {
    cw = 0;
    ch = 0;
  }

  const parts: Buffer[] = [Buffer.from(header, 'ascii')];
  for (let f = 0; f < frameCount; f++) {
    parts.push(Buffer.from('FRAME\n', 'ascii'));
    const y = Buffer.alloc(width * height);
    for (let row = 0; row < height; row++) {
      for (let col = 0; col < width; col++) {
        y[row * width + col] = spec.paint
          ? spec.paint(f, col, row)
          : spec.lumas?.[f] ?? 128;
      }
    }
    parts.push(y);
    if (cw > 0) {
      parts.push(Buffer.alloc(cw * ch, cb));
      parts.push(Buffer.alloc(cw * ch, cr));
    }
  }
  return Buffer.concat(parts);
}

export function makePpm(
  width: number,
  height: number,
  fill: [number, number, number],
  maxval = 255,
): Buffer {
  const header = Buffer.from(`P6\n# test frame\n${width} ${height}\n${maxval}\n`, 'ascii');
  const pixels = Buffer.alloc(width * height * 3);
  for (let i = 0; i < width * height; i++) {
    pixels[i * 3] = fill[0];
    pixels[i * 3 + 1] = fill[1];
    pixels[i * 3 + 2] = fill[2];
  }
  return Buffer.concat([header, pixels]);
}

export function solidFrame(
  width: number,
  height: number,
  rgb: [number, number, number],
): RgbFrame {
  const pixels = new Uint8ClampedArray(width * height * 3);
  for (let i = 0; i < width * height; i++) {
    pixels[i * 3] = rgb[0];
    pixels[i * 3 + 1] = rgb[1];
    pixels[i * 3 + 2] = rgb[2];
  }
  return { width, height, pixels };
}

export function markerFrame(mark: number): RgbFrame {
  return { width: 1, height: 1, pixels: new Uint8ClampedArray([mark % 256, 0, 0]) };
}

export function unitRow(d: number, seed: number): Float32Array {
  const raw = new Float64Array(d);
  let state = (seed * 2654435761) >>> 0 || 1;
  for (let i = 0; i < d; i++) {
    state = (Math.imul(state, 1664525) + 1013904223) >>> 0;
    raw[i] = state / 4294967296 - 0.5;
  }
  let normSq = 0;
  for (let i = 0; i < d; i++) {
    normSq += raw[i] * raw[i];
  }
  const out = new Float32Array(d);
  const scale = 1 / Math.sqrt(normSq);
  for (let i = 0; i < d; i++) {
    out[i] = raw[i] * scale;
  }
  return out;
}
