/** Minimal YUV4MPEG2 (.y4m) decoder: header, FRAME markers, planar data. */

import { RgbFrame, ycbcrToRgb } from './frames.js';

export class DecodeError extends Error {}

export interface DecodedVideo {
  width: number;
  height: number;
  fpsNum: number;
  fpsDen: number;
  frames: RgbFrame[];
}

interface ChromaLayout {
  width: (w: number) => number;
  height: (h: number) => number;
}

// 420 variants differ only in siting, which nearest-neighbor ignores
const CHROMA: Record<string, ChromaLayout> = {
  '420': { width: (w) => (w + 1) >> 1, height: (h) => (h + 1) >> 1 },
  '420jpeg': { width: (w) => (w + 1) >> 1, height: (h) => (h + 1) >> 1 },
  '420mpeg2': { width: (w) => (w + 1) >> 1, height: (h) => (h + 1) >> 1 },
  '420paldv': { width: (w) => (w + 1) >> 1, height: (h) => (h + 1) >> 1 },
  '422': { width: (w) => (w + 1) >> 1, height: (h) => h },
  '444': { width: (w) => w, height: (h) => h },
  'mono': { width: () => 0, height: () => 0 },
};

function lineEnd(data: Uint8Array, start: number): number {
  const nl = data.indexOf(0x0a, start);
  if (nl < 0) {
    throw new DecodeError('unterminated y4m header line');
  }
  return nl;
}

export function parseY4m(data: Uint8Array): DecodedVideo {
  const headerEnd = data.length >= 9 ? lineEnd(data, 0) : -1;
  const header =
    headerEnd > 0 ? Buffer.from(data.subarray(0, headerEnd)).toString('ascii') : '';
  const params = header.split(' ');
  if (params[0] !== 'YUV4MPEG2') {
    throw new DecodeError('not a YUV4MPEG2 stream');
  }

  let width = 0;
  let height = 0;
  let fpsNum = 25;
  let fpsDen = 1;
  let colorspace = '420';
  for (const param of params.slice(1)) {
    const tag = param[0];
    const value = param.slice(1);
    if (tag === 'W') {
      width = parseInt(value, 10);
    } else if (tag === 'H') {
      height = parseInt(value, 10);
    } else if (tag === 'F') {
      const [num, den] = value.split(':');
      fpsNum = parseInt(num, 10);
      fpsDen = parseInt(den, 10);
    } else if (tag === 'C') {
      colorspace = value;
    }
    // I (interlacing) and A (aspect) do not affect frame extraction
  }
  if (!(width > 0) || !(height > 0)) {
    throw new DecodeError(`bad y4m dimensions ${width}x${height}`);
  }
  if (!(fpsNum > 0) || !(fpsDen > 0)) {
    throw new DecodeError(`bad y4m frame rate ${fpsNum}:${fpsDen}`);
  }
  const layout = CHROMA[colorspace];
  if (layout === undefined) {
    throw new DecodeError(`unsupported y4m colorspace C${colorspace}`);
  }

  const chromaWidth = layout.width(width);
  const chromaHeight = layout.height(height);
  const ySize = width * height;
  const cSize = chromaWidth * chromaHeight;
  const frames: RgbFrame[] = [];
  let off = headerEnd + 1;
  while (off < data.length) {
    const markerEnd = lineEnd(data, off);
    const marker = Buffer.from(data.subarray(off, markerEnd)).toString('ascii');
    if (!marker.startsWith('FRAME')) {
      throw new DecodeError(
        `expected FRAME marker, got ${JSON.stringify(marker.slice(0, 16))}`,
      );
    }
    off = markerEnd + 1;
    if (off + ySize + 2 * cSize > data.length) {
      throw new DecodeError(`truncated frame ${frames.length}`);
    }
    const y = data.subarray(off, off + ySize);
    const cb = data.subarray(off + ySize, off + ySize + cSize);
    const cr = data.subarray(off + ySize + cSize, off + ySize + 2 * cSize);
    frames.push(ycbcrToRgb(y, cb, cr, width, height, chromaWidth, chromaHeight));
    off += ySize + 2 * cSize;
  }
  if (frames.length === 0) {
    throw new DecodeError('y4m stream contains no frames');
  }
  return { width, height, fpsNum, fpsDen, frames };
}
