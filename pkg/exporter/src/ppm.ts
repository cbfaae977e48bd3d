/** Binary PPM (P6) decoder for image-sequence inputs. */

import { RgbFrame } from './frames.js';
import { DecodeError } from './y4m.js';

const WHITESPACE = new Set([0x20, 0x09, 0x0a, 0x0d, 0x0b, 0x0c]);

/** Skip whitespace and `#` comments, then parse one ASCII integer. */
function readToken(data: Uint8Array, off: number): [number, number] {
  while (off < data.length) {
    if (WHITESPACE.has(data[off])) {
      off++;
    } else if (data[off] === 0x23) {
      while (off < data.length && data[off] !== 0x0a) {
        off++;
      }
    } else {
      break;
    }
  }
  let end = off;
  while (end < data.length && !WHITESPACE.has(data[end])) {
    end++;
  }
  if (end === off) {
    throw new DecodeError('truncated ppm header');
  }
  const value = parseInt(Buffer.from(data.subarray(off, end)).toString('ascii'), 10);
  if (!Number.isFinite(value)) {
    throw new DecodeError('malformed ppm header token');
  }
  return [value, end];
}

export function parsePpm(data: Uint8Array): RgbFrame {
  if (data.length < 2 || data[0] !== 0x50 || data[1] !== 0x36) {
    throw new DecodeError('not a P6 ppm file');
  }
  let off = 2;
  let width: number, height: number, maxval: number;
  [width, off] = readToken(data, off);
  [height, off] = readToken(data, off);
  [maxval, off] = readToken(data, off);
  if (width < 1 || height < 1) {
    throw new DecodeError(`bad ppm dimensions ${width}x${height}`);
  }
  if (maxval < 1 || maxval > 255) {
    throw new DecodeError(`unsupported ppm maxval ${maxval} (8-bit only)`);
  }
  off++; // single whitespace byte separates header from pixel data
  const need = width * height * 3;
  if (off + need > data.length) {
    throw new DecodeError(
      `ppm pixel data truncated: need ${need}, have ${data.length - off}`,
    );
  }
  const pixels = new Uint8ClampedArray(data.subarray(off, off + need));
  if (maxval !== 255) {
    for (let i = 0; i < pixels.length; i++) {
      pixels[i] = Math.round((pixels[i] * 255) / maxval);
    }
  }
  return { width, height, pixels };
}
