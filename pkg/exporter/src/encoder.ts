/**
 * Pluggable frame/text encoders, resolved by identifier.
 *
 * The built-in "mock" encoder is a deterministic random projection over
 * cheap image and text features. It is not a semantic model; it exists so
 * the export pipeline, container format, and engine integration can be
 * exercised end to end without model weights. Identical inputs map to
 * identical vectors, and all outputs are L2-normalized.
 */

import { RgbFrame } from './frames.js';

export class EncoderError extends Error {}

export interface FrameEncoder {
  readonly id: string;
  readonly dim: number;
  embedImage(frame: RgbFrame): Float32Array;
  embedText(text: string): Float32Array;
}

const GRID = 4; // image features: GRID x GRID cells x RGB means
const FEATURES = GRID * GRID * 3 + 1; // + constant bias so norms never vanish
const DEFAULT_DIM = 64;

function fnv1a(text: string): number {
  let hash = 0x811c9dc5;
  for (let i = 0; i < text.length; i++) {
    hash ^= text.charCodeAt(i);
    hash = Math.imul(hash, 0x01000193) >>> 0;
  }
  return hash >>> 0;
}

function mulberry32(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

function projection(seed: number, dim: number): Float64Array {
  const rand = mulberry32(seed);
  const matrix = new Float64Array(dim * FEATURES);
  for (let i = 0; i < matrix.length; i++) {
    matrix[i] = 2 * rand() - 1;
  }
  return matrix;
}

function project(matrix: Float64Array, features: Float64Array, dim: number): Float32Array {
  const out = new Float64Array(dim);
  for (let r = 0; r < dim; r++) {
    let sum = 0;
    for (let c = 0; c < FEATURES; c++) {
      sum += matrix[r * FEATURES + c] * features[c];
    }
    out[r] = sum;
  }
  let normSq = 0;
  for (let r = 0; r < dim; r++) {
    normSq += out[r] * out[r];
  }
  const scale = 1 / Math.sqrt(normSq);
  const result = new Float32Array(dim);
  for (let r = 0; r < dim; r++) {
    result[r] = out[r] * scale;
  }
  return result;
}

function imageFeatures(frame: RgbFrame): Float64Array {
  const features = new Float64Array(FEATURES);
  const { width, height, pixels } = frame;
  const counts = new Float64Array(GRID * GRID);
  for (let row = 0; row < height; row++) {
    const cellRow = Math.min(GRID - 1, Math.floor((row * GRID) / height));
    for (let col = 0; col < width; col++) {
      const cellCol = Math.min(GRID - 1, Math.floor((col * GRID) / width));
      const cell = cellRow * GRID + cellCol;
      const o = (row * width + col) * 3;
      features[cell * 3] += pixels[o] / 255;
      features[cell * 3 + 1] += pixels[o + 1] / 255;
      features[cell * 3 + 2] += pixels[o + 2] / 255;
      counts[cell]++;
    }
  }
  for (let cell = 0; cell < GRID * GRID; cell++) {
    if (counts[cell] > 0) {
      features[cell * 3] /= counts[cell];
      features[cell * 3 + 1] /= counts[cell];
      features[cell * 3 + 2] /= counts[cell];
    }
  }
  features[FEATURES - 1] = 1;
  return features;
}

function textFeatures(text: string): Float64Array {
  const features = new Float64Array(FEATURES);
  const tokens = text.toLowerCase().split(/[^a-z0-9]+/).filter((t) => t.length > 0);
  for (const token of tokens) {
    features[fnv1a(token) % (FEATURES - 1)] += 1;
  }
  features[FEATURES - 1] = 1;
  return features;
}

class MockEncoder implements FrameEncoder {
  readonly id: string;
  readonly dim: number;
  private readonly imageProjection: Float64Array;
  private readonly textProjection: Float64Array;

  constructor(id: string, dim: number) {
    this.id = id;
    this.dim = dim;
    this.imageProjection = projection(fnv1a(id + '|image'), dim);
    this.textProjection = projection(fnv1a(id + '|text'), dim);
  }

  embedImage(frame: RgbFrame): Float32Array {
    return project(this.imageProjection, imageFeatures(frame), this.dim);
  }

  embedText(text: string): Float32Array {
    return project(this.textProjection, textFeatures(text), this.dim);
  }
}

/** Resolve an encoder id like "mock" or "mock:128". */
export function resolveEncoder(id: string): FrameEncoder {
  const [name, arg] = id.split(':', 2);
  if (name === 'mock') {
    const dim = arg === undefined ? DEFAULT_DIM : parseInt(arg, 10);
    if (!Number.isInteger(dim) || dim < 2) {
      throw new EncoderError(`bad mock encoder dimension ${JSON.stringify(arg)}`);
    }
    return new MockEncoder(id, dim);
  }
  throw new EncoderError(`unknown encoder ${JSON.stringify(id)} (available: mock[:dim])`);
}
