/**
 * Embedding container serialization.
 *
 * Binary layout (".f2ce", all little-endian): magic "F2CE", version u32
 * (=1), N u32, D u32, fps f32, src_height u32, src_width u32, has_query
 * u8, label_len u16 + UTF-8 label, then D float32 query values if
 * present, then N*D float32 frame embeddings row-major. Paths ending in
 * ".f2ce.json" get a JSON mirror of the same fields.
 */

import { writeFileSync } from 'node:fs';

export const MAGIC = 'F2CE';
export const VERSION = 1;
const HEADER_SIZE = 31;

export class ContainerError extends Error {}

export interface EmbeddingContainer {
  fps: number;
  srcHeight: number;
  srcWidth: number;
  label: string;
  query: Float32Array | null;
  /** One L2-normalized row per sampled frame, all the same length. */
  frames: Float32Array[];
}

function norm(vector: Float32Array): number {
  let sum = 0;
  for (let i = 0; i < vector.length; i++) {
    sum += vector[i] * vector[i];
  }
  return Math.sqrt(sum);
}

function checkRow(vector: Float32Array, d: number, what: string): void {
  if (vector.length !== d) {
    throw new ContainerError(`${what} has ${vector.length} dims, expected ${d}`);
  }
  for (let i = 0; i < vector.length; i++) {
    if (!Number.isFinite(vector[i])) {
      throw new ContainerError(`${what} contains a non-finite value`);
    }
  }
  const magnitude = norm(vector);
  if (Math.abs(magnitude - 1) > 1e-3) {
    throw new ContainerError(`${what} is not unit norm (|v| = ${magnitude})`);
  }
}

/** Enforce the invariants the selection engine checks at ingestion. */
export function validateContainer(container: EmbeddingContainer): void {
  const { fps, srcHeight, srcWidth, frames, query } = container;
  if (frames.length === 0) {
    throw new ContainerError('container has no frame embeddings');
  }
  const d = frames[0].length;
  if (d < 1) {
    throw new ContainerError('embedding dimension must be >= 1');
  }
  frames.forEach((row, i) => checkRow(row, d, `frame ${i}`));
  if (query !== null) {
    checkRow(query, d, 'query');
  }
  if (!(Number.isFinite(fps) && fps > 0)) {
    throw new ContainerError(`fps must be positive, got ${fps}`);
  }
  if (!Number.isInteger(srcHeight) || !Number.isInteger(srcWidth) ||
      srcHeight < 1 || srcWidth < 1) {
    throw new ContainerError(`bad source dimensions ${srcHeight}x${srcWidth}`);
  }
}

export function encodeBinary(container: EmbeddingContainer): Buffer {
  validateContainer(container);
  const { frames, query } = container;
  const n = frames.length;
  const d = frames[0].length;
  const label = Buffer.from(container.label, 'utf-8');
  if (label.length > 0xffff) {
    throw new ContainerError('label exceeds 65535 UTF-8 bytes');
  }
  const size =
    HEADER_SIZE + label.length + (query === null ? 0 : 4 * d) + 4 * n * d;
  const out = Buffer.alloc(size);
  out.write(MAGIC, 0, 'ascii');
  out.writeUInt32LE(VERSION, 4);
  out.writeUInt32LE(n, 8);
  out.writeUInt32LE(d, 12);
  out.writeFloatLE(container.fps, 16);
  out.writeUInt32LE(container.srcHeight, 20);
  out.writeUInt32LE(container.srcWidth, 24);
  out.writeUInt8(query === null ? 0 : 1, 28);
  out.writeUInt16LE(label.length, 29);
  label.copy(out, HEADER_SIZE);
  let off = HEADER_SIZE + label.length;
  if (query !== null) {
    for (let i = 0; i < d; i++) {
      out.writeFloatLE(query[i], off + 4 * i);
    }
    off += 4 * d;
  }
  for (const row of frames) {
    for (let i = 0; i < d; i++) {
      out.writeFloatLE(row[i], off + 4 * i);
    }
    off += 4 * d;
  }
  return out;
}

/** Inverse of encodeBinary, used for round-trip checks. */
export function decodeBinary(data: Buffer): EmbeddingContainer {
  if (data.length < 4 || data.toString('ascii', 0, 4) !== MAGIC) {
    throw new ContainerError('bad container magic');
  }
  if (data.length < HEADER_SIZE) {
    throw new ContainerError('truncated container header');
  }
  const version = data.readUInt32LE(4);
  if (version !== VERSION) {
    throw new ContainerError(`unsupported container version ${version}`);
  }
  const n = data.readUInt32LE(8);
  const d = data.readUInt32LE(12);
  const fps = data.readFloatLE(16);
  const srcHeight = data.readUInt32LE(20);
  const srcWidth = data.readUInt32LE(24);
  const hasQuery = data.readUInt8(28);
  const labelLen = data.readUInt16LE(29);
  let off = HEADER_SIZE;
  const label = data.toString('utf-8', off, off + labelLen);
  off += labelLen;
  let query: Float32Array | null = null;
  if (hasQuery) {
    query = new Float32Array(d);
    for (let i = 0; i < d; i++) {
      query[i] = data.readFloatLE(off + 4 * i);
    }
    off += 4 * d;
  }
  if (data.length < off + 4 * n * d) {
    throw new ContainerError('truncated container payload');
  }
  const frames: Float32Array[] = [];
  for (let r = 0; r < n; r++) {
    const row = new Float32Array(d);
    for (let i = 0; i < d; i++) {
      row[i] = data.readFloatLE(off + 4 * i);
    }
    frames.push(row);
    off += 4 * d;
  }
  return { fps, srcHeight, srcWidth, label, query, frames };
}

export function encodeJson(container: EmbeddingContainer): string {
  validateContainer(container);
  const doc = {
    version: VERSION,
    fps: container.fps,
    src_height: container.srcHeight,
    src_width: container.srcWidth,
    label: container.label,
    query: container.query === null ? null : Array.from(container.query),
    frames: container.frames.map((row) => Array.from(row)),
  };
  return JSON.stringify(doc, null, 1) + '\n';
}

export function writeContainer(
  container: EmbeddingContainer,
  path: string,
): void {
  if (path.endsWith('.f2ce.json')) {
    writeFileSync(path, encodeJson(container));
  } else {
    writeFileSync(path, encodeBinary(container));
  }
}
