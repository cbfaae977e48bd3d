import { describe, expect, it } from 'vitest';

import { EncoderError, resolveEncoder } from '../src/encoder';
import { solidFrame } from './fixtures';

function cosine(a: Float32Array, b: Float32Array): number {
  let dot = 0;
  for (let i = 0; i < a.length; i++) {
    dot += a[i] * b[i];
  }
  return dot; // embeddings are unit norm
}

function magnitude(v: Float32Array): number {
  return Math.sqrt(cosine(v, v));
}

describe('resolveEncoder', () => {
  it('resolves mock with default and explicit dimensions', () => {
    expect(resolveEncoder('mock').dim).toBe(64);
    expect(resolveEncoder('mock:16').dim).toBe(16);
  });

  it('rejects unknown ids and bad dimensions', () => {
    expect(() => resolveEncoder('clip-vit-b32')).toThrow(EncoderError);
    expect(() => resolveEncoder('mock:1')).toThrow(EncoderError);
    expect(() => resolveEncoder('mock:x')).toThrow(EncoderError);
  });
});

describe('mock encoder', () => {
  const enc = resolveEncoder('mock');
  const gray = solidFrame(8, 8, [128, 128, 128]);
  const red = solidFrame(8, 8, [250, 10, 10]);

  it('emits unit-norm vectors for images and text', () => {
    expect(Math.abs(magnitude(enc.embedImage(gray)) - 1)).toBeLessThan(1e-6);
    expect(Math.abs(magnitude(enc.embedText('what is shown?')) - 1)).toBeLessThan(
      1e-6,
    );
  });

  it('is deterministic across calls and across instances', () => {
    const a = enc.embedImage(red);
    const b = enc.embedImage(red);
    const c = resolveEncoder('mock').embedImage(red);
    expect(Array.from(a)).toEqual(Array.from(b));
    expect(Array.from(a)).toEqual(Array.from(c));
  });

  it('repeated frames are self-similar within 1e-4', () => {
    const first = enc.embedImage(gray);
    const again = enc.embedImage(solidFrame(8, 8, [128, 128, 128]));
    expect(cosine(first, again)).toBeGreaterThanOrEqual(1 - 1e-4);
  });

  it('distinguishes different frames and different texts', () => {
    expect(cosine(enc.embedImage(gray), enc.embedImage(red))).toBeLessThan(
      1 - 1e-6,
    );
    const q1 = enc.embedText('what color is the car?');
    const q2 = enc.embedText('when does the dog appear?');
    expect(cosine(q1, q2)).toBeLessThan(1 - 1e-6);
  });

  it('keeps image and text embeddings in one space', () => {
    expect(enc.embedImage(gray)).toHaveLength(enc.dim);
    expect(enc.embedText('anything')).toHaveLength(enc.dim);
  });

  it('embeds degenerate text without failing', () => {
    const v = enc.embedText('???');
    expect(Math.abs(magnitude(v) - 1)).toBeLessThan(1e-6);
  });
});
