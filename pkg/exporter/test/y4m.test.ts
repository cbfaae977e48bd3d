import { describe, expect, it } from 'vitest';

import { DecodeError, parseY4m } from '../src/y4m';
import { makeY4m } from './fixtures';

describe('parseY4m', () => {
  it('reads dimensions, rate, and frame count from a 420 stream', () => {
    const video = parseY4m(
      makeY4m({ width: 4, height: 4, fpsNum: 30, fpsDen: 1, lumas: [16, 235] }),
    );
    expect(video.width).toBe(4);
    expect(video.height).toBe(4);
    expect(video.fpsNum).toBe(30);
    expect(video.fpsDen).toBe(1);
    expect(video.frames).toHaveLength(2);
  });

  it('maps limited-range luma extremes to black and white', () => {
    const video = parseY4m(makeY4m({ width: 2, height: 2, lumas: [16, 235] }));
    expect(Array.from(video.frames[0].pixels)).toEqual(Array(12).fill(0));
    expect(Array.from(video.frames[1].pixels)).toEqual(Array(12).fill(255));
  });

  it('decodes a solid 444 red frame', () => {
    // BT.601: pure red is Y=81, Cb=90, Cr=240
    const video = parseY4m(
      makeY4m({ width: 2, height: 1, colorspace: '444', lumas: [81], cb: 90, cr: 240 }),
    );
    const [r, g, b] = video.frames[0].pixels;
    expect(r).toBeGreaterThan(245);
    expect(g).toBeLessThan(10);
    expect(b).toBeLessThan(10);
  });

  it('treats mono streams as grayscale', () => {
    const video = parseY4m(
      makeY4m({ width: 3, height: 2, colorspace: 'mono', lumas: [126] }),
    );
    const px = video.frames[0].pixels;
    expect(px[0]).toBe(px[1]);
    expect(px[1]).toBe(px[2]);
  });

  it('handles odd dimensions with 420 chroma rounding up', () => {
    const video = parseY4m(makeY4m({ width: 3, height: 3, lumas: [100, 100, 100] }));
    expect(video.frames).toHaveLength(3);
    expect(video.frames[0].pixels).toHaveLength(27);
  });

  it('defaults the frame rate to 25:1 when F is absent', () => {
    const video = parseY4m(
      makeY4m({ width: 2, height: 2, lumas: [50], omitRate: true }),
    );
    expect(video.fpsNum).toBe(25);
    expect(video.fpsDen).toBe(1);
  });

  it('rejects non-y4m data, bad colorspaces, and truncation', () => {
    expect(() => parseY4m(Buffer.from('RIFFxxxx'))).toThrow(DecodeError);
    const c411 = Buffer.from('YUV4MPEG2 W4 H4 F30:1 C411\nFRAME\n', 'ascii');
    expect(() => parseY4m(c411)).toThrow(/colorspace/);

    const whole = makeY4m({ width: 4, height: 4, lumas: [10, 20] });
    expect(() => parseY4m(whole.subarray(0, whole.length - 3))).toThrow(
      /truncated/,
    );

    const headerOnly = Buffer.from('YUV4MPEG2 W4 H4 F30:1\n', 'ascii');
    expect(() => parseY4m(headerOnly)).toThrow(/no frames/);
  });
});
