/**
 * Export pipeline: decode video, sample at 1 FPS, embed frames and query,
 * write the embedding container the selection engine consumes.
 */

import { spawnSync } from 'node:child_process';
import { readFileSync, readdirSync, statSync } from 'node:fs';
import { basename, join } from 'node:path';

import { EmbeddingContainer, writeContainer } from './container.js';
import { FrameEncoder, resolveEncoder } from './encoder.js';
import { RgbFrame, sampleOneFps } from './frames.js';
import { parsePpm } from './ppm.js';
import { DecodeError, DecodedVideo, parseY4m } from './y4m.js';

export interface ExportOptions {
  /** Source frame rate for image-sequence inputs (default 1). */
  sourceFps?: number;
  /** Container label (default: input basename). */
  label?: string;
}

export interface ExportResult {
  n: number;
  d: number;
  outPath: string;
}

/** Question first, then each candidate option on its own line. */
export function buildQueryText(question: string, options: string[]): string {
  return options.length === 0 ? question : question + '\n' + options.join('\n');
}

function decodePpmDirectory(dir: string, sourceFps: number): DecodedVideo {
  const names = readdirSync(dir).filter((n) => n.endsWith('.ppm')).sort();
  if (names.length === 0) {
    throw new DecodeError(`no .ppm frames in ${dir}`);
  }
  const frames = names.map((n) => parsePpm(readFileSync(join(dir, n))));
  const { width, height } = frames[0];
  frames.forEach((f, i) => {
    if (f.width !== width || f.height !== height) {
      throw new DecodeError(
        `frame ${names[i]} is ${f.width}x${f.height}, expected ${width}x${height}`,
      );
    }
  });
  // sourceFps may be fractional; express as a ratio over a fixed denominator
  const den = 1000;
  return {
    width,
    height,
    fpsNum: Math.round(sourceFps * den),
    fpsDen: den,
    frames,
  };
}

function decodeViaFfmpeg(videoPath: string): DecodedVideo {
  const proc = spawnSync(
    'ffmpeg',
    ['-v', 'error', '-i', videoPath, '-f', 'yuv4mpegpipe', '-pix_fmt', 'yuv420p', '-'],
    { maxBuffer: 1 << 30 },
  );
  if (proc.error !== undefined) {
    throw new DecodeError(
      `cannot decode ${videoPath}: ffmpeg unavailable ` +
        '(native support covers .y4m files and .ppm directories)',
    );
  }
  if (proc.status !== 0) {
    throw new DecodeError(
      `ffmpeg failed on ${videoPath}: ${proc.stderr.toString().trim()}`,
    );
  }
  return parseY4m(proc.stdout);
}

export function decodeVideo(videoPath: string, options: ExportOptions = {}): DecodedVideo {
  if (statSync(videoPath).isDirectory()) {
    return decodePpmDirectory(videoPath, options.sourceFps ?? 1);
  }
  if (videoPath.endsWith('.y4m')) {
    return parseY4m(readFileSync(videoPath));
  }
  return decodeViaFfmpeg(videoPath);
}

export function buildContainer(
  video: DecodedVideo,
  question: string,
  answerOptions: string[],
  encoder: FrameEncoder,
  label: string,
): EmbeddingContainer {
  const sampled = sampleOneFps(video.frames, video.fpsNum, video.fpsDen);
  const frames = sampled.map((frame: RgbFrame) => encoder.embedImage(frame));
  const query = encoder.embedText(buildQueryText(question, answerOptions));
  return {
    fps: 1,
    srcHeight: video.height,
    srcWidth: video.width,
    label,
    query,
    frames,
  };
}

export function exportContainer(
  videoPath: string,
  question: string,
  answerOptions: string[],
  encoderId: string,
  outPath: string,
  options: ExportOptions = {},
): ExportResult {
  const encoder = resolveEncoder(encoderId);
  const video = decodeVideo(videoPath, options);
  const container = buildContainer(
    video,
    question,
    answerOptions,
    encoder,
    options.label ?? basename(videoPath),
  );
  writeContainer(container, outPath);
  return { n: container.frames.length, d: encoder.dim, outPath };
}
