#!/usr/bin/env node
/** Command-line entry: export one video + query to a .f2ce container. */

import { parseArgs } from 'node:util';
import { pathToFileURL } from 'node:url';

import { ContainerError } from './container.js';
import { EncoderError } from './encoder.js';
import { exportContainer } from './export.js';
import { DecodeError } from './y4m.js';

const USAGE = `usage: f2ce-export --video PATH --question TEXT [--options TEXT]...
                   [--encoder ID] [--fps RATE] [--label TEXT] --out PATH

Samples the video at 1 FPS, embeds frames and the query text, and writes
a .f2ce (or .f2ce.json) embedding container. --options may repeat, one
candidate answer per flag. --fps gives the source rate for .ppm frame
directories; .y4m files carry their own.`;

export function main(argv: string[]): number {
  let parsed;
  try {
    parsed = parseArgs({
      args: argv,
      options: {
        video: { type: 'string' },
        question: { type: 'string' },
        options: { type: 'string', multiple: true },
        encoder: { type: 'string', default: 'mock' },
        fps: { type: 'string' },
        label: { type: 'string' },
        out: { type: 'string' },
        help: { type: 'boolean', default: false },
      },
      strict: true,
    });
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    console.error(USAGE);
    return 2;
  }
  const args = parsed.values;
  if (args.help) {
    console.log(USAGE);
    return 0;
  }
  for (const required of ['video', 'question', 'out'] as const) {
    if (args[required] === undefined) {
      console.error(`error: --${required} is required`);
      console.error(USAGE);
      return 2;
    }
  }
  let sourceFps: number | undefined;
  if (args.fps !== undefined) {
    sourceFps = Number(args.fps);
    if (!(Number.isFinite(sourceFps) && sourceFps > 0)) {
      console.error(`error: --fps must be a positive number, got ${args.fps}`);
      return 2;
    }
  }

  try {
    const result = exportContainer(
      args.video!,
      args.question!,
      args.options ?? [],
      args.encoder!,
      args.out!,
      { sourceFps, label: args.label },
    );
    console.log(`wrote ${result.outPath}: ${result.n} frames x ${result.d} dims`);
    return 0;
  } catch (err) {
    if (
      err instanceof DecodeError ||
      err instanceof EncoderError ||
      err instanceof ContainerError ||
      (err instanceof Error && 'code' in err)
    ) {
      console.error(`error: ${(err as Error).message}`);
      return 1;
    }
    throw err;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === pathToFileURL(process.argv[1]).href;
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
