import { spawnSync } from 'node:child_process';
import { mkdtempSync, writeFileSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';

import { beforeAll, describe, expect, it } from 'vitest';

import { exportContainer } from '../src/export';
import { makeY4m } from './fixtures';

const PYTHON = 'python3';
let containerPath: string;

beforeAll(() => {
  const dir = mkdtempSync(join(tmpdir(), 'f2ce-engine-'));
  const videoPath = join(dir, 'scene.y4m');
  writeFileSync(
    videoPath,
    makeY4m({
      width: 64,
      height: 48,
      fpsNum: 5,
      fpsDen: 1,
      frameCount: 100, // 20 seconds -> 20 sampled frames
      paint: (f, x, y) => 16 + ((f * 11 + x * 2 + y * 5) % 220),
    }),
  );
  containerPath = join(dir, 'scene.f2ce');
  exportContainer(
    videoPath,
    'when does the pattern shift?',
    ['early', 'late'],
    'mock:32',
    containerPath,
  );
});

describe('selection engine integration', () => {
  it('exported containers pass the engine ingestion validation', () => {
    const probe = [
      'import sys',
      'from keyclips import read_container',
      'from keyclips.model import validate_sequence',
      'seq, query = read_container(sys.argv[1])',
      'validate_sequence(seq)',
      'assert query is not None',
      'print(seq.n, seq.d)',
    ].join('\n');
    const proc = spawnSync(PYTHON, ['-c', probe, containerPath], {
      encoding: 'utf-8',
    });
    expect(proc.error).toBeUndefined();
    expect(proc.status, proc.stderr).toBe(0);
    expect(proc.stdout.trim()).toBe('20 32');
  });

  it('the engine plans clips from an exported container end to end', () => {
    const proc = spawnSync(
      PYTHON,
      ['-m', 'keyclips', 'select', containerPath, '--k', '4'],
      { encoding: 'utf-8' },
    );
    expect(proc.error).toBeUndefined();
    expect(proc.status, proc.stderr).toBe(0);
    const plan = JSON.parse(proc.stdout);
    expect(plan.clips.length).toBeGreaterThan(0);
    expect(plan.total_tokens).toBeLessThanOrEqual(plan.budget_tokens);
    expect(plan.label).toBe('scene.y4m');
  });
}, 60_000);
