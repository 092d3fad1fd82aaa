import { existsSync, mkdtempSync, readFileSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';

import { describe, expect, it } from 'vitest';

import { parseArgs, runCli } from '../src/cli.js';

const FIXTURES = join(__dirname, 'fixtures');

describe('parseArgs', () => {
    it('collects flags and defaults', () => {
        const args = parseArgs(['fig2', '--in', 'a.csv', '--out', 'b.svg']);
        expect(args).toMatchObject({
            figureId: 'fig2', input: 'a.csv', output: 'b.svg', raster: false,
        });
    });

    it('switches to raster for png outputs or the explicit flag', () => {
        expect(parseArgs(['fig3', '--in', 'a.csv', '--out', 'b.png']).raster)
            .toBe(true);
        expect(parseArgs(['fig3', '--in', 'a.csv', '--out', 'b.svg',
            '--raster']).raster).toBe(true);
    });

    it('rejects missing or malformed flags', () => {
        expect(() => parseArgs([])).toThrow(/usage/);
        expect(() => parseArgs(['fig2', '--in', 'a.csv'])).toThrow(/--out/);
        expect(() => parseArgs(['fig2', '--wat'])).toThrow(/unknown flag/);
        expect(() => parseArgs(['fig2', '--in', 'a.csv', '--out', 'b.svg',
            '--width', 'x'])).toThrow(/positive/);
    });
});

describe('runCli', () => {
    it('writes an SVG for a figure CSV', async () => {
        const dir = mkdtempSync(join(tmpdir(), 'hbfplot-'));
        const out = join(dir, 'fig2.svg');
        await runCli(['fig2', '--in', join(FIXTURES, 'fig2.csv'),
            '--out', out]);
        expect(existsSync(out)).toBe(true);
        const svg = readFileSync(out, 'utf8');
        expect(svg.startsWith('<svg')).toBe(true);
    });

    it('writes a PNG when asked for raster output', async () => {
        const dir = mkdtempSync(join(tmpdir(), 'hbfplot-'));
        const out = join(dir, 'fig5.png');
        await runCli(['fig5', '--in', join(FIXTURES, 'fig5.csv'),
            '--out', out]);
        const header = readFileSync(out).subarray(0, 8);
        expect([...header]).toEqual([0x89, 0x50, 0x4e, 0x47,
            0x0d, 0x0a, 0x1a, 0x0a]);
    });

    it('fails with the missing column named', async () => {
        const dir = mkdtempSync(join(tmpdir(), 'hbfplot-'));
        await expect(runCli(['fig2', '--in', join(FIXTURES, 'fig3.csv'),
            '--out', join(dir, 'x.svg')]))
            .rejects.toThrow('ratio_M4 not found');
    });

    it('fails on unknown figures and unreadable files', async () => {
        const dir = mkdtempSync(join(tmpdir(), 'hbfplot-'));
        await expect(runCli(['fig7', '--in', 'x.csv',
            '--out', join(dir, 'x.svg')])).rejects.toThrow(/unknown figure/);
        await expect(runCli(['fig2', '--in', join(dir, 'nope.csv'),
            '--out', join(dir, 'x.svg')])).rejects.toThrow();
    });
});
