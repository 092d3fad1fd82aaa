#!/usr/bin/env node
/**
 * plot <figure-id> --in <csv> --out <image> [--raster] [--width N] [--height N]
 *
 * Reads a sweep CSV produced by the hbfsim CLI and writes the figure as SVG
 * (default) or PNG (--raster, chosen automatically for .png outputs).
 */

import { readFileSync, writeFileSync } from 'node:fs';
import process from 'node:process';

import { parseSweepCsv } from './csv.js';
import { figureSpec } from './figures.js';
import { renderPng, renderSvg } from './render.js';

interface CliArgs {
    figureId: string;
    input: string;
    output: string;
    raster: boolean;
    width: number;
    height: number;
}

const USAGE =
    'usage: plot <fig2|fig3|fig4|fig5> --in <csv> --out <image> ' +
    '[--raster] [--width N] [--height N]';

export function parseArgs(argv: string[]): CliArgs {
    if (argv.length === 0) {
        throw new Error(USAGE);
    }
    const [figureId, ...rest] = argv;
    let input: string | undefined;
    let output: string | undefined;
    let raster = false;
    let width = 900;
    let height = 620;
    for (let i = 0; i < rest.length; i += 1) {
        const flag = rest[i];
        const needValue = () => {
            i += 1;
            if (i >= rest.length) {
                throw new Error(`${flag} expects a value\n${USAGE}`);
            }
            return rest[i];
        };
        switch (flag) {
            case '--in':
                input = needValue();
                break;
            case '--out':
                output = needValue();
                break;
            case '--raster':
                raster = true;
                break;
            case '--width':
                width = Number(needValue());
                break;
            case '--height':
                height = Number(needValue());
                break;
            default:
                throw new Error(`unknown flag ${flag}\n${USAGE}`);
        }
    }
    if (!input || !output) {
        throw new Error(`--in and --out are required\n${USAGE}`);
    }
    if (!Number.isFinite(width) || !Number.isFinite(height)
        || width <= 0 || height <= 0) {
        throw new Error('--width and --height must be positive numbers');
    }
    if (output.toLowerCase().endsWith('.png')) {
        raster = true;
    }
    return { figureId, input, output, raster, width, height };
}

export async function runCli(argv: string[]): Promise<void> {
    const args = parseArgs(argv);
    const spec = figureSpec(args.figureId);
    const table = parseSweepCsv(readFileSync(args.input, 'utf8'));
    if (args.raster) {
        writeFileSync(args.output,
            await renderPng(spec, table, args.width, args.height));
    } else {
        writeFileSync(args.output,
            renderSvg(spec, table, args.width, args.height));
    }
}

const entryPoint = process.argv[1] ?? '';
if (entryPoint.endsWith('cli.js') || entryPoint.endsWith('plot')) {
    runCli(process.argv.slice(2)).catch((err: Error) => {
        console.error(`error: ${err.message}`);
        process.exit(1);
    });
}
