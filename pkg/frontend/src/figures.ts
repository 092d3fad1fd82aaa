/**
 * Figure layouts: which CSV columns land on which panel, axis labels, and
 * where the unit reference line belongs.
 */

import { SweepTable } from './csv.js';

export interface SeriesSpec {
    column: string;
    label: string;
    panel: number;
    dashed?: boolean;
    /** per-series x column; defaults to the figure-wide xColumn */
    xColumn?: string;
}

export interface FigureSpec {
    id: string;
    title: string;
    xColumn: string;
    xLabel: string;
    yLabel: string;
    panelTitles: string[];
    series: SeriesSpec[];
    /** horizontal reference drawn on every panel of a ratio plot */
    referenceLine?: number;
}

const RATIO_LABEL = 'gain ratio full / partial';

function fig2(): FigureSpec {
    const ms = [4, 8, 16, 32];
    return {
        id: 'fig2',
        title: 'Exact gain ratio vs normalized separation (K = l_bs = 2)',
        xColumn: 'kappa',
        xLabel: 'kappa',
        yLabel: RATIO_LABEL,
        panelTitles: ms.map((m) => `M = ${m}`),
        series: ms.map((m, i) => ({
            column: `ratio_M${m}`,
            label: `M = ${m}`,
            panel: i,
        })),
        referenceLine: 1,
    };
}

function overlayFigure(
    id: string,
    title: string,
    xColumn: string,
    xLabel: string,
    groups: number[],
    prefix: string,
): FigureSpec {
    const series: SeriesSpec[] = [];
    for (const g of groups) {
        series.push({
            column: `exact_${prefix}${g}`,
            label: `exact, ${prefix === 'lbs' ? 'l_bs' : 'K'} = ${g}`,
            panel: 0,
        });
        series.push({
            column: `approx_${prefix}${g}`,
            label: `approx, ${prefix === 'lbs' ? 'l_bs' : 'K'} = ${g}`,
            panel: 0,
            dashed: true,
        });
    }
    return {
        id,
        title,
        xColumn,
        xLabel,
        yLabel: RATIO_LABEL,
        panelTitles: [''],
        series,
        referenceLine: 1,
    };
}

function fig5(): FigureSpec {
    const series: SeriesSpec[] = [];
    for (const k of [8, 16]) {
        series.push({
            column: `exact_K${k}`,
            label: `exact, K = ${k}`,
            panel: 0,
            xColumn: `A_K${k}`,
        });
        series.push({
            column: `approx_K${k}`,
            label: `approx, K = ${k}`,
            panel: 0,
            dashed: true,
            xColumn: `A_K${k}`,
        });
    }
    return {
        id: 'fig5',
        title: 'Gain ratio vs the regime quantity A (l_bs = 16)',
        xColumn: 'kappa',
        xLabel: 'A',
        yLabel: RATIO_LABEL,
        panelTitles: [''],
        series,
        referenceLine: 1,
    };
}

export function figureSpec(id: string): FigureSpec {
    switch (id) {
        case 'fig2':
            return fig2();
        case 'fig3':
            return overlayFigure(
                'fig3',
                'Exact vs simplified approximation (M_P = 16, K = l_bs)',
                'kappa',
                'kappa',
                [2, 4, 8, 16],
                'lbs',
            );
        case 'fig4':
            return overlayFigure(
                'fig4',
                'Exact vs full-multiplexing approximation (M_P = 16, K = l_bs)',
                'eta_f',
                'eta_f',
                [16, 32, 128],
                'lbs',
            );
        case 'fig5':
            return fig5();
        default:
            throw new Error(
                `unknown figure id ${JSON.stringify(id)}; ` +
                'expected fig2, fig3, fig4, or fig5',
            );
    }
}

/** Fails with the first missing column's name. */
export function validateColumns(spec: FigureSpec, table: SweepTable): void {
    const wanted = new Set<string>();
    for (const s of spec.series) {
        wanted.add(s.column);
        wanted.add(s.xColumn ?? spec.xColumn);
    }
    for (const name of wanted) {
        if (!table.columns.includes(name)) {
            throw new Error(`${name} not found in CSV columns`);
        }
    }
}
