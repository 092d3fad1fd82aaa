import { describe, expect, it } from 'vitest';

import { figureSpec, validateColumns } from '../src/figures.js';

describe('figureSpec', () => {
    it('lays out fig2 as four panels with one series each', () => {
        const spec = figureSpec('fig2');
        expect(spec.panelTitles).toHaveLength(4);
        expect(spec.series).toHaveLength(4);
        const perPanel = new Map<number, number>();
        for (const s of spec.series) {
            perPanel.set(s.panel, (perPanel.get(s.panel) ?? 0) + 1);
        }
        expect([...perPanel.values()]).toEqual([1, 1, 1, 1]);
        expect(spec.referenceLine).toBe(1);
    });

    it('overlays exact and approx series for fig3 and fig4', () => {
        const fig3 = figureSpec('fig3');
        expect(fig3.series).toHaveLength(8);        // 4 chain counts x 2
        expect(fig3.series.filter((s) => s.dashed)).toHaveLength(4);
        const fig4 = figureSpec('fig4');
        expect(fig4.xColumn).toBe('eta_f');
        expect(fig4.series).toHaveLength(6);        // 3 chain counts x 2
    });

    it('uses the per-loading A columns as x in fig5', () => {
        const spec = figureSpec('fig5');
        expect(spec.series).toHaveLength(4);
        for (const s of spec.series) {
            expect(s.xColumn).toMatch(/^A_K(8|16)$/);
        }
    });

    it('rejects unknown figure ids', () => {
        expect(() => figureSpec('fig9')).toThrow(/unknown figure id/);
    });
});

describe('validateColumns', () => {
    it('names the first missing column', () => {
        const table = {
            meta: {},
            columns: ['kappa', 'ratio_M4', 'ratio_M16', 'ratio_M32'],
            rows: [[0.1, 1, 1, 1]],
        };
        expect(() => validateColumns(figureSpec('fig2'), table))
            .toThrow('ratio_M8 not found in CSV columns');
    });

    it('passes when every mapped column exists', () => {
        const table = {
            meta: {},
            columns: ['kappa', 'ratio_M4', 'ratio_M8', 'ratio_M16', 'ratio_M32'],
            rows: [[0.1, 1, 1, 1, 1]],
        };
        expect(() => validateColumns(figureSpec('fig2'), table)).not.toThrow();
    });
});
