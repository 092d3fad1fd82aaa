/**
 * Server-side rendering of figure specs: echarts in SSR mode emits SVG
 * without a DOM; the optional raster path feeds that SVG through resvg.
 */

import * as echarts from 'echarts';

import { SweepTable, columnValues } from './csv.js';
import { FigureSpec, validateColumns } from './figures.js';

const PALETTE = ['#3366cc', '#dc3912', '#109618', '#990099',
    '#ff9900', '#0099c6', '#dd4477', '#66aa00'];

interface PanelLayout {
    grids: object[];
    titleOffsets: Array<{ left: string; top: string }>;
}

function panelLayout(count: number): PanelLayout {
    if (count === 1) {
        return {
            grids: [{ left: 70, right: 20, top: 50, bottom: 55 }],
            titleOffsets: [{ left: 'center', top: '12' }],
        };
    }
    // 2 x 2 layout for multi-panel figures
    const grids: object[] = [];
    const titleOffsets: Array<{ left: string; top: string }> = [];
    const cols = 2;
    for (let i = 0; i < count; i += 1) {
        const row = Math.floor(i / cols);
        const col = i % cols;
        grids.push({
            left: `${8 + col * 50}%`,
            top: `${11 + row * 48}%`,
            width: '38%',
            height: '34%',
        });
        titleOffsets.push({
            left: `${13 + col * 50}%`,
            top: `${5 + row * 48}%`,
        });
    }
    return { grids, titleOffsets };
}

/** Pure spec + table -> echarts option object (unit-testable). */
export function buildChartOptions(spec: FigureSpec, table: SweepTable): object {
    validateColumns(spec, table);
    const nPanels = spec.panelTitles.length;
    const layout = panelLayout(nPanels);
    const xAxes = [];
    const yAxes = [];
    for (let i = 0; i < nPanels; i += 1) {
        xAxes.push({
            gridIndex: i,
            type: 'value',
            name: spec.xLabel,
            nameLocation: 'middle',
            nameGap: 24,
            scale: true,
        });
        yAxes.push({
            gridIndex: i,
            type: 'value',
            name: i % 2 === 0 ? spec.yLabel : '',
            nameLocation: 'middle',
            nameGap: 38,
            scale: true,
        });
    }
    const series: object[] = spec.series.map((s, i) => {
        const xs = columnValues(table, s.xColumn ?? spec.xColumn);
        const ys = columnValues(table, s.column);
        return {
            name: s.label,
            type: 'line',
            xAxisIndex: s.panel,
            yAxisIndex: s.panel,
            showSymbol: false,
            lineStyle: {
                width: 1.5,
                type: s.dashed ? 'dashed' : 'solid',
                color: PALETTE[Math.floor(i / 1) % PALETTE.length],
            },
            itemStyle: { color: PALETTE[i % PALETTE.length] },
            data: xs.map((x, r) => [x, ys[r]]),
        };
    });
    if (spec.referenceLine !== undefined) {
        for (let panel = 0; panel < nPanels; panel += 1) {
            series.push({
                name: `reference y = ${spec.referenceLine}`,
                type: 'line',
                xAxisIndex: panel,
                yAxisIndex: panel,
                showSymbol: false,
                silent: true,
                data: [],
                markLine: {
                    silent: true,
                    symbol: 'none',
                    label: { show: false },
                    lineStyle: { color: '#888888', type: 'dotted', width: 1 },
                    data: [{ yAxis: spec.referenceLine }],
                },
            });
        }
    }
    const titles: object[] = spec.panelTitles
        .map((text, i) => ({
            text,
            textStyle: { fontSize: 12 },
            ...layout.titleOffsets[i],
        }))
        .filter((t: { text?: string }) => t.text !== '');
    titles.push({ text: spec.title, left: 'center', top: 4,
        textStyle: { fontSize: 13 } });
    return {
        animation: false,
        backgroundColor: '#ffffff',
        title: titles,
        legend: nPanels === 1
            ? { bottom: 2, itemWidth: 18, textStyle: { fontSize: 10 } }
            : undefined,
        grid: layout.grids,
        xAxis: xAxes,
        yAxis: yAxes,
        series,
    };
}

export function renderSvg(
    spec: FigureSpec,
    table: SweepTable,
    width = 900,
    height = 620,
): string {
    const chart = echarts.init(null, null, {
        renderer: 'svg',
        ssr: true,
        width,
        height,
    });
    try {
        chart.setOption(buildChartOptions(spec, table) as echarts.EChartsOption);
        return chart.renderToSVGString();
    } finally {
        chart.dispose();
    }
}

export async function renderPng(
    spec: FigureSpec,
    table: SweepTable,
    width = 900,
    height = 620,
): Promise<Buffer> {
    const svg = renderSvg(spec, table, width, height);
    const { Resvg } = await import('@resvg/resvg-js');
    const resvg = new Resvg(svg, {
        fitTo: { mode: 'width', value: width },
    });
    return resvg.render().asPng();
}
