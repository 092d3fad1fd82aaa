/**
 * Parser for the sweep CSV format emitted by the hbfsim CLI:
 * a `# key=value ...` metadata line, a header line, then numeric rows.
 */

export interface SweepTable {
    meta: Record<string, string>;
    columns: string[];
    rows: number[][];
}

export function parseSweepCsv(text: string): SweepTable {
    const lines = text
        .split(/\r?\n/)
        .filter((line) => line.trim().length > 0);
    const meta: Record<string, string> = {};
    let cursor = 0;
    while (cursor < lines.length && lines[cursor].startsWith('#')) {
        for (const token of lines[cursor].slice(1).trim().split(/\s+/)) {
            const eq = token.indexOf('=');
            if (eq > 0) {
                meta[token.slice(0, eq)] = token.slice(eq + 1);
            }
        }
        cursor += 1;
    }
    if (cursor >= lines.length) {
        throw new Error('empty CSV: no header line found');
    }
    const columns = lines[cursor].split(',').map((c) => c.trim());
    cursor += 1;
    const rows: number[][] = [];
    for (; cursor < lines.length; cursor += 1) {
        const cells = lines[cursor].split(',');
        if (cells.length !== columns.length) {
            throw new Error(
                `row ${rows.length + 1} has ${cells.length} cells, ` +
                `expected ${columns.length}`,
            );
        }
        rows.push(cells.map((cell, i) => {
            const value = Number(cell);
            if (Number.isNaN(value)) {
                throw new Error(
                    `row ${rows.length + 1}, column ${columns[i]}: ` +
                    `cannot parse ${JSON.stringify(cell)} as a number`,
                );
            }
            return value;
        }));
    }
    if (rows.length === 0) {
        throw new Error('empty CSV: no data rows');
    }
    return { meta, columns, rows };
}

export function columnValues(table: SweepTable, name: string): number[] {
    const idx = table.columns.indexOf(name);
    if (idx < 0) {
        throw new Error(`${name} not found in CSV columns`);
    }
    return table.rows.map((row) => row[idx]);
}
