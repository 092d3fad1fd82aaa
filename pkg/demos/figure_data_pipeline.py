"""Generate all four figure CSVs into ./out and summarize what each holds.

The same data can be produced from the shell with `hbfsim fig2 --out ...`
etc., and rendered to SVG by the frontend's `plot` command.
"""

from pathlib import Path

from hbfsim.cli import cmd_fig2, cmd_fig3, cmd_fig4, cmd_fig5, write_csv

out_dir = Path("out")
out_dir.mkdir(exist_ok=True)

for name, builder in (("fig2", cmd_fig2), ("fig3", cmd_fig3),
                      ("fig4", cmd_fig4), ("fig5", cmd_fig5)):
    result = builder()
    path = out_dir / f"{name}.csv"
    write_csv(result, str(path))
    values = [row[0] for row in result.rows]
    print(f"{path}: {len(result.rows)} rows, sweep {result.columns[0]} in "
          f"[{min(values):g}, {max(values):g}], columns: "
          f"{', '.join(result.columns[1:])}")

print()
print("render with the frontend, e.g.:")
print("  cd frontend && npm run build")
print("  node dist/cli.js fig2 --in ../out/fig2.csv --out ../out/fig2.svg")
