import { readFileSync } from "fs";
import { join } from "path";
import { describe, expect, it } from "vitest";

import { SchemaError, parseSweepCsv, parseTraceCsv, traceLabel } from "../src/csv.js";
import { render, winnerColor } from "../src/plots.js";

const FIXTURES = join(__dirname, "fixtures");

function fixture(name: string): { path: string; text: string } {
  return { path: join(FIXTURES, name), text: readFileSync(join(FIXTURES, name), "utf-8") };
}

describe("csv parsing", () => {
  it("parses trace rows with the published columns", () => {
    const rows = parseTraceCsv(fixture("fig3_s-1.csv").text);
    expect(rows[0].round).toBe(0);
    expect(rows[0].action).toBe("init");
    expect(rows[0].fidelity).toBeCloseTo(0.7, 12);
    expect(rows[0].resources).toBe(7);
    expect(rows.at(-1)!.fidelity).toBeGreaterThan(0.99);
  });

  it("parses sweep cells, strategies, and empty values", () => {
    const table = parseSweepCsv(fixture("fig5_sweep.csv").text);
    expect(table.strategies).toContain("tcp");
    expect(table.strategies).toContain("s-0");
    expect(table.cells).toHaveLength(25);
    expect(table.pwValues).toEqual([0.8, 0.85, 0.9, 0.95, 1.0]);
    const pure = table.cells.find((c) => c.pw === 1.0 && c.pz === 1.0)!;
    expect(pure.status).toBe("same");
    const unreachable = table.cells.filter((c) =>
      [...c.perStrategy.values()].some((v) => v === null),
    );
    expect(unreachable.length).toBeGreaterThan(0);
  });

  it("names the missing column in schema errors", () => {
    expect(() => parseTraceCsv("round,action,fidelity\n0,init,1")).toThrow(
      /missing column 'success_prob'/,
    );
    expect(() => parseSweepCsv("pw,pz,f0,status,winner\n")).toThrow(
      /missing column 'winner_value'/,
    );
  });

  it("rejects empty and row-less files", () => {
    expect(() => parseTraceCsv("")).toThrow(SchemaError);
    expect(() =>
      parseTraceCsv("round,action,fidelity,success_prob,resources\n"),
    ).toThrow(/no rows/);
  });

  it("derives curve labels from file names", () => {
    expect(traceLabel("/x/y/fig3_s-1.csv")).toBe("s-1");
    expect(traceLabel("out/fig6_hybrid-0_3.csv")).toBe("hybrid-0_3");
    expect(traceLabel("standalone.csv")).toBe("standalone");
  });
});

describe("curves plot", () => {
  const inputs = ["fig3_tcp.csv", "fig3_s-0.csv", "fig3_s-1.csv", "fig3_s-5.csv"].map(fixture);

  it("renders one curve per input with a legend", () => {
    const svg = render({ kind: "curves", inputs });
    expect(svg.startsWith("<svg")).toBe(true);
    expect((svg.match(/<path /g) ?? []).length).toBe(4);
    for (const label of ["tcp", "s-0", "s-1", "s-5"]) {
      expect(svg).toContain(`>${label}</text>`);
    }
    // log axis: decade gridlines for the recurrence trace's resource range
    expect(svg).toContain(">100<");
    expect(svg).toContain(">1e4<");
  });

  it("is byte-stable across reruns", () => {
    const first = render({ kind: "curves", inputs });
    const second = render({ kind: "curves", inputs });
    expect(second).toBe(first);
  });

  it("propagates schema errors from bad input", () => {
    expect(() =>
      render({ kind: "curves", inputs: [{ path: "bad.csv", text: "a,b\n1,2" }] }),
    ).toThrow(SchemaError);
  });
});

describe("winner map", () => {
  it("colors families like the legend structure", () => {
    expect(winnerColor("same")).toBe("#2d8a4e");
    expect(winnerColor("tcp")).toBe("#e07b00");
    expect(winnerColor("s-1")).not.toBe(winnerColor("s-5"));
    expect(winnerColor("c-2")).not.toBe(winnerColor("s-2"));
    expect(winnerColor("hybrid-0:3")).toBe("#7b4fa6");
    expect(winnerColor("none")).toBe("#d9d9d9");
  });

  it("renders a 5x5 grid with a legend of observed winners", () => {
    const svg = render({ kind: "winner_map", inputs: [fixture("fig5_sweep.csv")] });
    // 25 cells plus legend swatches
    const rects = (svg.match(/<rect /g) ?? []).length;
    expect(rects).toBeGreaterThanOrEqual(26);
    expect(svg).toContain(">same</text>");
    expect(svg).toContain(">tcp</text>");
  });

  it("is byte-stable across reruns", () => {
    const a = render({ kind: "winner_map", inputs: [fixture("fig5_sweep.csv")] });
    const b = render({ kind: "winner_map", inputs: [fixture("fig5_sweep.csv")] });
    expect(b).toBe(a);
  });

  it("requires exactly one sweep CSV", () => {
    expect(() =>
      render({
        kind: "winner_map",
        inputs: [fixture("fig5_sweep.csv"), fixture("fig7_sweep.csv")],
      }),
    ).toThrow(/exactly one/);
  });
});

describe("gain map", () => {
  it("uses fidelity-gain mode for budget sweeps, including negative cells", () => {
    const svg = render({ kind: "gain_map", inputs: [fixture("fig7_sweep.csv")] });
    expect(svg).toContain("Winner fidelity gain");
    expect(svg).toContain(">-0.01</text>"); // de-purified pure corner
  });

  it("uses resource-difference mode for target-fidelity sweeps", () => {
    const svg = render({ kind: "gain_map", inputs: [fixture("fig5_sweep.csv")] });
    expect(svg).toContain("Resource difference");
  });

  it("is byte-stable across reruns", () => {
    const a = render({ kind: "gain_map", inputs: [fixture("fig7_sweep.csv")] });
    const b = render({ kind: "gain_map", inputs: [fixture("fig7_sweep.csv")] });
    expect(b).toBe(a);
  });
});
