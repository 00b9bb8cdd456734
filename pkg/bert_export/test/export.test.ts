import { execFileSync } from "node:child_process";
import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

import { runExport } from "../src/export.js";
import { stubModel } from "../src/model.js";
import { readQtceFile } from "../src/qtce.js";

const LONG_TEXT = Array.from({ length: 60 }, (_, i) => `tok${i}`).join(" ");

function corpusDir(): { dir: string; tsv: string } {
  const dir = mkdtempSync(join(tmpdir(), "export-"));
  const tsv = join(dir, "train.tsv");
  writeFileSync(
    tsv,
    ["add this song to my playlist\tAddToPlaylist", "", `${LONG_TEXT}\tRateBook`, "will it rain\tGetWeather"].join(
      "\n",
    ) + "\n",
    "utf-8",
  );
  return { dir, tsv };
}

const stubLoader = async () => stubModel(32);

describe("runExport with the stub backend", () => {
  it("writes one record per non-blank line with the model dim", async () => {
    const { dir, tsv } = corpusDir();
    const out = join(dir, "train.qtce");
    const summary = await runExport({ trainPath: tsv, outPath: out, maxLen: 50, layer: "last", model: "stub:32" });
    expect(summary).toMatchObject({ records: 3, dim: 32 });
    const records = readQtceFile(out);
    expect(records.map((r) => r.id)).toEqual(["line-1", "line-3", "line-4"]);
    expect(records.map((r) => r.label)).toEqual(["AddToPlaylist", "RateBook", "GetWeather"]);
    expect(records.every((r) => r.dim === 32)).toBe(true);
  });

  it("truncates long utterances to max-len tokens", async () => {
    const { dir, tsv } = corpusDir();
    const out = join(dir, "trunc.qtce");
    await runExport({ trainPath: tsv, outPath: out, maxLen: 50, layer: "last", model: "stub:8" });
    const records = readQtceFile(out);
    expect(records[1].rows).toHaveLength(50); // 60 tokens capped at 50
    expect(records[0].rows).toHaveLength(6);
  });

  it("is deterministic: identical bytes across runs", async () => {
    const { dir, tsv } = corpusDir();
    const a = join(dir, "a.qtce");
    const b = join(dir, "b.qtce");
    await runExport({ trainPath: tsv, outPath: a, maxLen: 50, layer: "last", model: "stub:16" });
    await runExport({ trainPath: tsv, outPath: b, maxLen: 50, layer: "last", model: "stub:16" });
    expect(readFileSync(a)).toEqual(readFileSync(b));
  });

  it("identical tokens map to identical rows", async () => {
    const model = stubModel(24);
    const rows = await model.embed("go go stop", 50);
    expect([...rows[0]]).toEqual([...rows[1]]);
    expect([...rows[0]]).not.toEqual([...rows[2]]);
  });

  it("rejects unsupported layers and bad max-len", async () => {
    const { dir, tsv } = corpusDir();
    const out = join(dir, "x.qtce");
    await expect(
      runExport({ trainPath: tsv, outPath: out, maxLen: 50, layer: "first", model: "stub:8" }),
    ).rejects.toThrowError(/layer/);
    await expect(
      runExport({ trainPath: tsv, outPath: out, maxLen: 0, layer: "last", model: "stub:8" }),
    ).rejects.toThrowError(/max-len/);
  });

  it("respects a model's positional capacity", async () => {
    const { dir, tsv } = corpusDir();
    const capped = async () => ({ ...stubModel(8), maxPositions: 16 });
    await expect(
      runExport({ trainPath: tsv, outPath: join(dir, "c.qtce"), maxLen: 50, layer: "last", model: "ignored" }, capped),
    ).rejects.toThrowError(/capacity/);
  });
});

describe("interop with the Python toolkit", () => {
  it("exports files the primary CLI can consume", async () => {
    let pythonAvailable = true;
    try {
      execFileSync("python3", ["-c", "import qtcintent"], { stdio: "pipe" });
    } catch {
      pythonAvailable = false;
    }
    if (!pythonAvailable) {
      console.warn("skipping interop check: python3 + qtcintent not available");
      return;
    }
    const { dir, tsv } = corpusDir();
    const out = join(dir, "interop.qtce");
    await runExport({ trainPath: tsv, outPath: out, maxLen: 50, layer: "last", model: "stub:16" });
    const feats = join(dir, "feats.jsonl");
    execFileSync(
      "python3",
      ["-m", "qtcintent.cli", "features", "--embeddings", out, "--kernel", "2", "--out", feats],
      { stdio: "pipe" },
    );
    const rows = readFileSync(feats, "utf-8").trim().split("\n").map((line) => JSON.parse(line));
    expect(rows).toHaveLength(3);
    expect(rows[0].id).toBe("line-1");
    expect(rows[0].features).toHaveLength(2 * 2);
  });
});
