#!/usr/bin/env node
/**
 * bert-export export --train a.tsv --out a.qtce [--max-len 50] [--layer last]
 *                    [--model <id|path|stub:D>]
 *
 * Exit codes: 0 success, 1 usage error, 2 data/format error, 3 model load
 * failure.
 */
import { DataFormatError, ModelLoadError, UsageError } from "./errors.js";
import { DEFAULT_EXPORT, ExportConfig, runExport } from "./export.js";

const USAGE = `usage: bert-export export --train <tsv> --out <qtce>
                   [--max-len N (default 50)] [--layer last]
                   [--model <id|path|stub:D> (default ${DEFAULT_EXPORT.model})]`;

function parseArgs(argv: string[]): ExportConfig {
  if (argv.length === 0) {
    throw new UsageError("missing subcommand (expected: export)");
  }
  if (argv[0] === "--help" || argv[0] === "-h") {
    console.log(USAGE);
    process.exit(0);
  }
  if (argv[0] !== "export") {
    throw new UsageError(`unknown subcommand ${argv[0]} (expected: export)`);
  }
  const flags: Record<string, string> = {};
  for (let i = 1; i < argv.length; i += 2) {
    const flag = argv[i];
    if (flag === "--help" || flag === "-h") {
      console.log(USAGE);
      process.exit(0);
    }
    if (!["--train", "--out", "--max-len", "--layer", "--model"].includes(flag)) {
      throw new UsageError(`unknown flag ${flag}`);
    }
    const value = argv[i + 1];
    if (value === undefined) {
      throw new UsageError(`flag ${flag} needs a value`);
    }
    flags[flag] = value;
  }
  if (!flags["--train"]) {
    throw new UsageError("--train is required");
  }
  if (!flags["--out"]) {
    throw new UsageError("--out is required");
  }
  const maxLen = flags["--max-len"] === undefined ? DEFAULT_EXPORT.maxLen : Number(flags["--max-len"]);
  if (!Number.isInteger(maxLen) || maxLen < 1) {
    throw new UsageError(`--max-len must be a positive integer (got ${flags["--max-len"]})`);
  }
  return {
    trainPath: flags["--train"],
    outPath: flags["--out"],
    maxLen,
    layer: flags["--layer"] ?? DEFAULT_EXPORT.layer,
    model: flags["--model"] ?? DEFAULT_EXPORT.model,
  };
}

export async function runCli(argv: string[]): Promise<number> {
  try {
    const config = parseArgs(argv);
    const summary = await runExport(config);
    console.error(`wrote ${summary.records} records (D=${summary.dim}, model ${summary.model}) to ${config.outPath}`);
    return 0;
  } catch (err) {
    if (err instanceof UsageError) {
      console.error(USAGE);
      console.error(`bert-export: error: ${err.message}`);
      return 1;
    }
    if (err instanceof DataFormatError) {
      console.error(`bert-export: data error: ${err.message}`);
      return 2;
    }
    if (err instanceof ModelLoadError) {
      console.error(`bert-export: model error: ${err.message}`);
      return 3;
    }
    throw err;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  (import.meta.url === `file://${process.argv[1]}` || import.meta.url.endsWith("/cli.js"));

if (invokedDirectly) {
  runCli(process.argv.slice(2)).then((code) => {
    process.exitCode = code;
  });
}
