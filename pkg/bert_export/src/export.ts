import { DataFormatError, UsageError } from "./errors.js";
import { DEFAULT_MODEL, EmbeddingModel, loadModel } from "./model.js";
import { EmbeddingRecord, writeQtceFile } from "./qtce.js";
import { parseIntentTsv } from "./tsv.js";

export interface ExportConfig {
  trainPath: string;
  outPath: string;
  maxLen: number;
  layer: string;
  model: string;
}

export const DEFAULT_EXPORT: Pick<ExportConfig, "maxLen" | "layer" | "model"> = {
  maxLen: 50,
  layer: "last",
  model: DEFAULT_MODEL,
};

export interface ExportSummary {
  records: number;
  dim: number;
  model: string;
}

/**
 * Run the frozen model over every utterance of the TSV and write one QTCE
 * record per non-blank line: id "line-N", the intent label, and the
 * (T x D) hidden-state matrix with T capped at maxLen.
 */
export async function runExport(
  config: ExportConfig,
  modelLoader: (spec: string) => Promise<EmbeddingModel> = loadModel,
): Promise<ExportSummary> {
  if (config.layer !== "last") {
    throw new UsageError(`only --layer last is supported (got ${config.layer})`);
  }
  if (!Number.isInteger(config.maxLen) || config.maxLen < 1) {
    throw new UsageError(`--max-len must be a positive integer (got ${config.maxLen})`);
  }
  const model = await modelLoader(config.model);
  if (model.maxPositions !== null && config.maxLen > model.maxPositions) {
    throw new UsageError(
      `--max-len ${config.maxLen} exceeds the model's positional capacity ${model.maxPositions}`,
    );
  }
  const utterances = parseIntentTsv(config.trainPath);
  const records: EmbeddingRecord[] = [];
  let dim = model.dim;
  for (const utt of utterances) {
    const rows = await model.embed(utt.text, config.maxLen);
    if (rows.length > config.maxLen) {
      throw new DataFormatError(`model returned ${rows.length} rows for ${utt.id}, cap is ${config.maxLen}`);
    }
    if (dim === null && rows.length > 0) {
      dim = rows[0].length;
    }
    if (dim !== null && rows.some((row) => row.length !== dim)) {
      throw new DataFormatError(`model returned inconsistent hidden sizes for ${utt.id}`);
    }
    records.push({ id: utt.id, label: utt.label, rows, dim: dim ?? 0 });
  }
  if (dim === null) {
    throw new DataFormatError(`cannot determine the embedding dim: no tokens in ${config.trainPath}`);
  }
  for (const rec of records) {
    rec.dim = dim; // zero-token records still carry the file's D
  }
  writeQtceFile(config.outPath, records);
  return { records: records.length, dim, model: model.name };
}
