import { readFileSync } from "node:fs";

import { DataFormatError } from "./errors.js";

export interface TsvUtterance {
  /** "line-N", 1-based file line number. */
  id: string;
  /** Raw utterance text, untouched; the model's own tokenizer handles it. */
  text: string;
  label: string;
}

/**
 * Read "utterance-text<TAB>intent-label" lines. Blank lines are skipped,
 * ids keep the original line number, and anything other than exactly one
 * tab (or an empty label) is an error naming the line.
 */
export function parseIntentTsv(path: string): TsvUtterance[] {
  let raw: string;
  try {
    raw = readFileSync(path, "utf-8");
  } catch (err) {
    throw new DataFormatError(`cannot read ${path}: ${(err as Error).message}`);
  }
  const utterances: TsvUtterance[] = [];
  const lines = raw.split("\n");
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i].replace(/\r$/, "");
    const lineno = i + 1;
    if (line.trim() === "") continue;
    const tabs = line.split("\t").length - 1;
    if (tabs !== 1) {
      throw new DataFormatError(`${path}: line ${lineno}: expected exactly one tab, found ${tabs}`);
    }
    const [text, labelRaw] = line.split("\t");
    const label = labelRaw.trim();
    if (label === "") {
      throw new DataFormatError(`${path}: line ${lineno}: empty intent label`);
    }
    utterances.push({ id: `line-${lineno}`, text, label });
  }
  return utterances;
}
