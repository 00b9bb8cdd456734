/**
 * QTCE embedding file format (little-endian):
 *   magic "QTCE" | version u32 = 1 | record count u64
 *   per record: id_len u32 | id utf-8 | label_len u32 | label utf-8
 *               | T u32 | D u32 | T*D float32 row-major
 */
import { openSync, writeSync, closeSync, readFileSync } from "node:fs";

import { DataFormatError } from "./errors.js";

export const QTCE_MAGIC = "QTCE";
export const QTCE_VERSION = 1;

export interface EmbeddingRecord {
  id: string;
  label: string;
  /** One Float32Array of length D per token. */
  rows: Float32Array[];
  dim: number;
}

function u32(value: number): Buffer {
  const buf = Buffer.alloc(4);
  buf.writeUInt32LE(value, 0);
  return buf;
}

function u64(value: number): Buffer {
  const buf = Buffer.alloc(8);
  buf.writeBigUInt64LE(BigInt(value), 0);
  return buf;
}

export function writeQtceFile(path: string, records: EmbeddingRecord[]): void {
  const dims = new Set(records.map((r) => r.dim));
  if (dims.size > 1) {
    throw new DataFormatError(`records mix embedding dims ${[...dims].sort((a, b) => a - b).join(", ")}`);
  }
  const fd = openSync(path, "w");
  try {
    writeSync(fd, Buffer.from(QTCE_MAGIC, "ascii"));
    writeSync(fd, u32(QTCE_VERSION));
    writeSync(fd, u64(records.length));
    for (const rec of records) {
      const id = Buffer.from(rec.id, "utf-8");
      const label = Buffer.from(rec.label, "utf-8");
      writeSync(fd, u32(id.length));
      writeSync(fd, id);
      writeSync(fd, u32(label.length));
      writeSync(fd, label);
      writeSync(fd, u32(rec.rows.length));
      writeSync(fd, u32(rec.dim));
      const matrix = Buffer.alloc(4 * rec.rows.length * rec.dim);
      rec.rows.forEach((row, t) => {
        if (row.length !== rec.dim) {
          throw new DataFormatError(`record ${rec.id}: row ${t} has ${row.length} entries, expected ${rec.dim}`);
        }
        for (let j = 0; j < rec.dim; j++) {
          if (!Number.isFinite(row[j])) {
            throw new DataFormatError(`record ${rec.id}: non-finite embedding entry`);
          }
          matrix.writeFloatLE(row[j], 4 * (t * rec.dim + j));
        }
      });
      writeSync(fd, matrix);
    }
  } finally {
    closeSync(fd);
  }
}

/** Exact inverse of writeQtceFile; used by the tests to close the loop. */
export function readQtceFile(path: string): EmbeddingRecord[] {
  const blob = readFileSync(path);
  let offset = 0;
  const take = (n: number, what: string): Buffer => {
    if (offset + n > blob.length) {
      throw new DataFormatError(`${path}: truncated file: need ${n} bytes for ${what} at byte ${offset}`);
    }
    const chunk = blob.subarray(offset, offset + n);
    offset += n;
    return chunk;
  };
  if (take(4, "magic").toString("ascii") !== QTCE_MAGIC) {
    throw new DataFormatError(`${path}: bad magic (expected "${QTCE_MAGIC}")`);
  }
  const version = take(4, "version").readUInt32LE(0);
  if (version !== QTCE_VERSION) {
    throw new DataFormatError(`${path}: unsupported version ${version} (expected ${QTCE_VERSION})`);
  }
  const count = Number(take(8, "record count").readBigUInt64LE(0));
  const records: EmbeddingRecord[] = [];
  for (let r = 0; r < count; r++) {
    const idLen = take(4, `record ${r} id length`).readUInt32LE(0);
    const id = take(idLen, `record ${r} id`).toString("utf-8");
    const labelLen = take(4, `record ${r} label length`).readUInt32LE(0);
    const label = take(labelLen, `record ${r} label`).toString("utf-8");
    const t = take(4, `record ${r} dims`).readUInt32LE(0);
    const dim = take(4, `record ${r} dims`).readUInt32LE(0);
    const matrix = take(4 * t * dim, `record ${r} matrix`);
    const rows: Float32Array[] = [];
    for (let i = 0; i < t; i++) {
      const row = new Float32Array(dim);
      for (let j = 0; j < dim; j++) {
        row[j] = matrix.readFloatLE(4 * (i * dim + j));
      }
      rows.push(row);
    }
    records.push({ id, label, rows, dim });
  }
  if (offset !== blob.length) {
    throw new DataFormatError(`${path}: ${blob.length - offset} trailing bytes after last record`);
  }
  return records;
}
