import { ModelLoadError } from "./errors.js";

export interface EmbeddingModel {
  name: string;
  /** Hidden-state width, when the backend knows it up front. */
  dim: number | null;
  /** Positional capacity (max sequence length), when known. */
  maxPositions: number | null;
  /** Per-token hidden states for one utterance, truncated to maxLen rows. */
  embed(text: string, maxLen: number): Promise<Float32Array[]>;
}

const MASK64 = (1n << 64n) - 1n;
const GOLDEN = 0x9e3779b97f4a7c15n;
const FNV_OFFSET = 0xcbf29ce484222325n;
const FNV_PRIME = 0x100000001b3n;

function mix64(x: bigint): bigint {
  let z = x & MASK64;
  z = ((z ^ (z >> 30n)) * 0xbf58476d1ce4e5b9n) & MASK64;
  z = ((z ^ (z >> 27n)) * 0x94d049bb133111ebn) & MASK64;
  return z ^ (z >> 31n);
}

function fnv1a64(text: string): bigint {
  let h = FNV_OFFSET;
  for (const byte of Buffer.from(text, "utf-8")) {
    h = ((h ^ BigInt(byte)) * FNV_PRIME) & MASK64;
  }
  return h;
}

/**
 * Offline stand-in backend ("stub:D"): deterministic token vectors derived
 * from a hash of the lowercased whitespace tokens. No subword vocabulary and
 * no context mixing; it exists so the export pipeline and the QTCE contract
 * can be exercised without model weights.
 */
export function stubModel(dim: number): EmbeddingModel {
  if (!Number.isInteger(dim) || dim < 1) {
    throw new ModelLoadError(`stub model needs a positive integer dim (got ${dim})`);
  }
  const scale = 1.0 / Math.sqrt(dim);
  return {
    name: `stub:${dim}`,
    dim,
    maxPositions: null,
    async embed(text: string, maxLen: number): Promise<Float32Array[]> {
      const tokens = text.toLowerCase().split(/\s+/).filter((t) => t.length > 0);
      return tokens.slice(0, maxLen).map((token) => {
        const seed = mix64(fnv1a64(token));
        const row = new Float32Array(dim);
        for (let j = 0; j < dim; j++) {
          const word = mix64((seed + BigInt(j + 1) * GOLDEN) & MASK64);
          const uniform = Number(word >> 11n) / 2 ** 53;
          row[j] = (2.0 * uniform - 1.0) * scale;
        }
        return row;
      });
    },
  };
}

/**
 * transformers.js backend for real checkpoints (default: BERT-large
 * uncased). The library is imported dynamically so the exporter works
 * without it installed; any load failure surfaces as ModelLoadError
 * (CLI exit 3). Hidden states are the final encoder layer, one row per
 * subword token (special tokens included).
 */
export async function transformersModel(modelId: string): Promise<EmbeddingModel> {
  let lib: any;
  const candidates = ["@huggingface/transformers", "@xenova/transformers"];
  for (const specifier of candidates) {
    try {
      lib = await import(specifier);
      break;
    } catch {
      // try the next package name
    }
  }
  if (!lib) {
    throw new ModelLoadError(
      `transformers.js is not installed; run \`npm install ${candidates[0]}\` to export from real checkpoints, ` +
        `or use --model stub:<dim> for the offline stand-in`,
    );
  }
  let tokenizer: any;
  let model: any;
  try {
    tokenizer = await lib.AutoTokenizer.from_pretrained(modelId);
    model = await lib.AutoModel.from_pretrained(modelId);
  } catch (err) {
    throw new ModelLoadError(`cannot load model ${modelId}: ${(err as Error).message}`);
  }
  const config = model?.config ?? {};
  return {
    name: modelId,
    dim: typeof config.hidden_size === "number" ? config.hidden_size : null,
    maxPositions: typeof config.max_position_embeddings === "number" ? config.max_position_embeddings : null,
    async embed(text: string, maxLen: number): Promise<Float32Array[]> {
      const inputs = await tokenizer(text, { truncation: true, max_length: maxLen });
      const output = await model(inputs);
      const hidden = output.last_hidden_state;
      const [, seqLen, width] = hidden.dims as [number, number, number];
      const data = hidden.data as Float32Array;
      const rows: Float32Array[] = [];
      for (let t = 0; t < Math.min(seqLen, maxLen); t++) {
        rows.push(Float32Array.from(data.subarray(t * width, (t + 1) * width)));
      }
      return rows;
    },
  };
}

/** "stub:D" selects the offline backend; anything else is a model id/path. */
export async function loadModel(spec: string): Promise<EmbeddingModel> {
  const stub = /^stub:(\d+)$/.exec(spec);
  if (stub) {
    return stubModel(Number(stub[1]));
  }
  return transformersModel(spec);
}

export const DEFAULT_MODEL = "Xenova/bert-large-uncased";
