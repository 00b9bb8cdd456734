/** Input data is malformed (bad TSV line, inconsistent dims, ...). Exit 2. */
export class DataFormatError extends Error {}

/** The embedding model could not be loaded or run. Exit 3. */
export class ModelLoadError extends Error {}

/** Bad flags or out-of-range options. Exit 1. */
export class UsageError extends Error {}
