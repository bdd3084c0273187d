/**
 * Aggregate-CSV schema: one row per (estimator, grid point) with the median
 * error and interquartile band over trials. Parsing is strict — the column
 * set must match exactly and every row must validate — so a malformed file
 * fails loudly instead of rendering a misleading figure.
 */
import { csvParse } from "d3-dsv";
import { z } from "zod";

export const SWEPT_VARS = ["n", "k", "eps"] as const;
export type SweptVar = (typeof SWEPT_VARS)[number];

export const AGG_COLUMNS = [
  "estimator",
  "noise",
  "swept_var",
  "swept_value",
  "median",
  "q25",
  "q75",
  "trials",
] as const;

const finite = z.coerce.number().refine(Number.isFinite, "must be finite");

export const aggregateRowSchema = z
  .object({
    estimator: z.string().min(1),
    noise: z.string().min(1),
    swept_var: z.enum(SWEPT_VARS),
    swept_value: finite,
    median: finite.refine((v) => v >= 0, "median must be nonnegative"),
    q25: finite,
    q75: finite,
    trials: z.coerce.number().int().positive(),
  })
  .refine((r) => r.q25 <= r.q75, {
    message: "interquartile band inverted (q25 > q75)",
  })
  .refine((r) => r.q25 <= r.median && r.median <= r.q75, {
    message: "median outside interquartile band",
  });

export type AggregateRow = z.infer<typeof aggregateRowSchema>;

export class SchemaError extends Error {}

export function parseAggregateCsv(text: string): AggregateRow[] {
  const table = csvParse(text);
  const got = table.columns ?? [];
  const want = [...AGG_COLUMNS];
  if (got.length !== want.length || !want.every((c, i) => got[i] === c)) {
    throw new SchemaError(
      `bad header: expected "${want.join(",")}", got "${got.join(",")}"`,
    );
  }
  if (table.length === 0) {
    throw new SchemaError("no data rows");
  }
  return table.map((raw, i) => {
    const parsed = aggregateRowSchema.safeParse(raw);
    if (!parsed.success) {
      const issue = parsed.error.issues[0];
      const where = issue.path.length ? ` (${issue.path.join(".")})` : "";
      throw new SchemaError(`row ${i + 2}: ${issue.message}${where}`);
    }
    return parsed.data;
  });
}
