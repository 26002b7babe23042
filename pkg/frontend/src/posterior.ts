// View model for the posterior panel. Probabilities come from the
// service untouched; this file only sorts, formats, and splits out
// zero-mass rows for the "show all" toggle.

export interface Bar {
  node: string;
  label: string;
  level: string;
  p: number;
  // percentage rounded to one decimal, e.g. "92.3%"
  pctText: string;
  // unrounded width in percent so the stack visually totals 100
  width: number;
}

export interface BarModel {
  word: string;
  n: number;
  bars: Bar[];
  zeros: Bar[];
}

function isEntry(raw: unknown): raw is { node: string; level: string; p: number } {
  if (typeof raw !== "object" || raw === null) return false;
  const e = raw as Record<string, unknown>;
  return (
    typeof e.node === "string" &&
    typeof e.level === "string" &&
    typeof e.p === "number" &&
    Number.isFinite(e.p) &&
    e.p >= 0 &&
    e.p <= 1
  );
}

export function toBarModel(
  raw: unknown,
  labelOf: (nodeId: string) => string,
): BarModel | null {
  if (typeof raw !== "object" || raw === null) return null;
  const doc = raw as Record<string, unknown>;
  if (typeof doc.word !== "string") return null;
  if (typeof doc.n !== "number") return null;
  if (!Array.isArray(doc.mass) || !doc.mass.every(isEntry)) return null;

  const entries = [...doc.mass].sort((a, b) => b.p - a.p || (a.node < b.node ? -1 : 1));
  const bars: Bar[] = [];
  const zeros: Bar[] = [];
  for (const entry of entries) {
    const pct = Math.round(entry.p * 1000) / 10;
    const bar: Bar = {
      node: entry.node,
      label: labelOf(entry.node),
      level: entry.level,
      p: entry.p,
      pctText: `${pct.toFixed(1)}%`,
      width: entry.p * 100,
    };
    (entry.p === 0 ? zeros : bars).push(bar);
  }
  return { word: doc.word, n: doc.n, bars, zeros };
}
