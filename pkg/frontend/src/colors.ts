import type { Band } from "./types.js";

/** Fixed band-to-color mapping; overridable at runtime. */
export const DEFAULT_BAND_COLORS: Record<Band, string> = {
  Green: "#2e7d32",
  LightGreen: "#7cb342",
  Yellow: "#f9a825",
  Orange: "#ef6c00",
  Red: "#c62828",
  InsufficientData: "#9e9e9e",
};

export const BAND_ORDER: Band[] = [
  "Green",
  "LightGreen",
  "Yellow",
  "Orange",
  "Red",
];

export const BAND_LABELS: Record<Band, string> = {
  Green: "well above reference",
  LightGreen: "at or above reference",
  Yellow: "small gap",
  Orange: "large gap",
  Red: "very large gap",
  InsufficientData: "insufficient data",
};

declare global {
  interface Window {
    RTIMON_BAND_COLORS?: Partial<Record<Band, string>>;
  }
}

export function bandColor(
  band: Band,
  overrides?: Partial<Record<Band, string>>,
): string {
  const runtime =
    typeof window !== "undefined" ? window.RTIMON_BAND_COLORS : undefined;
  return (
    overrides?.[band] ?? runtime?.[band] ?? DEFAULT_BAND_COLORS[band]
  );
}
