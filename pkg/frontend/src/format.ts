/** Locale-aware number rendering; the API serves raw decimals. */

export function formatValue(value: number, locale: string): string {
  return new Intl.NumberFormat(locale, {
    minimumFractionDigits: 2,
    maximumFractionDigits: 2,
  }).format(value);
}

export function formatPercent(value: number, locale: string): string {
  return `${new Intl.NumberFormat(locale, {
    minimumFractionDigits: 0,
    maximumFractionDigits: 1,
  }).format(value)} %`;
}

/** Tooltip text of one time-series point, e.g. "AT: 4,50 in 2018". */
export function pointTooltip(
  region: string,
  value: number,
  year: number,
  locale: string,
): string {
  return `${region}: ${formatValue(value, locale)} in ${year}`;
}
