/** Harvey ball geometry: a circular ideogram whose filled arc shows an
 * achievement percentage. Arcs are continuous, not quantized. */

export interface HarveyOptions {
  size?: number;
  fillColor?: string;
  trackColor?: string;
}

/** Arc sweep in degrees for an achievement percentage. */
export function fillAngle(achievementPercent: number): number {
  const clamped = Math.min(100, Math.max(0, achievementPercent));
  return clamped * 3.6;
}

function polar(cx: number, cy: number, r: number, angleDeg: number) {
  // 0 degrees points straight up; sweep is clockwise
  const rad = ((angleDeg - 90) * Math.PI) / 180;
  return { x: cx + r * Math.cos(rad), y: cy + r * Math.sin(rad) };
}

/** SVG path of a pie wedge from 12 o'clock, clockwise, angleDeg wide. */
export function wedgePath(
  cx: number,
  cy: number,
  r: number,
  angleDeg: number,
): string {
  if (angleDeg <= 0) return "";
  if (angleDeg >= 360) {
    // a full circle cannot be a single arc; use two half turns
    const top = polar(cx, cy, r, 0);
    const bottom = polar(cx, cy, r, 180);
    return (
      `M ${top.x} ${top.y} ` +
      `A ${r} ${r} 0 1 1 ${bottom.x} ${bottom.y} ` +
      `A ${r} ${r} 0 1 1 ${top.x} ${top.y} Z`
    );
  }
  const start = polar(cx, cy, r, 0);
  const end = polar(cx, cy, r, angleDeg);
  const largeArc = angleDeg > 180 ? 1 : 0;
  return (
    `M ${cx} ${cy} L ${start.x} ${start.y} ` +
    `A ${r} ${r} 0 ${largeArc} 1 ${end.x} ${end.y} Z`
  );
}

/** A Harvey ball as an SVG element. */
export function harveyBall(
  achievementPercent: number | null,
  options: HarveyOptions = {},
): SVGSVGElement {
  const size = options.size ?? 28;
  const fill = options.fillColor ?? "#1b5e20";
  const track = options.trackColor ?? "#d7d7d7";
  const c = size / 2;
  const r = c - 1;

  const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
  svg.setAttribute("width", String(size));
  svg.setAttribute("height", String(size));
  svg.setAttribute("viewBox", `0 0 ${size} ${size}`);
  svg.classList.add("harvey-ball");

  const ring = document.createElementNS(svg.namespaceURI, "circle");
  ring.setAttribute("cx", String(c));
  ring.setAttribute("cy", String(c));
  ring.setAttribute("r", String(r));
  ring.setAttribute("fill", achievementPercent === null ? "#eeeeee" : "white");
  ring.setAttribute("stroke", track);
  svg.appendChild(ring);

  if (achievementPercent !== null) {
    const angle = fillAngle(achievementPercent);
    svg.dataset.fillAngle = String(angle);
    if (angle > 0) {
      const path = document.createElementNS(svg.namespaceURI, "path");
      path.setAttribute("d", wedgePath(c, c, r, angle));
      path.setAttribute("fill", fill);
      svg.appendChild(path);
    }
  } else {
    svg.dataset.fillAngle = "";
  }
  return svg;
}
