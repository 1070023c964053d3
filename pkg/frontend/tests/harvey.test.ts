import { describe, expect, it } from "vitest";

import { fillAngle, harveyBall, wedgePath } from "../src/harvey.js";

describe("fillAngle", () => {
  it("is exactly achievement times 3.6 degrees", () => {
    expect(fillAngle(0)).toBe(0);
    expect(fillAngle(25)).toBe(90);
    expect(fillAngle(50)).toBe(180);
    expect(fillAngle(56)).toBe(201.6);
    expect(fillAngle(75)).toBe(270);
    expect(fillAngle(100)).toBe(360);
  });

  it("clamps out-of-range achievements", () => {
    expect(fillAngle(-5)).toBe(0);
    expect(fillAngle(130)).toBe(360);
  });
});

describe("wedgePath", () => {
  it("is empty at zero sweep", () => {
    expect(wedgePath(10, 10, 8, 0)).toBe("");
  });

  it("closes a full circle at 360 degrees", () => {
    const path = wedgePath(10, 10, 8, 360);
    expect(path).toContain("A 8 8");
    expect((path.match(/A /g) ?? []).length).toBe(2);
    expect(path.endsWith("Z")).toBe(true);
  });

  it("uses the large-arc flag past half", () => {
    expect(wedgePath(10, 10, 8, 90)).toContain("A 8 8 0 0 1");
    expect(wedgePath(10, 10, 8, 270)).toContain("A 8 8 0 1 1");
  });
});

describe("harveyBall", () => {
  it("records its fill angle on the element", () => {
    expect(harveyBall(56).dataset.fillAngle).toBe("201.6");
    expect(harveyBall(0).dataset.fillAngle).toBe("0");
    expect(harveyBall(100).dataset.fillAngle).toBe("360");
  });

  it("draws no wedge for an empty ball", () => {
    expect(harveyBall(0).querySelector("path")).toBeNull();
    expect(harveyBall(100).querySelector("path")).not.toBeNull();
  });

  it("renders unknown achievement as a grey ball", () => {
    const ball = harveyBall(null);
    expect(ball.dataset.fillAngle).toBe("");
    expect(ball.querySelector("path")).toBeNull();
  });
});
