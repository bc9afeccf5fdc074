import { describe, expect, it } from "vitest";

import {
  clearOrder,
  emptyOrder,
  isComplete,
  orderedLabels,
  placeAt,
  removeLabel,
  unranked,
} from "../src/ordering.js";

const LABELS = ["A", "B", "C"];

describe("order state", () => {
  it("starts empty and incomplete", () => {
    const s = emptyOrder(LABELS);
    expect(s.tray).toEqual([]);
    expect(isComplete(s)).toBe(false);
    expect(unranked(s)).toEqual(LABELS);
  });

  it("placing all labels completes the order without gaps", () => {
    let s = emptyOrder(LABELS);
    s = placeAt(s, "B", 0);
    s = placeAt(s, "A", 1);
    expect(isComplete(s)).toBe(false);
    s = placeAt(s, "C", 2);
    expect(isComplete(s)).toBe(true);
    expect(orderedLabels(s)).toEqual(["B", "A", "C"]);
  });

  it("re-placing a label moves it instead of duplicating", () => {
    let s = emptyOrder(LABELS);
    s = placeAt(s, "A", 0);
    s = placeAt(s, "B", 1);
    s = placeAt(s, "A", 1);
    expect(s.tray).toEqual(["B", "A"]);
  });

  it("positions clamp to the dense end", () => {
    let s = emptyOrder(LABELS);
    s = placeAt(s, "C", 7);
    expect(s.tray).toEqual(["C"]);
    s = placeAt(s, "A", -2);
    expect(s.tray).toEqual(["A", "C"]);
  });

  it("unknown labels are ignored", () => {
    const s = placeAt(emptyOrder(LABELS), "Z", 0);
    expect(s.tray).toEqual([]);
  });

  it("removal and clear reopen the order", () => {
    let s = emptyOrder(LABELS);
    for (const [i, l] of LABELS.entries()) s = placeAt(s, l, i);
    s = removeLabel(s, "B");
    expect(isComplete(s)).toBe(false);
    expect(s.tray).toEqual(["A", "C"]);
    expect(unranked(s)).toEqual(["B"]);
    expect(clearOrder(s).tray).toEqual([]);
  });

  it("ordered labels refuse an incomplete order", () => {
    expect(() => orderedLabels(placeAt(emptyOrder(LABELS), "A", 0))).toThrow();
  });
});
