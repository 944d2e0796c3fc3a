import { describe, expect, it } from "vitest";
import { bestEntryId, buildComparison } from "../src/compare.js";
import { HistoryEntry } from "../src/session.js";
import { RankResponse } from "../src/types.js";

function entry(id: number, views: number, rank: number, actual?: number): HistoryEntry {
  const result: RankResponse = {
    predicted_views: views,
    predicted_views_raw: views,
    match_score: 0.4,
    best_topic: "T",
    top_topics: [],
    unscorable: false,
    rank_score: rank,
    boost_factor: 0.5,
    profile_used: "pre_upload",
    model_version: "boosted-v1",
  };
  return {
    id,
    label: `variant ${id}`,
    draft: { title: `d${id}`, category_id: 1, published_at: "", as_of: "" },
    result,
    submittedAt: "2018-05-14T08:00:00Z",
    actualViews: actual,
  };
}

describe("bestEntryId", () => {
  it("is null for empty history", () => {
    expect(bestEntryId([])).toBeNull();
  });

  it("picks the max rank_score, not the max views", () => {
    expect(bestEntryId([entry(1, 900, 950), entry(2, 500, 1200)])).toBe(2);
  });

  it("keeps the earlier entry on a tie", () => {
    expect(bestEntryId([entry(1, 100, 700), entry(2, 100, 700)])).toBe(1);
  });
});

describe("buildComparison", () => {
  it("returns an empty model for empty history", () => {
    expect(buildComparison([])).toEqual([]);
  });

  it("scales bars to the largest value and flags the best", () => {
    const bars = buildComparison([entry(1, 1000, 1100), entry(2, 500, 900)]);
    expect(bars[0].predictedWidthPct).toBe(100);
    expect(bars[1].predictedWidthPct).toBe(50);
    expect(bars[0].isBest).toBe(true);
    expect(bars[1].isBest).toBe(false);
  });

  it("lets a large actual set the scale", () => {
    const bars = buildComparison([entry(1, 1000, 1100, 2000), entry(2, 500, 900)]);
    expect(bars[0].actualWidthPct).toBe(100);
    expect(bars[0].predictedWidthPct).toBe(50);
    expect(bars[1].actualWidthPct).toBeUndefined();
  });

  it("passes API numbers through untouched", () => {
    const bars = buildComparison([entry(1, 123, 456.789)]);
    expect(bars[0].predictedViews).toBe(123);
    expect(bars[0].rankScore).toBe(456.789);
  });

  it("handles the all-zero corner without dividing by zero", () => {
    const bars = buildComparison([entry(1, 0, 0)]);
    expect(bars[0].predictedWidthPct).toBe(0);
  });
});
