import { HistoryEntry } from "./session.js";

/**
 * Pure view-model for the variant comparison chart. Bars are scaled
 * relative to the largest value on display; the numbers themselves are
 * always the API's, untouched.
 */

export interface BarModel {
  entryId: number;
  label: string;
  title: string;
  predictedViews: number;
  rankScore: number;
  matchScore: number;
  bestTopic: string | null;
  actualViews?: number;
  predictedWidthPct: number;
  actualWidthPct?: number;
  isBest: boolean;
}

export function bestEntryId(entries: HistoryEntry[]): number | null {
  let best: HistoryEntry | null = null;
  for (const entry of entries) {
    if (best === null || entry.result.rank_score > best.result.rank_score) {
      best = entry;
    }
  }
  return best ? best.id : null;
}

export function buildComparison(entries: HistoryEntry[]): BarModel[] {
  const bestId = bestEntryId(entries);
  let scale = 0;
  for (const entry of entries) {
    scale = Math.max(scale, entry.result.predicted_views, entry.actualViews ?? 0);
  }
  return entries.map((entry) => {
    const predicted = entry.result.predicted_views;
    const model: BarModel = {
      entryId: entry.id,
      label: entry.label,
      title: entry.draft.title,
      predictedViews: predicted,
      rankScore: entry.result.rank_score,
      matchScore: entry.result.match_score,
      bestTopic: entry.result.best_topic,
      predictedWidthPct: scale > 0 ? (predicted / scale) * 100 : 0,
      isBest: entry.id === bestId,
    };
    if (entry.actualViews !== undefined) {
      model.actualViews = entry.actualViews;
      model.actualWidthPct = scale > 0 ? (entry.actualViews / scale) * 100 : 0;
    }
    return model;
  });
}
