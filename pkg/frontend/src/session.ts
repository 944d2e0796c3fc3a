import { DraftPayload, RankResponse } from "./types.js";

/**
 * Session history in localStorage under the tubepulse.session.* namespace.
 * Append-only within a session; a page reload gets the same list back.
 * Clearing is explicit and empties the comparison view.
 */

const ENTRIES_KEY = "tubepulse.session.entries";
const COUNTER_KEY = "tubepulse.session.counter";

export interface HistoryEntry {
  id: number;
  label: string;
  draft: DraftPayload;
  result: RankResponse;
  submittedAt: string;
  actualViews?: number;
}

function read(): HistoryEntry[] {
  try {
    const raw = localStorage.getItem(ENTRIES_KEY);
    if (!raw) return [];
    const parsed = JSON.parse(raw);
    return Array.isArray(parsed) ? parsed : [];
  } catch {
    return [];
  }
}

function write(entries: HistoryEntry[]): void {
  try {
    localStorage.setItem(ENTRIES_KEY, JSON.stringify(entries));
  } catch {
    // storage full or blocked; history degrades to in-memory only
  }
}

export function loadHistory(): HistoryEntry[] {
  return read();
}

export function appendEntry(draft: DraftPayload, result: RankResponse): HistoryEntry {
  const counter = Number(localStorage.getItem(COUNTER_KEY) || "0") + 1;
  try {
    localStorage.setItem(COUNTER_KEY, String(counter));
  } catch {
    // counter loss is tolerable; labels may repeat
  }
  const entry: HistoryEntry = {
    id: counter,
    label: `variant ${counter}`,
    draft,
    result,
    submittedAt: new Date().toISOString(),
  };
  write([...read(), entry]);
  return entry;
}

/** Recording what actually happened is the one allowed edit. */
export function setActualViews(id: number, views: number | undefined): void {
  const entries = read();
  for (const entry of entries) {
    if (entry.id === id) {
      if (views === undefined) delete entry.actualViews;
      else entry.actualViews = views;
    }
  }
  write(entries);
}

export function clearHistory(): void {
  try {
    localStorage.removeItem(ENTRIES_KEY);
    localStorage.removeItem(COUNTER_KEY);
  } catch {
    // nothing to do
  }
}
