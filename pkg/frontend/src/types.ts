/**
 * Wire types for the tubepulse HTTP API.
 *
 * These mirror docs/api.md in the main repository; that file is the
 * contract and this one just spells it in TypeScript. The UI never
 * computes predictions or similarities itself.
 */

export interface DraftPayload {
  title: string;
  description?: string;
  tags?: string[];
  category_id: number;
  channel_title?: string;
  published_at: string;
  as_of: string;
  likes?: number;
  dislikes?: number;
  comment_count?: number;
  id?: string;
}

export interface TopicSimilarity {
  topic: string;
  similarity: number;
}

export interface RankResponse {
  predicted_views: number;
  predicted_views_raw: number;
  match_score: number;
  best_topic: string | null;
  top_topics: TopicSimilarity[];
  unscorable: boolean;
  rank_score: number;
  boost_factor: number;
  profile_used: string;
  model_version: string;
}

export interface TrendingResponse {
  topics: string[];
  fetched_at: string | null;
  source: string | null;
  warning?: string;
}

export interface HealthResponse {
  status: "ok" | "unavailable";
  embeddings_loaded: boolean;
  topics_count: number;
  model_versions: Record<string, string>;
  missing?: string[];
}

export interface ErrorEnvelope {
  error: {
    code: string;
    message: string;
    fields?: string[];
  };
}
