import { DraftPayload } from "./types.js";

/**
 * Draft form state and validation. Submit stays disabled until the title
 * and both datetimes are valid and in order; the server re-checks all of
 * it, this is just the first line of defense.
 */

export interface DraftFormState {
  title: string;
  description: string;
  tags: string[];
  categoryId: string;
  publishedAt: string; // datetime-local value, minute precision
  asOf: string;
  published: boolean; // "already published?" toggle
  likes: string;
  dislikes: string;
  commentCount: string;
}

export function emptyForm(): DraftFormState {
  return {
    title: "",
    description: "",
    tags: [],
    categoryId: "24",
    publishedAt: "",
    asOf: "",
    published: false,
    likes: "",
    dislikes: "",
    commentCount: "",
  };
}

export type FieldErrors = Partial<Record<keyof DraftFormState, string>>;

function parseLocalDatetime(value: string): Date | null {
  if (!value) return null;
  const d = new Date(value);
  return isNaN(d.getTime()) ? null : d;
}

function countError(raw: string): string | null {
  if (raw.trim() === "") return "required once published";
  const n = Number(raw);
  if (!Number.isInteger(n) || n < 0) return "must be a whole number >= 0";
  return null;
}

export function validate(form: DraftFormState): FieldErrors {
  const errors: FieldErrors = {};
  if (!form.title.trim()) errors.title = "title is required";

  const published = parseLocalDatetime(form.publishedAt);
  const asOf = parseLocalDatetime(form.asOf);
  if (!published) errors.publishedAt = "publish date and time are required";
  if (!asOf) errors.asOf = "as-of date and time are required";
  if (published && asOf && asOf.getTime() < published.getTime()) {
    errors.asOf = "as-of must not be earlier than publish time";
  }

  const category = Number(form.categoryId);
  if (!Number.isInteger(category)) errors.categoryId = "category is required";

  if (form.published) {
    const likes = countError(form.likes);
    const dislikes = countError(form.dislikes);
    const comments = countError(form.commentCount);
    if (likes) errors.likes = likes;
    if (dislikes) errors.dislikes = dislikes;
    if (comments) errors.commentCount = comments;
  }
  return errors;
}

export function isValid(form: DraftFormState): boolean {
  return Object.keys(validate(form)).length === 0;
}

/** datetime-local gives no zone; the creator's clock is the zone. */
function toIso(value: string): string {
  return new Date(value).toISOString();
}

export function toPayload(form: DraftFormState): DraftPayload {
  const payload: DraftPayload = {
    title: form.title.trim(),
    description: form.description,
    tags: form.tags.filter((t) => t.trim() !== ""),
    category_id: Number(form.categoryId),
    published_at: toIso(form.publishedAt),
    as_of: toIso(form.asOf),
  };
  if (form.published) {
    payload.likes = Number(form.likes);
    payload.dislikes = Number(form.dislikes);
    payload.comment_count = Number(form.commentCount);
  }
  return payload;
}

/** Map the server's 400 field paths back onto form fields. */
export function serverFieldErrors(fields: string[]): FieldErrors {
  const byWire: Record<string, keyof DraftFormState> = {
    title: "title",
    published_at: "publishedAt",
    as_of: "asOf",
    category_id: "categoryId",
    likes: "likes",
    dislikes: "dislikes",
    comment_count: "commentCount",
    description: "description",
    tags: "tags",
  };
  const errors: FieldErrors = {};
  for (const field of fields) {
    const key = byWire[field.split(".")[0]];
    if (key) errors[key] = "rejected by the server";
  }
  return errors;
}
