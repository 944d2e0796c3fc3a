/**
 * Display helpers. The rule everywhere: the number shown is the API's
 * number. predicted_views is already server-rounded so it renders
 * verbatim; floats get fixed decimals for the eye while the element's
 * data-exact attribute keeps the untouched value.
 */

export function exact(n: number): string {
  return String(n);
}

export function fixed(n: number, places: number): string {
  return n.toFixed(places);
}

export function fetchedAtLabel(iso: string | null): string {
  if (!iso) return "fetch time unknown";
  const d = new Date(iso);
  if (isNaN(d.getTime())) return "fetch time unknown";
  return `fetched ${d.toISOString().slice(0, 16).replace("T", " ")} UTC`;
}

/** e.g. "likes, comment_count" from the server's 400 fields list. */
export function fieldList(fields: string[]): string {
  return fields.join(", ");
}
