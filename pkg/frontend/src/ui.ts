import { ApiError, fetchHealth, fetchTrending, rankDraft } from "./api.js";
import { buildComparison } from "./compare.js";
import {
  DraftFormState,
  emptyForm,
  isValid,
  serverFieldErrors,
  toPayload,
  validate,
} from "./form.js";
import { exact, fetchedAtLabel, fixed } from "./format.js";
import {
  HistoryEntry,
  appendEntry,
  clearHistory,
  loadHistory,
  setActualViews,
} from "./session.js";
import { DraftPayload, TrendingResponse } from "./types.js";

interface Banner {
  kind: "error" | "warning";
  message: string;
  retry: boolean;
}

interface AppState {
  form: DraftFormState;
  pending: boolean;
  banner: Banner | null;
  lastPayload: DraftPayload | null; // for the retry affordance
  lastEntry: HistoryEntry | null;
  history: HistoryEntry[];
  trending: TrendingResponse | null;
  trendingDegraded: boolean;
}

const SKELETON = `
<header class="top">
  <h1>tubepulse creator console</h1>
  <span id="service-status" class="muted"></span>
</header>
<main class="layout">
  <section class="panel">
    <h2>Draft video</h2>
    <form id="draft-form" novalidate>
      <label>Title
        <input id="f-title" name="title" type="text" autocomplete="off">
        <small class="field-error" data-for="title"></small>
      </label>
      <label>Description
        <textarea id="f-description" name="description" rows="2"></textarea>
      </label>
      <label>Tags (press Enter to add)
        <input id="f-tag" type="text" autocomplete="off">
      </label>
      <div id="tag-chips" class="chips"></div>
      <label>Category
        <select id="f-category" name="categoryId">
          <option value="1">Film &amp; Animation</option>
          <option value="2">Autos &amp; Vehicles</option>
          <option value="10">Music</option>
          <option value="17">Sports</option>
          <option value="20">Gaming</option>
          <option value="22">People &amp; Blogs</option>
          <option value="23">Comedy</option>
          <option value="24" selected>Entertainment</option>
          <option value="25">News &amp; Politics</option>
          <option value="26">Howto &amp; Style</option>
          <option value="27">Education</option>
          <option value="28">Science &amp; Technology</option>
        </select>
        <small class="field-error" data-for="categoryId"></small>
      </label>
      <div class="row">
        <label>Publish time
          <input id="f-published-at" name="publishedAt" type="datetime-local">
          <small class="field-error" data-for="publishedAt"></small>
        </label>
        <label>Predict as of
          <input id="f-as-of" name="asOf" type="datetime-local">
          <small class="field-error" data-for="asOf"></small>
        </label>
      </div>
      <label class="toggle">
        <input id="f-published-toggle" type="checkbox">
        already published? (adds engagement numbers)
      </label>
      <fieldset id="engagement" hidden>
        <div class="row">
          <label>Likes
            <input id="f-likes" name="likes" type="number" min="0">
            <small class="field-error" data-for="likes"></small>
          </label>
          <label>Dislikes
            <input id="f-dislikes" name="dislikes" type="number" min="0">
            <small class="field-error" data-for="dislikes"></small>
          </label>
          <label>Comments
            <input id="f-comments" name="commentCount" type="number" min="0">
            <small class="field-error" data-for="commentCount"></small>
          </label>
        </div>
      </fieldset>
      <button id="submit-btn" type="submit" disabled>Predict &amp; rank</button>
    </form>
    <div id="banner" hidden></div>
    <article id="result-card" hidden></article>
  </section>
  <aside class="panel">
    <h2>Trending now
      <span id="trending-badge" class="badge" hidden>degraded</span>
      <button id="trending-refresh" type="button" class="small">refresh</button>
    </h2>
    <ul id="trending-list"></ul>
    <p id="trending-fetched" class="muted"></p>
  </aside>
  <section class="panel wide">
    <h2>Session variants
      <button id="clear-history" type="button" class="small">clear</button>
    </h2>
    <p id="history-empty" class="muted">Nothing submitted yet. Rank a draft and it lands here for comparison.</p>
    <div id="compare-chart"></div>
  </section>
</main>
`;

function esc(text: string): string {
  const div = document.createElement("div");
  div.textContent = text;
  return div.innerHTML;
}

export class App {
  private root: HTMLElement;
  private state: AppState;

  constructor(root: HTMLElement) {
    this.root = root;
    this.state = {
      form: emptyForm(),
      pending: false,
      banner: null,
      lastPayload: null,
      lastEntry: null,
      history: loadHistory(),
      trending: null,
      trendingDegraded: false,
    };
    root.innerHTML = SKELETON;
    this.bind();
    this.renderHistory();
    void this.refreshTrending();
    void this.refreshHealth();
  }

  private el<T extends HTMLElement>(selector: string): T {
    const found = this.root.querySelector<T>(selector);
    if (!found) throw new Error(`missing element ${selector}`);
    return found;
  }

  private bind(): void {
    const form = this.el<HTMLFormElement>("#draft-form");
    const bindText = (selector: string, key: keyof DraftFormState) => {
      this.el<HTMLInputElement>(selector).addEventListener("input", (ev) => {
        (this.state.form as any)[key] = (ev.target as HTMLInputElement).value;
        this.renderFormValidity();
      });
    };
    bindText("#f-title", "title");
    bindText("#f-description", "description");
    bindText("#f-category", "categoryId");
    bindText("#f-published-at", "publishedAt");
    bindText("#f-as-of", "asOf");
    bindText("#f-likes", "likes");
    bindText("#f-dislikes", "dislikes");
    bindText("#f-comments", "commentCount");

    this.el<HTMLInputElement>("#f-tag").addEventListener("keydown", (ev) => {
      const input = ev.target as HTMLInputElement;
      if (ev.key === "Enter" || ev.key === ",") {
        ev.preventDefault();
        const tag = input.value.trim().replace(/,$/, "");
        if (tag) {
          this.state.form.tags.push(tag);
          input.value = "";
          this.renderChips();
        }
      }
    });
    this.el("#tag-chips").addEventListener("click", (ev) => {
      const target = ev.target as HTMLElement;
      const idx = target.dataset.remove;
      if (idx !== undefined) {
        this.state.form.tags.splice(Number(idx), 1);
        this.renderChips();
      }
    });

    this.el<HTMLInputElement>("#f-published-toggle").addEventListener("change", (ev) => {
      this.state.form.published = (ev.target as HTMLInputElement).checked;
      this.el("#engagement").hidden = !this.state.form.published;
      this.renderFormValidity();
    });

    form.addEventListener("submit", (ev) => {
      ev.preventDefault();
      void this.submit();
    });

    this.el("#banner").addEventListener("click", (ev) => {
      if ((ev.target as HTMLElement).id === "retry-btn") void this.retry();
    });

    this.el("#trending-refresh").addEventListener("click", () => {
      void this.refreshTrending();
    });
    this.el("#clear-history").addEventListener("click", () => {
      clearHistory();
      this.state.history = [];
      this.renderHistory();
    });
    this.el("#compare-chart").addEventListener("change", (ev) => {
      const input = ev.target as HTMLInputElement;
      if (input.dataset.actualFor === undefined) return;
      const id = Number(input.dataset.actualFor);
      const value = input.value.trim();
      setActualViews(id, value === "" ? undefined : Number(value));
      this.state.history = loadHistory();
      this.renderHistory();
    });
  }

  // --- submit flow ------------------------------------------------------

  private async submit(): Promise<void> {
    if (this.state.pending) return; // one in-flight request, ever
    const errors = validate(this.state.form);
    this.renderFieldErrors(errors as Record<string, string>);
    if (Object.keys(errors).length > 0) return;
    await this.send(toPayload(this.state.form));
  }

  private async retry(): Promise<void> {
    if (this.state.pending || !this.state.lastPayload) return;
    await this.send(this.state.lastPayload);
  }

  private async send(payload: DraftPayload): Promise<void> {
    this.state.pending = true;
    this.state.lastPayload = payload;
    this.setBanner(null);
    this.renderFormValidity();
    try {
      const result = await rankDraft(payload);
      const entry = appendEntry(payload, result);
      this.state.lastEntry = entry;
      this.state.history = loadHistory();
      this.renderResult(entry);
      this.renderHistory();
    } catch (err) {
      this.handleSubmitError(err);
    } finally {
      this.state.pending = false;
      this.renderFormValidity();
    }
  }

  private handleSubmitError(err: unknown): void {
    if (err instanceof ApiError) {
      if (err.status === 400) {
        this.renderFieldErrors(serverFieldErrors(err.fields) as Record<string, string>);
        this.setBanner({ kind: "error", message: err.message, retry: false });
      } else {
        // 409 no_model / 503 not_ready: message names what's missing
        this.setBanner({ kind: "error", message: err.message, retry: false });
      }
      return;
    }
    this.setBanner({
      kind: "error",
      message: "cannot reach the prediction service",
      retry: true,
    });
  }

  // --- rendering --------------------------------------------------------

  private renderFormValidity(): void {
    const button = this.el<HTMLButtonElement>("#submit-btn");
    button.disabled = this.state.pending || !isValid(this.state.form);
    button.textContent = this.state.pending ? "Ranking..." : "Predict & rank";
  }

  private renderFieldErrors(errors: Record<string, string>): void {
    for (const slot of this.root.querySelectorAll<HTMLElement>(".field-error")) {
      const key = slot.dataset.for || "";
      slot.textContent = errors[key] || "";
    }
  }

  private renderChips(): void {
    this.el("#tag-chips").innerHTML = this.state.form.tags
      .map((tag, i) =>
        `<span class="chip">${esc(tag)}<button type="button" data-remove="${i}">&times;</button></span>`)
      .join("");
  }

  private setBanner(banner: Banner | null): void {
    this.state.banner = banner;
    const box = this.el("#banner");
    if (!banner) {
      box.hidden = true;
      box.innerHTML = "";
      return;
    }
    box.hidden = false;
    box.className = `banner ${banner.kind}`;
    box.innerHTML = `<span>${esc(banner.message)}</span>` +
      (banner.retry ? ` <button id="retry-btn" type="button">retry</button>` : "");
  }

  private renderResult(entry: HistoryEntry): void {
    const r = entry.result;
    const card = this.el("#result-card");
    card.hidden = false;
    const topicRows = r.top_topics
      .map((t) =>
        `<li>${esc(t.topic)} <span class="muted" data-exact="${t.similarity}">${fixed(t.similarity, 4)}</span></li>`)
      .join("");
    card.innerHTML = `
      <h3>${esc(entry.label)}: ${esc(entry.draft.title)}</h3>
      <p class="headline">
        <strong id="result-views" data-exact="${r.predicted_views}">${exact(r.predicted_views)}</strong>
        predicted views
        <span class="muted">(${esc(r.profile_used)} model ${esc(r.model_version)})</span>
      </p>
      <div class="gauge">
        <div class="gauge-fill" style="width:${Math.round(r.match_score * 100)}%"></div>
      </div>
      <p>
        trend match
        <strong id="result-match" data-exact="${r.match_score}">${fixed(r.match_score, 4)}</strong>
        ${r.unscorable
          ? `<span class="badge">unscorable</span>`
          : r.best_topic
            ? `best: <em id="result-best-topic">${esc(r.best_topic)}</em>`
            : ""}
      </p>
      <p>
        rank score
        <strong id="result-rank" data-exact="${r.rank_score}">${fixed(r.rank_score, 1)}</strong>
        <span class="muted">= views boosted by ${exact(r.boost_factor)} &times; match</span>
      </p>
      <ul class="topics">${topicRows}</ul>
    `;
  }

  private renderHistory(): void {
    const chart = this.el("#compare-chart");
    const empty = this.el("#history-empty");
    if (this.state.history.length === 0) {
      chart.innerHTML = "";
      empty.hidden = false;
      return;
    }
    empty.hidden = true;
    const bars = buildComparison(this.state.history);
    chart.innerHTML = bars
      .map((bar) => `
        <div class="variant${bar.isBest ? " best" : ""}" data-entry="${bar.entryId}">
          <div class="variant-head">
            <strong>${esc(bar.label)}</strong> ${esc(bar.title)}
            ${bar.isBest ? `<span class="badge best-badge">top rank</span>` : ""}
          </div>
          <div class="bars">
            <div class="bar predicted" style="width:${bar.predictedWidthPct}%"></div>
            ${bar.actualWidthPct !== undefined
              ? `<div class="bar actual" style="width:${bar.actualWidthPct}%"></div>`
              : ""}
          </div>
          <div class="variant-stats">
            <span>predicted <strong class="cmp-views" data-exact="${bar.predictedViews}">${exact(bar.predictedViews)}</strong></span>
            <span>match <strong class="cmp-match" data-exact="${bar.matchScore}">${fixed(bar.matchScore, 4)}</strong></span>
            <span>rank <strong class="cmp-rank" data-exact="${bar.rankScore}">${fixed(bar.rankScore, 1)}</strong></span>
            <span>${bar.bestTopic ? esc(bar.bestTopic) : "-"}</span>
            <label class="actuals">actual views
              <input type="number" min="0" data-actual-for="${bar.entryId}"
                     value="${bar.actualViews !== undefined ? bar.actualViews : ""}">
            </label>
          </div>
        </div>`)
      .join("");
  }

  private async refreshTrending(): Promise<void> {
    const badge = this.el("#trending-badge");
    try {
      const trending = await fetchTrending();
      this.state.trending = trending;
      this.state.trendingDegraded = false;
      badge.hidden = true;
      this.el("#trending-list").innerHTML = trending.topics
        .map((topic) => `<li>${esc(topic)}</li>`)
        .join("");
      this.el("#trending-fetched").textContent =
        trending.warning ? trending.warning : fetchedAtLabel(trending.fetched_at);
    } catch {
      this.state.trendingDegraded = true;
      badge.hidden = false; // stale list (if any) stays on screen
    }
  }

  private async refreshHealth(): Promise<void> {
    const status = this.el("#service-status");
    try {
      const health = await fetchHealth();
      status.textContent = `service: ${health.status}`;
    } catch (err) {
      status.textContent = err instanceof ApiError
        ? `service: ${err.code}`
        : "service: unreachable";
    }
  }
}

export function mountApp(root: HTMLElement): App {
  return new App(root);
}
