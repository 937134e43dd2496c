// Two-pane demo app: paste text on the left, press Transfer, read the
// annotated result on the right. Vanilla DOM so it runs from a static
// page against any service origin.

import { ApiClient, ServiceError, type FetchLike } from "./api.js";
import { sanitizeHtml } from "./sanitize.js";
import {
  SLIDERS,
  addCategory,
  buildAnnotateRequest,
  canTransfer,
  categoriesVisible,
  initialState,
  removeCategory,
  resultFromResponse,
  updateCategory,
  type UiState,
} from "./state.js";
import type { AnnotationTag, JobRecord, AnnotateResponse } from "./types.js";

const LAST_JOB_KEY = "larf:last-job";

export interface AppOptions {
  baseUrl: string;
  fetchFn?: FetchLike;
  storage?: Pick<Storage, "getItem" | "setItem" | "removeItem">;
}

export interface App {
  readonly state: UiState;
  elements: Record<string, HTMLElement>;
  transfer(): Promise<void>;
  bionicPreview(): Promise<void>;
  restoreLastJob(): Promise<boolean>;
  setSourceText(text: string): void;
  setMode(mode: UiState["mode"]): void;
  addCategoryRow(description?: string): void;
  removeCategoryRow(index: number): void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  attrs: Record<string, string> = {},
  text = "",
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  if (text) {
    node.textContent = text;
  }
  return node;
}

export function mountApp(root: HTMLElement, options: AppOptions): App {
  const doc = root.ownerDocument;
  const api = new ApiClient(options.baseUrl, options.fetchFn);
  const storage = options.storage ?? null;
  let state = initialState();

  // --- static layout -------------------------------------------------
  const left = el(doc, "section", { class: "pane pane-left" });
  const right = el(doc, "section", { class: "pane pane-right" });

  const banner = el(doc, "div", { id: "error-banner", class: "banner", hidden: "" });
  const source = el(doc, "textarea", {
    id: "source-text",
    placeholder: "Paste the text to annotate…",
    rows: "14",
  });

  const modeSelect = el(doc, "select", { id: "mode-select" });
  for (const mode of ["default", "custom", "offline"] as const) {
    modeSelect.appendChild(el(doc, "option", { value: mode }, mode));
  }

  const categoriesBox = el(doc, "div", { id: "categories", hidden: "" });
  const categoriesTitle = el(doc, "h3", {}, "Key Information");
  const categoryRows = el(doc, "div", { id: "category-rows" });
  const addCategoryBtn = el(doc, "button", { id: "add-category", type: "button" }, "+ add category");
  categoriesBox.append(categoriesTitle, categoryRows, addCategoryBtn);

  const temperature = el(doc, "input", {
    id: "temperature",
    type: "range",
    min: String(SLIDERS.temperature.min),
    max: String(SLIDERS.temperature.max),
    step: String(SLIDERS.temperature.step),
    value: String(SLIDERS.temperature.initial),
  });
  const temperatureOut = el(doc, "output", { id: "temperature-value" }, "0");
  const maxTokens = el(doc, "input", {
    id: "max-output",
    type: "range",
    min: String(SLIDERS.maxOutputTokens.min),
    max: String(SLIDERS.maxOutputTokens.max),
    step: String(SLIDERS.maxOutputTokens.step),
    value: String(SLIDERS.maxOutputTokens.initial),
  });
  const maxTokensOut = el(doc, "output", { id: "max-output-value" }, "2048");

  const transferBtn = el(doc, "button", { id: "transfer", type: "button" }, "Transfer");
  const bionicBtn = el(doc, "button", { id: "bionic-preview-btn", type: "button" }, "Bionic preview");

  const badge = el(doc, "span", { id: "badge", class: "badge", hidden: "" });
  const jobLink = el(doc, "a", { id: "job-link", target: "_blank", hidden: "" }, "job detail");
  const result = el(doc, "div", { id: "result", class: "sandbox" });
  const bionicPane = el(doc, "div", { id: "bionic-preview", class: "sandbox", hidden: "" });

  const controls = el(doc, "div", { class: "controls" });
  controls.append(
    el(doc, "label", { for: "mode-select" }, "Mode"),
    modeSelect,
    el(doc, "label", { for: "temperature" }, "temperature"),
    temperature,
    temperatureOut,
    el(doc, "label", { for: "max-output" }, "max_tokens"),
    maxTokens,
    maxTokensOut,
  );
  left.append(banner, source, controls, categoriesBox, transferBtn, bionicBtn);
  right.append(badge, jobLink, result, bionicPane);
  root.append(left, right);

  // --- rendering -------------------------------------------------------
  function renderCategories(): void {
    categoryRows.textContent = "";
    state.categories.forEach((row, index) => {
      const container = el(doc, "div", { class: "category-row" });
      const description = el(doc, "input", {
        type: "text",
        class: "category-description",
        placeholder: "what to annotate",
        value: row.description,
      });
      description.value = row.description;
      description.addEventListener("input", () => {
        state = updateCategory(state, index, { description: description.value });
        syncControls();
      });
      const tag = el(doc, "select", { class: "category-tag" });
      for (const name of ["strong", "mark", "u"] as const) {
        const option = el(doc, "option", { value: name }, name);
        if (name === row.tag) {
          option.setAttribute("selected", "");
        }
        tag.appendChild(option);
      }
      tag.addEventListener("change", () => {
        state = updateCategory(state, index, { tag: tag.value as AnnotationTag });
      });
      const remove = el(doc, "button", { type: "button", class: "category-remove" }, "×");
      remove.addEventListener("click", () => {
        state = removeCategory(state, index);
        render();
      });
      container.append(description, tag, remove);
      categoryRows.appendChild(container);
    });
  }

  function syncControls(): void {
    transferBtn.toggleAttribute("disabled", !canTransfer(state));
    transferBtn.classList.toggle("busy", state.busy);
    bionicBtn.toggleAttribute(
      "disabled",
      state.busy || state.sourceText.trim() === "",
    );
    categoriesBox.hidden = !categoriesVisible(state);
    banner.hidden = state.error === null;
    banner.textContent = state.error ?? "";
  }

  function renderResult(): void {
    if (state.result === null) {
      badge.hidden = true;
      jobLink.hidden = true;
      result.textContent = "";
      return;
    }
    badge.hidden = false;
    badge.textContent = state.result.verification;
    badge.className = `badge badge-${state.result.verification}`;
    jobLink.hidden = false;
    jobLink.setAttribute("href", api.jobUrl(state.result.jobId));
    jobLink.textContent = `job ${state.result.jobId.slice(0, 8)}`;
    // Server HTML is never mutated, only filtered through the whitelist.
    result.innerHTML = sanitizeHtml(state.result.html, doc);
  }

  function render(): void {
    renderCategories();
    renderResult();
    syncControls();
  }

  // --- actions ---------------------------------------------------------
  async function transfer(): Promise<void> {
    if (!canTransfer(state)) {
      return;
    }
    state = { ...state, busy: true, error: null };
    syncControls();
    try {
      const response: AnnotateResponse = await api.annotate(buildAnnotateRequest(state));
      state = { ...state, result: resultFromResponse(response) };
      storage?.setItem(LAST_JOB_KEY, response.job_id);
    } catch (error) {
      const message =
        error instanceof ServiceError ? `${error.code}: ${error.message}` : String(error);
      state = { ...state, error: message }; // source text stays intact
    } finally {
      state = { ...state, busy: false };
      render();
    }
  }

  async function bionicPreview(): Promise<void> {
    if (state.busy || state.sourceText.trim() === "") {
      return;
    }
    try {
      const response = await api.bionic({ text: state.sourceText });
      bionicPane.hidden = false;
      bionicPane.innerHTML = sanitizeHtml(response.html, doc);
    } catch (error) {
      const message =
        error instanceof ServiceError ? `${error.code}: ${error.message}` : String(error);
      state = { ...state, error: message };
      syncControls();
    }
  }

  async function restoreLastJob(): Promise<boolean> {
    const jobId = storage?.getItem(LAST_JOB_KEY);
    if (!jobId) {
      return false;
    }
    try {
      const record: JobRecord = await api.getJob(jobId);
      if (record.kind !== "annotate") {
        return false;
      }
      const response = record.result as AnnotateResponse;
      state = { ...state, result: resultFromResponse(response) };
      render();
      return true;
    } catch {
      storage?.removeItem(LAST_JOB_KEY);
      return false;
    }
  }

  // --- events ----------------------------------------------------------
  source.addEventListener("input", () => {
    state = { ...state, sourceText: source.value };
    syncControls();
  });
  modeSelect.addEventListener("change", () => {
    state = { ...state, mode: modeSelect.value as UiState["mode"] };
    render();
  });
  addCategoryBtn.addEventListener("click", () => {
    state = addCategory(state);
    render();
  });
  temperature.addEventListener("input", () => {
    state = { ...state, temperature: Number(temperature.value) };
    temperatureOut.textContent = temperature.value;
  });
  maxTokens.addEventListener("input", () => {
    state = { ...state, maxOutputTokens: Number(maxTokens.value) };
    maxTokensOut.textContent = maxTokens.value;
  });
  transferBtn.addEventListener("click", () => {
    void transfer();
  });
  bionicBtn.addEventListener("click", () => {
    void bionicPreview();
  });

  render();

  const app: App = {
    get state() {
      return state;
    },
    elements: {
      source,
      modeSelect,
      transferBtn,
      bionicBtn,
      badge,
      jobLink,
      result,
      bionicPane,
      banner,
      categoriesBox,
      categoryRows,
      addCategoryBtn,
      temperature,
      maxTokens,
    },
    transfer,
    bionicPreview,
    restoreLastJob,
    setSourceText(text: string) {
      source.value = text;
      state = { ...state, sourceText: text };
      syncControls();
    },
    setMode(mode: UiState["mode"]) {
      modeSelect.value = mode;
      state = { ...state, mode };
      render();
    },
    addCategoryRow(description = "") {
      state = addCategory(state, description);
      render();
    },
    removeCategoryRow(index: number) {
      state = removeCategory(state, index);
      render();
    },
  };
  return app;
}
