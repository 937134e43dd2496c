// UI state and the pure logic around it. Keeping this framework-free makes
// the invariants (when Transfer is allowed, how requests serialize) unit
// testable without a DOM.

import type { AnnotateRequest, AnnotateResponse, AnnotationTag, Mode } from "./types.js";

export interface CategoryRow {
  description: string;
  tag: AnnotationTag;
}

export interface TransferResult {
  html: string;
  verification: "passed" | "fallback";
  jobId: string;
}

export interface UiState {
  sourceText: string;
  mode: Mode;
  categories: CategoryRow[];
  temperature: number;
  maxOutputTokens: number;
  busy: boolean;
  error: string | null;
  result: TransferResult | null;
}

export const SLIDERS = {
  temperature: { min: 0, max: 2, step: 0.1, initial: 0 },
  maxOutputTokens: { min: 256, max: 8192, step: 256, initial: 2048 },
} as const;

export function initialState(): UiState {
  return {
    sourceText: "",
    mode: "default",
    categories: [],
    temperature: SLIDERS.temperature.initial,
    maxOutputTokens: SLIDERS.maxOutputTokens.initial,
    busy: false,
    error: null,
    result: null,
  };
}

/** Transfer is allowed only when idle, with text, and (in custom mode) with
 * at least one category row. */
export function canTransfer(state: UiState): boolean {
  if (state.busy || state.sourceText.trim() === "") {
    return false;
  }
  return state.mode !== "custom" || state.categories.length > 0;
}

export function categoriesVisible(state: UiState): boolean {
  return state.mode === "custom";
}

export function addCategory(state: UiState, description = ""): UiState {
  return {
    ...state,
    categories: [...state.categories, { description, tag: "strong" }],
  };
}

export function removeCategory(state: UiState, index: number): UiState {
  return {
    ...state,
    categories: state.categories.filter((_, i) => i !== index),
  };
}

export function updateCategory(
  state: UiState,
  index: number,
  patch: Partial<CategoryRow>,
): UiState {
  return {
    ...state,
    categories: state.categories.map((row, i) => (i === index ? { ...row, ...patch } : row)),
  };
}

/** Serialize the request exactly as the service expects; category order is
 * the on-screen row order. */
export function buildAnnotateRequest(state: UiState): AnnotateRequest {
  const request: AnnotateRequest = {
    text: state.sourceText,
    mode: state.mode,
    temperature: state.temperature,
    max_output_tokens: state.maxOutputTokens,
  };
  if (state.mode === "custom") {
    request.categories = state.categories.map((row) => ({
      description: row.description,
      tag: row.tag,
    }));
  }
  return request;
}

export function resultFromResponse(response: AnnotateResponse): TransferResult {
  return {
    html: response.html,
    verification: response.report.passed ? "passed" : "fallback",
    jobId: response.job_id,
  };
}
