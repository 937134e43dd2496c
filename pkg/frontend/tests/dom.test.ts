// App behavior against a stubbed fetch: gating, banners, serialization.

import { beforeEach, describe, expect, it } from "vitest";

import { mountApp, type App } from "../src/app.js";
import type { AnnotateResponse } from "../src/types.js";

const OK_RESPONSE: AnnotateResponse = {
  document: { text: "hello", spans: [], paragraph_breaks: [] },
  report: { passed: true, diffs: [] },
  html: "<p><mark>hello</mark></p>",
  status: "succeeded",
  job_id: "job-1",
};

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

class MemoryStorage {
  private map = new Map<string, string>();
  getItem(key: string) {
    return this.map.get(key) ?? null;
  }
  setItem(key: string, value: string) {
    this.map.set(key, value);
  }
  removeItem(key: string) {
    this.map.delete(key);
  }
}

describe("mountApp", () => {
  let root: HTMLElement;

  beforeEach(() => {
    document.body.innerHTML = "<div id='app'></div>";
    root = document.getElementById("app")!;
  });

  function mount(fetchFn: (input: string, init?: RequestInit) => Promise<Response>): App {
    return mountApp(root, { baseUrl: "http://service", fetchFn, storage: new MemoryStorage() });
  }

  it("disables Transfer until there is text", async () => {
    const app = mount(async () => jsonResponse(OK_RESPONSE));
    const button = app.elements.transferBtn as HTMLButtonElement;
    expect(button.disabled).toBe(true);
    app.setSourceText("some words");
    expect(button.disabled).toBe(false);
    app.setSourceText("");
    expect(button.disabled).toBe(true);
  });

  it("disables Transfer in custom mode without category rows", () => {
    const app = mount(async () => jsonResponse(OK_RESPONSE));
    app.setSourceText("text");
    app.setMode("custom");
    const button = app.elements.transferBtn as HTMLButtonElement;
    expect(button.disabled).toBe(true);
    app.addCategoryRow("abilities");
    expect(button.disabled).toBe(false);
    app.removeCategoryRow(0);
    expect(button.disabled).toBe(true);
  });

  it("shows category rows only in custom mode", () => {
    const app = mount(async () => jsonResponse(OK_RESPONSE));
    const box = app.elements.categoriesBox as HTMLElement;
    expect(box.hidden).toBe(true);
    app.setMode("custom");
    expect(box.hidden).toBe(false);
    app.setMode("offline");
    expect(box.hidden).toBe(true);
  });

  it("serializes the four demo categories in order", async () => {
    const bodies: string[] = [];
    const app = mount(async (_url, init) => {
      bodies.push(String(init?.body ?? ""));
      return jsonResponse(OK_RESPONSE);
    });
    app.setSourceText("BlackPink paragraph");
    app.setMode("custom");
    for (const label of [
      "abilities",
      "achievements and honours",
      "unusual and noticeable events",
      "others",
    ]) {
      app.addCategoryRow(label);
    }
    await app.transfer();
    const request = JSON.parse(bodies[0]);
    expect(request.categories.map((c: { description: string }) => c.description)).toEqual([
      "abilities",
      "achievements and honours",
      "unusual and noticeable events",
      "others",
    ]);
  });

  it("renders the sanitized result with badge and job link", async () => {
    const app = mount(async () => jsonResponse(OK_RESPONSE));
    app.setSourceText("hello");
    await app.transfer();
    expect(app.elements.result.innerHTML).toBe("<p><mark>hello</mark></p>");
    expect(app.elements.badge.textContent).toBe("passed");
    expect((app.elements.jobLink as HTMLAnchorElement).getAttribute("href")).toBe(
      "http://service/api/jobs/job-1",
    );
  });

  it("shows fallback badge when verification failed", async () => {
    const response = {
      ...OK_RESPONSE,
      report: { passed: false, diffs: [{ original: "a", produced: "b", position: 0 }] },
      status: "fallback_used",
    };
    const app = mount(async () => jsonResponse(response));
    app.setSourceText("hello");
    await app.transfer();
    expect(app.elements.badge.textContent).toBe("fallback");
  });

  it("surfaces service errors in the banner without clearing input", async () => {
    const app = mount(async () =>
      jsonResponse({ code: "transport_error", message: "upstream down" }, 502),
    );
    app.setSourceText("keep me");
    await app.transfer();
    const banner = app.elements.banner as HTMLElement;
    expect(banner.hidden).toBe(false);
    expect(banner.textContent).toContain("transport_error");
    expect((app.elements.source as HTMLTextAreaElement).value).toBe("keep me");
    expect(app.state.sourceText).toBe("keep me");
  });

  it("rejects a second transfer while one is in flight", async () => {
    let calls = 0;
    let release: (value: Response) => void = () => {};
    const gate = new Promise<Response>((resolve) => {
      release = resolve;
    });
    const app = mount(async () => {
      calls += 1;
      return gate;
    });
    app.setSourceText("hello");
    const first = app.transfer();
    const second = app.transfer(); // queued click: rejected while busy
    expect((app.elements.transferBtn as HTMLButtonElement).disabled).toBe(true);
    release(jsonResponse(OK_RESPONSE));
    await Promise.all([first, second]);
    expect(calls).toBe(1);
  });

  it("restores the last job after a reload", async () => {
    const storage = new MemoryStorage();
    const record = {
      id: "job-9",
      created_at: "2025-01-01T00:00:00Z",
      kind: "annotate",
      request: {},
      result: { ...OK_RESPONSE, job_id: "job-9" },
      status: "succeeded",
    };
    const fetchFn = async (url: string) =>
      url.endsWith("/api/jobs/job-9") ? jsonResponse(record) : jsonResponse(OK_RESPONSE);

    const first = mountApp(root, { baseUrl: "http://service", fetchFn, storage });
    first.setSourceText("hello");
    await first.transfer(); // stores job id (job-1 from OK_RESPONSE)
    storage.setItem("larf:last-job", "job-9");

    document.body.innerHTML = "<div id='app'></div>";
    const second = mountApp(document.getElementById("app")!, {
      baseUrl: "http://service",
      fetchFn,
      storage,
    });
    expect(await second.restoreLastJob()).toBe(true);
    expect(second.elements.result.innerHTML).toContain("<mark>hello</mark>");
  });

  it("bionic preview renders beside the result", async () => {
    const bionic = {
      document: { text: "hello", spans: [], paragraph_breaks: [] },
      html: "<p><strong>he</strong>llo</p>",
      status: "succeeded",
      job_id: "job-2",
    };
    const app = mount(async (url) =>
      url.endsWith("/api/bionic") ? jsonResponse(bionic) : jsonResponse(OK_RESPONSE),
    );
    app.setSourceText("hello");
    await app.bionicPreview();
    const pane = app.elements.bionicPane as HTMLElement;
    expect(pane.hidden).toBe(false);
    expect(pane.innerHTML).toBe("<p><strong>he</strong>llo</p>");
  });
});
