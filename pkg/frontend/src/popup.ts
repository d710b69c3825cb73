// Popup glue: click -> capture -> service call -> render. One request in
// flight per popup; a newer click aborts the previous one. No request is
// ever issued without the click.

import { fetchRelated, ApiError, type FetchOptions } from "./api.js";
import { capturePage } from "./capture.js";
import { getEndpoint } from "./options.js";
import { render, renderError } from "./render.js";
import type { PageCapture, RfcResponse } from "./types.js";

export interface PopupDeps {
  capture: () => Promise<PageCapture>;
  endpoint: () => Promise<string>;
  fetchRelatedFn?: (
    capture: PageCapture,
    endpoint: string,
    options?: FetchOptions
  ) => Promise<RfcResponse>;
}

export interface PopupHandle {
  /** resolves when the in-flight request (if any) settles; for tests */
  idle: () => Promise<void>;
}

export function initPopup(doc: Document, deps: PopupDeps): PopupHandle {
  const button = doc.getElementById("check") as HTMLButtonElement;
  const results = doc.getElementById("results") as HTMLElement;
  const status = doc.getElementById("status") as HTMLElement;
  const doFetch = deps.fetchRelatedFn ?? fetchRelated;

  let inflight: AbortController | null = null;
  let pending: Promise<void> = Promise.resolve();

  const run = async (controller: AbortController): Promise<void> => {
    try {
      const capture = await deps.capture();
      const endpoint = await deps.endpoint();
      const response = await doFetch(capture, endpoint, { signal: controller.signal });
      if (controller.signal.aborted) return; // superseded by a newer click
      status.textContent = "";
      render(response, results);
    } catch (err) {
      if (controller.signal.aborted) return;
      status.textContent = "";
      const message =
        err instanceof ApiError || err instanceof Error
          ? err.message
          : "something went wrong";
      renderError(message, results); // error banner, no partial render
    } finally {
      if (inflight === controller) inflight = null;
    }
  };

  button.addEventListener("click", () => {
    inflight?.abort();
    const controller = new AbortController();
    inflight = controller;
    status.textContent = "Checking…";
    pending = run(controller);
  });

  return { idle: () => pending };
}

if (typeof document !== "undefined" && document.getElementById("check")) {
  initPopup(document, {
    capture: () => capturePage(),
    endpoint: () => getEndpoint(),
  });
}
