// HTTP client for the related fact checks service.

import type { PageCapture, RfcRequest, RfcResponse } from "./types.js";

export const DEFAULT_TIMEOUT_MS = 10_000;

export class ApiError extends Error {
  constructor(
    public readonly code: string,
    message: string,
    public readonly status?: number
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export interface FetchOptions {
  signal?: AbortSignal;
  maxResults?: number;
  timeoutMs?: number;
  fetchFn?: typeof fetch;
}

function withTimeout(signal: AbortSignal | undefined, timeoutMs: number): AbortSignal {
  const controller = new AbortController();
  const timer = setTimeout(
    () => controller.abort(new DOMException("request timed out", "TimeoutError")),
    timeoutMs
  );
  const forward = () => {
    clearTimeout(timer);
    controller.abort(signal?.reason);
  };
  if (signal) {
    if (signal.aborted) forward();
    else signal.addEventListener("abort", forward, { once: true });
  }
  controller.signal.addEventListener("abort", () => clearTimeout(timer), { once: true });
  return controller.signal;
}

export async function fetchRelated(
  capture: PageCapture,
  endpoint: string,
  options: FetchOptions = {}
): Promise<RfcResponse> {
  const request: RfcRequest = {};
  if (capture.url) request.url = capture.url;
  if (capture.title) request.title = capture.title;
  if (capture.text_excerpt) request.body = capture.text_excerpt;
  if (options.maxResults !== undefined) request.max_results = options.maxResults;

  const url = endpoint.replace(/\/+$/, "") + "/v1/related";
  const doFetch = options.fetchFn ?? fetch;
  let response: Response;
  try {
    response = await doFetch(url, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(request),
      signal: withTimeout(options.signal, options.timeoutMs ?? DEFAULT_TIMEOUT_MS),
    });
  } catch (err) {
    if (err instanceof DOMException && err.name === "AbortError") throw err;
    if (err instanceof DOMException && err.name === "TimeoutError") {
      throw new ApiError("timeout", "the fact check service timed out");
    }
    throw new ApiError("unreachable", `could not reach the fact check service: ${err}`);
  }

  if (!response.ok) {
    let code = "server_error";
    let message = `service returned HTTP ${response.status}`;
    try {
      const payload = await response.json();
      if (payload && typeof payload.code === "string") {
        code = payload.code;
        message = payload.message ?? message;
      }
    } catch {
      // non-JSON error body; keep the generic message
    }
    throw new ApiError(code, message, response.status);
  }
  return (await response.json()) as RfcResponse;
}
