// Page capture: runs only when the user clicks, never ambiently.

import type { PageCapture } from "./types.js";

export const EXCERPT_CHARS = 20_000;

// injected into the page by chrome.scripting; must be self-contained
export function grabPageText(): { title: string; text: string } {
  const body = document.body;
  return {
    title: document.title ?? "",
    text: (body ? body.innerText : "").slice(0, 20_000),
  };
}

export class CaptureError extends Error {}

type ChromeLike = Pick<typeof chrome, "tabs" | "scripting">;

export async function capturePage(
  chromeApi: ChromeLike = chrome
): Promise<PageCapture> {
  const [tab] = await chromeApi.tabs.query({ active: true, currentWindow: true });
  if (!tab || !tab.id || !tab.url) {
    throw new CaptureError("no active page to check");
  }
  try {
    const [injection] = await chromeApi.scripting.executeScript({
      target: { tabId: tab.id },
      func: grabPageText,
    });
    const result = injection?.result;
    return {
      url: tab.url,
      title: result?.title || tab.title || "",
      text_excerpt: result?.text ?? "",
    };
  } catch {
    // restricted page (no content access): capture the url only
    return { url: tab.url, title: tab.title ?? "", text_excerpt: "" };
  }
}
