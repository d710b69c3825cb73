// Result rendering: a pure function of the service response. Fact checks
// first, related stories below, row order exactly as the server sent it.

import type { RfcResponse } from "./types.js";

const MAX_CLAIM_CHARS = 240;

function truncate(text: string, limit: number): string {
  return text.length <= limit ? text : text.slice(0, limit - 1).trimEnd() + "…";
}

function link(doc: Document, href: string, text: string, className: string): HTMLAnchorElement {
  const anchor = doc.createElement("a");
  anchor.href = href;
  anchor.target = "_blank";
  anchor.rel = "noopener";
  anchor.textContent = text;
  anchor.className = className;
  return anchor;
}

export function render(response: RfcResponse, container: HTMLElement): void {
  const doc = container.ownerDocument;
  container.replaceChildren();

  if (response.fact_checks.length === 0) {
    const empty = doc.createElement("p");
    empty.className = "rfc-empty";
    empty.textContent = "No related fact checks found for this page.";
    container.append(empty);
    return;
  }

  const checks = doc.createElement("section");
  checks.className = "rfc-factchecks";
  const heading = doc.createElement("h2");
  heading.textContent = "Related fact checks";
  checks.append(heading);
  const list = doc.createElement("ul");
  for (const fc of response.fact_checks) {
    const row = doc.createElement("li");
    row.className = "rfc-factcheck-row";
    row.append(link(doc, fc.url, fc.title, "rfc-title"));

    const meta = doc.createElement("div");
    meta.className = "rfc-meta";
    const publisher = doc.createElement("span");
    publisher.className = "rfc-publisher";
    publisher.textContent = fc.publisher;
    meta.append(publisher);
    if (fc.rating_label) {
      // shown verbatim: the service never converts ratings to a verdict
      const rating = doc.createElement("span");
      rating.className = "rfc-rating";
      rating.textContent = fc.rating_label;
      meta.append(rating);
    }
    row.append(meta);

    const claim = doc.createElement("p");
    claim.className = "rfc-claim";
    claim.textContent = truncate(fc.claim_reviewed, MAX_CLAIM_CHARS);
    row.append(claim);
    list.append(row);
  }
  checks.append(list);
  container.append(checks);

  if (response.related_articles.length === 0) return;

  const stories = doc.createElement("section");
  stories.className = "rfc-related";
  const storiesHeading = doc.createElement("h2");
  storiesHeading.textContent = "Related stories";
  stories.append(storiesHeading);
  const storyList = doc.createElement("ul");
  for (const article of response.related_articles) {
    const row = doc.createElement("li");
    row.className = "rfc-related-row";
    row.append(link(doc, article.url, article.title, "rfc-title"));
    const site = doc.createElement("span");
    site.className = "rfc-site";
    site.textContent = article.site;
    row.append(site);
    storyList.append(row);
  }
  stories.append(storyList);
  container.append(stories);
}

export function renderError(message: string, container: HTMLElement): void {
  container.replaceChildren();
  const banner = container.ownerDocument.createElement("p");
  banner.className = "rfc-error";
  banner.textContent = message;
  container.append(banner);
}
