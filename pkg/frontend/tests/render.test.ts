import { beforeEach, describe, expect, it } from "vitest";

import { render, renderError } from "../src/render";
import type { RfcResponse } from "../src/types";

function response(nChecks: number, nStories: number): RfcResponse {
  return {
    fact_checks: Array.from({ length: nChecks }, (_, i) => ({
      url: `https://checker.example/fc${i}`,
      publisher: "checker.example",
      title: `Fact check ${i}`,
      claim_reviewed: `Claim number ${i}.`,
      rating_label: i === 0 ? "Pants on Fire" : "False",
      score: 1 - i / 10,
    })),
    related_articles: Array.from({ length: nStories }, (_, i) => ({
      url: `https://dubious.example/story${i}`,
      site: "dubious.example",
      title: `Story ${i}`,
    })),
    diagnostics: { n_scored: 13, threshold: 0.35, elapsed_ms: 2 },
  };
}

describe("render", () => {
  let container: HTMLElement;

  beforeEach(() => {
    document.body.innerHTML = '<div id="results"></div>';
    container = document.getElementById("results")!;
  });

  it("renders fact check rows in server order, stories below", () => {
    render(response(5, 2), container);
    const checkRows = [...container.querySelectorAll(".rfc-factcheck-row")];
    expect(checkRows).toHaveLength(5);
    expect(checkRows.map((row) => row.querySelector("a")!.textContent)).toEqual([
      "Fact check 0", "Fact check 1", "Fact check 2", "Fact check 3", "Fact check 4",
    ]);
    const storyRows = [...container.querySelectorAll(".rfc-related-row")];
    expect(storyRows).toHaveLength(2);
    expect(storyRows.map((row) => row.querySelector("a")!.textContent)).toEqual([
      "Story 0", "Story 1",
    ]);
    // fact checks section precedes the stories section
    const sections = [...container.querySelectorAll("section")];
    expect(sections.map((s) => s.className)).toEqual(["rfc-factchecks", "rfc-related"]);
  });

  it("links open the original urls", () => {
    render(response(2, 1), container);
    const anchors = [...container.querySelectorAll("a")];
    expect(anchors.map((a) => a.getAttribute("href"))).toEqual([
      "https://checker.example/fc0",
      "https://checker.example/fc1",
      "https://dubious.example/story0",
    ]);
  });

  it("shows the rating label verbatim, never a verdict", () => {
    render(response(1, 0), container);
    expect(container.querySelector(".rfc-rating")!.textContent).toBe("Pants on Fire");
  });

  it("omits the rating badge when the label is missing", () => {
    const payload = response(1, 0);
    payload.fact_checks[0]!.rating_label = null;
    render(payload, container);
    expect(container.querySelector(".rfc-rating")).toBeNull();
  });

  it("omits the stories section when there are none", () => {
    render(response(3, 0), container);
    expect(container.querySelector(".rfc-related")).toBeNull();
  });

  it("renders the empty state for an empty result set", () => {
    render(response(0, 0), container);
    expect(container.querySelector(".rfc-empty")!.textContent).toMatch(/no related fact checks/i);
    expect(container.querySelectorAll("li")).toHaveLength(0);
  });

  it("truncates long claims", () => {
    const payload = response(1, 0);
    payload.fact_checks[0]!.claim_reviewed = "w".repeat(500);
    render(payload, container);
    const claim = container.querySelector(".rfc-claim")!.textContent!;
    expect(claim.length).toBeLessThanOrEqual(240);
    expect(claim.endsWith("…")).toBe(true);
  });

  it("is a pure function of the response", () => {
    render(response(4, 2), container);
    const first = container.innerHTML;
    render(response(1, 0), container); // dirty the container
    render(response(4, 2), container);
    expect(container.innerHTML).toBe(first);
  });

  it("renderError replaces content with a banner", () => {
    render(response(3, 1), container);
    renderError("service unavailable", container);
    expect(container.querySelector(".rfc-error")!.textContent).toBe("service unavailable");
    expect(container.querySelectorAll(".rfc-factcheck-row")).toHaveLength(0);
  });
});
