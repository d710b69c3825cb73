// Wire types for POST /v1/related, field-for-field with the service.

export interface RfcRequest {
  url?: string;
  title?: string;
  body?: string;
  max_results?: number;
}

export interface FactCheckRow {
  url: string;
  publisher: string;
  title: string;
  claim_reviewed: string;
  rating_label: string | null;
  score: number;
}

export interface RelatedArticleRow {
  url: string;
  site: string;
  title: string;
}

export interface Diagnostics {
  n_scored: number;
  threshold: number;
  elapsed_ms: number;
}

export interface RfcResponse {
  fact_checks: FactCheckRow[];
  related_articles: RelatedArticleRow[];
  diagnostics: Diagnostics;
}

export interface PageCapture {
  url: string;
  title: string;
  text_excerpt: string;
}
