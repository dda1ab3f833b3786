export interface Diagnostic {
  line: number;
  message: string;
}

export interface Example {
  erroneous: string;
  repaired: string;
}

export interface PredictedClass {
  class_id: number;
  probability: number;
}

export interface LineSuggestion {
  line_no: number;
  diagnostics: string[];
  predicted: PredictedClass[];
  served_class: number;
  examples: Example[];
  has_more: boolean;
  line_token: string;
}

export interface FeedbackResponse {
  compiled_ok: boolean;
  diagnostics: Diagnostic[];
  suggestions: LineSuggestion[];
}

export interface ExamplePage {
  examples: Example[];
  has_more: boolean;
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

export class FeedbackClient {
  constructor(private baseUrl: string) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  async feedback(source: string, signal?: AbortSignal): Promise<FeedbackResponse> {
    const res = await fetch(this.url("/api/feedback"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ source }),
      signal,
    });
    if (!res.ok) {
      throw new ApiError(res.status, `feedback request failed (${res.status})`);
    }
    return res.json();
  }

  async moreExamples(
    lineToken: string,
    offset: number,
    signal?: AbortSignal,
  ): Promise<ExamplePage> {
    const params = new URLSearchParams({
      line_token: lineToken,
      offset: String(offset),
    });
    const res = await fetch(this.url(`/api/examples?${params}`), { signal });
    if (!res.ok) {
      throw new ApiError(res.status, `example request failed (${res.status})`);
    }
    return res.json();
  }

  async health(): Promise<{ status: string; model_version: number; class_count: number }> {
    const res = await fetch(this.url("/api/health"));
    if (!res.ok) {
      throw new ApiError(res.status, `health check failed (${res.status})`);
    }
    return res.json();
  }
}
