import { describe, expect, it } from "vitest";

import { ApiError, Example, FeedbackResponse, LineSuggestion } from "../src/api.js";
import { EXAMPLE_CAP, WorkbenchStore } from "../src/state.js";

function suggestion(lineNo: number, nExamples: number, hasMore = true): LineSuggestion {
  return {
    line_no: lineNo,
    diagnostics: [`error on line ${lineNo}`],
    predicted: [{ class_id: 0, probability: 1 }],
    served_class: 0,
    examples: Array.from({ length: nExamples }, (_, i) => ({
      erroneous: `bad${lineNo}_${i}`,
      repaired: `good${lineNo}_${i}`,
    })),
    has_more: hasMore,
    line_token: `tok${lineNo}`,
  };
}

/** In-memory stand-in for the service: each token pages over a fixed pool. */
class FakeClient {
  pools = new Map<string, Example[]>();
  feedbackResponse: FeedbackResponse = {
    compiled_ok: true,
    diagnostics: [],
    suggestions: [],
  };
  failFeedback = false;

  setSuggestions(suggestions: LineSuggestion[], poolSize: number): void {
    this.feedbackResponse = {
      compiled_ok: suggestions.length === 0,
      diagnostics: suggestions.map((s) => ({
        line: s.line_no,
        message: s.diagnostics[0],
      })),
      suggestions,
    };
    for (const s of suggestions) {
      this.pools.set(
        s.line_token,
        Array.from({ length: poolSize }, (_, i) => ({
          erroneous: `bad${s.line_no}_${i}`,
          repaired: `good${s.line_no}_${i}`,
        })),
      );
    }
  }

  async feedback(_source: string): Promise<FeedbackResponse> {
    if (this.failFeedback) throw new TypeError("fetch failed");
    return structuredClone(this.feedbackResponse);
  }

  async moreExamples(token: string, offset: number) {
    const pool = this.pools.get(token);
    if (!pool) throw new ApiError(404, "unknown line token");
    if (offset >= EXAMPLE_CAP) throw new ApiError(410, "example cap reached");
    const examples = pool.slice(offset, offset + 1);
    return { examples, has_more: offset + 1 < pool.length };
  }
}

describe("compileAndShow", () => {
  it("populates one line state per suggestion", async () => {
    const client = new FakeClient();
    client.setSuggestions([suggestion(5, 1), suggestion(6, 1), suggestion(7, 1)], 4);
    const store = new WorkbenchStore(client);
    store.setSource("int main() {}");
    await store.compileAndShow();
    expect([...store.state.lines.keys()]).toEqual([5, 6, 7]);
    expect(store.state.response?.compiled_ok).toBe(false);
  });

  it("clean program leaves the tutor state empty", async () => {
    const store = new WorkbenchStore(new FakeClient());
    await store.compileAndShow();
    expect(store.state.lines.size).toBe(0);
    expect(store.state.response?.compiled_ok).toBe(true);
  });

  it("resets pagination on recompile", async () => {
    const client = new FakeClient();
    client.setSuggestions([suggestion(3, 1)], 6);
    const store = new WorkbenchStore(client);
    await store.compileAndShow();
    await store.more(3);
    await store.more(3);
    expect(store.state.lines.get(3)!.examples).toHaveLength(3);
    await store.compileAndShow();
    expect(store.state.lines.get(3)!.examples).toHaveLength(1);
  });

  it("network failure sets the banner and keeps panes", async () => {
    const client = new FakeClient();
    client.setSuggestions([suggestion(3, 1)], 2);
    const store = new WorkbenchStore(client);
    await store.compileAndShow();
    client.failFeedback = true;
    await store.compileAndShow();
    expect(store.state.banner).toBe("service unreachable");
    expect(store.state.lines.get(3)!.examples).toHaveLength(1);
  });
});

describe("more", () => {
  it("appends one example per request", async () => {
    const client = new FakeClient();
    client.setSuggestions([suggestion(8, 1)], 5);
    const store = new WorkbenchStore(client);
    await store.compileAndShow();
    await store.more(8);
    await store.more(8);
    const line = store.state.lines.get(8)!;
    expect(line.examples.map((e) => e.erroneous)).toEqual([
      "bad8_0", "bad8_1", "bad8_2",
    ]);
    expect(line.hasMore).toBe(true);
  });

  it("exhausted pool clears hasMore", async () => {
    const client = new FakeClient();
    client.setSuggestions([suggestion(8, 1)], 2);
    const store = new WorkbenchStore(client);
    await store.compileAndShow();
    await store.more(8);
    const line = store.state.lines.get(8)!;
    expect(line.examples).toHaveLength(2);
    expect(line.hasMore).toBe(false);
    expect(store.canRequestMore(8)).toBe(false);
  });

  it("stops at the ten-example cap", async () => {
    const client = new FakeClient();
    client.setSuggestions([suggestion(8, 1)], 50);
    const store = new WorkbenchStore(client);
    await store.compileAndShow();
    while (store.canRequestMore(8)) {
      await store.more(8);
    }
    const line = store.state.lines.get(8)!;
    expect(line.examples).toHaveLength(EXAMPLE_CAP);
    expect(line.hasMore).toBe(false);
  });

  it("410 from the service disables the control", async () => {
    const client = new FakeClient();
    client.setSuggestions([suggestion(8, 1)], 50);
    const store = new WorkbenchStore(client);
    await store.compileAndShow();
    // server-side cap fires even if the client lost count
    store.state.lines.get(8)!.examples.length = 0;
    client.moreExamples = async () => {
      throw new ApiError(410, "example cap reached");
    };
    await store.more(8);
    expect(store.state.lines.get(8)!.hasMore).toBe(false);
  });

  it("ignores lines absent from the latest response", async () => {
    const client = new FakeClient();
    client.setSuggestions([suggestion(8, 1)], 5);
    const store = new WorkbenchStore(client);
    await store.compileAndShow();
    await store.more(99);
    expect(store.state.lines.get(8)!.examples).toHaveLength(1);
  });
});
