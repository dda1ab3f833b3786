import {
  ApiError,
  Example,
  FeedbackClient,
  FeedbackResponse,
  LineSuggestion,
} from "./api.js";

export const EXAMPLE_CAP = 10;

export interface LineState {
  suggestion: LineSuggestion;
  examples: Example[];
  hasMore: boolean;
  loading: boolean;
}

export interface WorkbenchState {
  source: string;
  compiling: boolean;
  response: FeedbackResponse | null;
  lines: Map<number, LineState>;
  banner: string | null;
}

type Client = Pick<FeedbackClient, "feedback" | "moreExamples">;

export class WorkbenchStore {
  state: WorkbenchState = {
    source: "",
    compiling: false,
    response: null,
    lines: new Map(),
    banner: null,
  };

  private listeners: Array<() => void> = [];
  private pending: AbortController | null = null;
  private pageRequests = new Set<AbortController>();

  constructor(private client: Client) {}

  subscribe(fn: () => void): void {
    this.listeners.push(fn);
  }

  private notify(): void {
    for (const fn of this.listeners) fn();
  }

  setSource(source: string): void {
    this.state.source = source;
  }

  canRequestMore(lineNo: number): boolean {
    const line = this.state.lines.get(lineNo);
    if (!line) return false;
    return line.hasMore && !line.loading && line.examples.length < EXAMPLE_CAP;
  }

  /** POST the buffer; on success replace all panes and reset pagination. */
  async compileAndShow(): Promise<void> {
    this.pending?.abort();
    for (const req of this.pageRequests) req.abort();
    this.pageRequests.clear();
    const controller = new AbortController();
    this.pending = controller;
    this.state.compiling = true;
    this.state.banner = null;
    this.notify();
    try {
      const response = await this.client.feedback(this.state.source, controller.signal);
      if (controller.signal.aborted) return;
      this.state.response = response;
      this.state.lines = new Map(
        response.suggestions.map((s) => [
          s.line_no,
          {
            suggestion: s,
            examples: [...s.examples],
            hasMore: s.has_more,
            loading: false,
          },
        ]),
      );
    } catch (err) {
      if (controller.signal.aborted) return;
      // leave panes unchanged; surface the failure in the banner
      this.state.banner =
        err instanceof ApiError ? err.message : "service unreachable";
    } finally {
      if (this.pending === controller) {
        this.pending = null;
        this.state.compiling = false;
      }
      this.notify();
    }
  }

  /** Fetch the next example page for one erroneous line. */
  async more(lineNo: number): Promise<void> {
    const line = this.state.lines.get(lineNo);
    if (!line || !this.canRequestMore(lineNo)) return;
    const controller = new AbortController();
    this.pageRequests.add(controller);
    line.loading = true;
    this.notify();
    try {
      const page = await this.client.moreExamples(
        line.suggestion.line_token,
        line.examples.length,
        controller.signal,
      );
      // a compile may have replaced the pane while this request was in flight
      if (controller.signal.aborted || this.state.lines.get(lineNo) !== line) return;
      line.examples.push(...page.examples);
      line.hasMore = page.has_more && line.examples.length < EXAMPLE_CAP;
    } catch (err) {
      if (controller.signal.aborted || this.state.lines.get(lineNo) !== line) return;
      if (err instanceof ApiError && (err.status === 410 || err.status === 404)) {
        line.hasMore = false;
      } else {
        this.state.banner =
          err instanceof ApiError ? err.message : "service unreachable";
      }
    } finally {
      this.pageRequests.delete(controller);
      line.loading = false;
      this.notify();
    }
  }
}
