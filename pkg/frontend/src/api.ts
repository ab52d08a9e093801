/** Typed client for the logexplain HTTP service. The UI never computes
 * anything from these payloads; every displayed value is an API field. */

export interface ContextLine {
  ts_iso: string;
  msg: string;
}

export interface QueryOk {
  kind: 'ok';
  answer: string;
  context_lines: ContextLine[];
  question_time_s: number;
  backend_latency_s: number;
}

export interface QueryBackendDown {
  kind: 'backend_down';
  message: string;
  context_lines: ContextLine[];
  question_time_s: number | null;
}

export interface QueryRejected {
  kind: 'empty_store' | 'bad_request';
  message: string;
}

export interface QueryNetworkError {
  kind: 'network_error';
  message: string;
}

export type QueryOutcome = QueryOk | QueryBackendDown | QueryRejected | QueryNetworkError;

export interface IngestStats {
  received: number;
  deduplicated: number;
  processed: number;
  queue_depth: number;
  processing_time: number;
}

export interface ReportQuestion {
  question: string;
  answer: string;
  question_time: number;
  backend_latency: number;
}

export interface SessionReport {
  session_id: string;
  execution_time: number;
  ingest: IngestStats;
  questions: ReportQuestion[];
}

interface WireContextEntry {
  ts: string;
  msg: string;
}

function toContextLines(raw: unknown): ContextLine[] {
  if (!Array.isArray(raw)) return [];
  return (raw as WireContextEntry[]).map((c) => ({ ts_iso: c.ts, msg: c.msg }));
}

export class ApiClient {
  constructor(readonly baseUrl: string) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/+$/, '') + path;
  }

  async query(question: string, k?: number, lambda?: number): Promise<QueryOutcome> {
    const body: Record<string, unknown> = { question };
    if (k !== undefined) body.k = k;
    if (lambda !== undefined) body.lambda = lambda;
    let res: Response;
    try {
      res = await fetch(this.url('/v1/query'), {
        method: 'POST',
        headers: { 'Content-Type': 'application/json' },
        body: JSON.stringify(body),
      });
    } catch (err) {
      return { kind: 'network_error', message: String(err) };
    }
    let payload: Record<string, unknown>;
    try {
      payload = await res.json();
    } catch {
      return { kind: 'network_error', message: `bad response (${res.status})` };
    }
    if (res.ok) {
      return {
        kind: 'ok',
        answer: String(payload.answer ?? ''),
        context_lines: toContextLines(payload.context),
        question_time_s: Number(payload.question_time_s ?? 0),
        backend_latency_s: Number(payload.backend_latency_s ?? 0),
      };
    }
    const message = String(payload.message ?? `HTTP ${res.status}`);
    if (res.status === 502) {
      return {
        kind: 'backend_down',
        message,
        context_lines: toContextLines(payload.context),
        question_time_s:
          payload.question_time_s === undefined ? null : Number(payload.question_time_s),
      };
    }
    if (res.status === 409) return { kind: 'empty_store', message };
    return { kind: 'bad_request', message };
  }

  async report(): Promise<SessionReport> {
    const res = await fetch(this.url('/v1/report'));
    if (!res.ok) throw new Error(`report failed: HTTP ${res.status}`);
    return (await res.json()) as SessionReport;
  }

  async reset(): Promise<void> {
    const res = await fetch(this.url('/v1/reset'), { method: 'POST' });
    if (!res.ok) throw new Error(`reset failed: HTTP ${res.status}`);
  }

  async health(): Promise<{ ok: boolean; backend_ok: boolean }> {
    const res = await fetch(this.url('/v1/health'));
    if (!res.ok) throw new Error(`health failed: HTTP ${res.status}`);
    return (await res.json()) as { ok: boolean; backend_ok: boolean };
  }
}
