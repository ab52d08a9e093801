/** Wires the chat UI to the service: one in-flight question at a time,
 * session-report polling, preset questions, reset. */

import { ApiClient } from './api.js';
import type { QueryOutcome, SessionReport } from './api.js';
import { ChatHistory, turnFromOutcome } from './state.js';
import {
  clearNotice,
  renderHistory,
  renderNotice,
  renderPresets,
  renderSessionPanel,
} from './render.js';

export interface AppElements {
  form: HTMLFormElement;
  input: HTMLInputElement;
  send: HTMLButtonElement;
  chat: HTMLElement;
  notice: HTMLElement;
  presets: HTMLElement;
  sessionPanel: HTMLElement;
  resetButton: HTMLButtonElement;
  apiLabel: HTMLElement;
}

export interface AppOptions {
  pollIntervalMs?: number;
  storage?: Storage | null;
}

/** What the app needs from the service client (ApiClient satisfies it). */
export interface ApiLike {
  readonly baseUrl: string;
  query(question: string, k?: number, lambda?: number): Promise<QueryOutcome>;
  report(): Promise<SessionReport>;
  reset(): Promise<void>;
}

export function resolveApiBase(win: Pick<Window, 'location'>): string {
  const params = new URLSearchParams(win.location.search);
  return params.get('api') ?? 'http://127.0.0.1:8080';
}

export class App {
  readonly history: ChatHistory;
  private busy = false;
  private pollTimer: ReturnType<typeof setInterval> | null = null;

  constructor(
    private doc: Document,
    private els: AppElements,
    private api: ApiLike,
    options: AppOptions = {},
  ) {
    this.history = new ChatHistory(
      options.storage === undefined ? null : options.storage,
    );
    this.els.apiLabel.textContent = api.baseUrl;
    this.els.form.addEventListener('submit', (ev) => {
      ev.preventDefault();
      void this.ask(this.els.input.value);
    });
    this.els.resetButton.addEventListener('click', () => void this.reset());
    renderPresets(this.doc, this.els.presets, (q) => {
      this.els.input.value = q;
      this.els.input.focus();
    });
    this.redraw();
    void this.refreshReport();
    const interval = options.pollIntervalMs ?? 3000;
    if (interval > 0) {
      this.pollTimer = setInterval(() => void this.refreshReport(), interval);
    }
  }

  dispose(): void {
    if (this.pollTimer !== null) clearInterval(this.pollTimer);
  }

  private setBusy(busy: boolean): void {
    this.busy = busy;
    this.els.input.disabled = busy;
    this.els.send.disabled = busy;
  }

  async ask(raw: string): Promise<void> {
    const question = raw.trim();
    if (question === '' || this.busy) return;
    clearNotice(this.els.notice);
    this.setBusy(true);
    try {
      const outcome = await this.api.query(question);
      const turn = turnFromOutcome(question, outcome);
      if (turn === null) {
        const text =
          outcome.kind === 'empty_store'
            ? 'no logs ingested yet'
            : `rejected: ${'message' in outcome ? outcome.message : 'bad request'}`;
        renderNotice(this.doc, this.els.notice, text);
      } else {
        this.history.append(turn);
        this.els.input.value = '';
      }
    } finally {
      this.setBusy(false);
      this.redraw();
      void this.refreshReport();
    }
  }

  async reset(): Promise<void> {
    try {
      await this.api.reset();
    } catch (err) {
      renderNotice(this.doc, this.els.notice, `reset failed: ${String(err)}`);
      return;
    }
    this.history.clear();
    clearNotice(this.els.notice);
    this.redraw();
    void this.refreshReport();
  }

  async refreshReport(): Promise<void> {
    try {
      const report = await this.api.report();
      renderSessionPanel(this.doc, this.els.sessionPanel, report);
      if (!this.busy) {
        this.els.input.disabled = false;
        this.els.send.disabled = false;
      }
    } catch {
      renderSessionPanel(this.doc, this.els.sessionPanel, null);
      // unreachable service: chat stays disabled until a poll succeeds
      this.els.input.disabled = true;
      this.els.send.disabled = true;
    }
  }

  private redraw(): void {
    renderHistory(this.doc, this.els.chat, this.history.list(), (q) => void this.ask(q));
  }
}

export function collectElements(doc: Document): AppElements {
  const byId = <T extends HTMLElement>(id: string): T => {
    const node = doc.getElementById(id);
    if (!node) throw new Error(`missing #${id}`);
    return node as T;
  };
  return {
    form: byId<HTMLFormElement>('ask-form'),
    input: byId<HTMLInputElement>('question-input'),
    send: byId<HTMLButtonElement>('send-button'),
    chat: byId('chat'),
    notice: byId('notice'),
    presets: byId('presets'),
    sessionPanel: byId('session-panel'),
    resetButton: byId<HTMLButtonElement>('reset-button'),
    apiLabel: byId('api-label'),
  };
}

export function start(win: Window & typeof globalThis): App {
  const api = new ApiClient(resolveApiBase(win));
  return new App(win.document, collectElements(win.document), api, {
    storage: win.sessionStorage,
  });
}

declare global {
  interface Window {
    logexplainApp?: App;
  }
}

if (typeof window !== 'undefined' && typeof document !== 'undefined' && document.getElementById('ask-form')) {
  window.logexplainApp = start(window);
}
