/** Chat history: one ChatTurn per asked question, persisted for the browser
 * session so a reload keeps the conversation. */

import type { ContextLine, QueryOutcome } from './api.js';

export type TurnStatus = 'OK' | 'BACKEND_DOWN' | 'ERROR';

export interface ChatTurn {
  question: string;
  answer: string;
  context_lines: ContextLine[];
  question_time_s: number | null;
  status: TurnStatus;
  notice?: string;
}

const STORAGE_KEY = 'logexplain.chat.v1';

export function turnFromOutcome(question: string, outcome: QueryOutcome): ChatTurn | null {
  switch (outcome.kind) {
    case 'ok':
      return {
        question,
        answer: outcome.answer,
        context_lines: outcome.context_lines,
        question_time_s: outcome.question_time_s,
        status: 'OK',
      };
    case 'backend_down':
      return {
        question,
        answer: '',
        context_lines: outcome.context_lines,
        question_time_s: outcome.question_time_s,
        status: 'BACKEND_DOWN',
        notice: outcome.message,
      };
    case 'network_error':
      return {
        question,
        answer: '',
        context_lines: [],
        question_time_s: null,
        status: 'ERROR',
        notice: outcome.message,
      };
    case 'empty_store':
    case 'bad_request':
      // rejected before any work happened; surfaced as a notice, not a turn
      return null;
  }
}

export class ChatHistory {
  private turns: ChatTurn[] = [];

  constructor(private storage: Storage | null) {
    if (storage) {
      try {
        const raw = storage.getItem(STORAGE_KEY);
        if (raw) this.turns = JSON.parse(raw) as ChatTurn[];
      } catch {
        this.turns = [];
      }
    }
  }

  list(): readonly ChatTurn[] {
    return this.turns;
  }

  append(turn: ChatTurn): void {
    this.turns.push(turn);
    this.save();
  }

  replaceLast(turn: ChatTurn): void {
    if (this.turns.length === 0) {
      this.append(turn);
      return;
    }
    this.turns[this.turns.length - 1] = turn;
    this.save();
  }

  clear(): void {
    this.turns = [];
    this.storage?.removeItem(STORAGE_KEY);
  }

  private save(): void {
    this.storage?.setItem(STORAGE_KEY, JSON.stringify(this.turns));
  }
}
