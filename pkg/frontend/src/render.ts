/** DOM builders. Everything shown comes straight from API fields. */

import type { SessionReport } from './api.js';
import type { ChatTurn } from './state.js';

export const PRESET_QUESTIONS = [
  'How many waypoints were received during the navigation task?',
  'Which were the IDs of the waypoints received during the navigation task?',
  'Were all the waypoints received successfully reached?',
  'What happened during navigation to waypoint with ID 6?',
  'Why was the route replanned during navigation to waypoint with ID 6?',
  'Have any relevant events occurred during navigation?',
  'What is the task that the robot had to perform?',
  'Did the robot avoid any obstacles during the navigation?',
];

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function contextPanel(doc: Document, turn: ChatTurn): HTMLElement {
  const details = el(doc, 'details', 'context-panel');
  const summary = el(doc, 'summary', undefined, `supporting logs (${turn.context_lines.length})`);
  details.appendChild(summary);
  const list = el(doc, 'ul', 'context-lines');
  for (const line of turn.context_lines) {
    const item = el(doc, 'li', 'context-line');
    item.appendChild(el(doc, 'span', 'context-ts', line.ts_iso));
    item.appendChild(el(doc, 'span', 'context-msg', line.msg));
    list.appendChild(item);
  }
  details.appendChild(list);
  return details;
}

export function renderTurn(
  doc: Document,
  turn: ChatTurn,
  onRetry: (question: string) => void,
): HTMLElement {
  const root = el(doc, 'section', `turn turn-${turn.status.toLowerCase()}`);
  root.appendChild(el(doc, 'div', 'bubble question-bubble', turn.question));

  if (turn.status === 'OK') {
    root.appendChild(el(doc, 'div', 'bubble answer-bubble', turn.answer));
  } else if (turn.status === 'BACKEND_DOWN') {
    root.appendChild(
      el(doc, 'div', 'banner backend-down-banner',
        `answer unavailable: ${turn.notice ?? 'completion backend is down'}`),
    );
  } else {
    root.appendChild(el(doc, 'div', 'banner error-banner', turn.notice ?? 'request failed'));
    const retry = el(doc, 'button', 'retry-button', 'retry');
    retry.type = 'button';
    retry.addEventListener('click', () => onRetry(turn.question));
    root.appendChild(retry);
  }

  if (turn.context_lines.length > 0) {
    root.appendChild(contextPanel(doc, turn));
  }
  if (turn.question_time_s !== null) {
    root.appendChild(
      el(doc, 'span', 'latency-badge', `${turn.question_time_s.toFixed(2)} s`),
    );
  }
  return root;
}

export function renderHistory(
  doc: Document,
  container: HTMLElement,
  turns: readonly ChatTurn[],
  onRetry: (question: string) => void,
): void {
  container.replaceChildren();
  for (const turn of turns) {
    container.appendChild(renderTurn(doc, turn, onRetry));
  }
}

export function renderNotice(doc: Document, container: HTMLElement, text: string): void {
  container.replaceChildren(el(doc, 'div', 'notice', text));
}

export function clearNotice(container: HTMLElement): void {
  container.replaceChildren();
}

export function renderSessionPanel(
  doc: Document,
  container: HTMLElement,
  report: SessionReport | null,
): void {
  container.replaceChildren();
  if (report === null) {
    container.appendChild(el(doc, 'div', 'panel-unreachable', 'service unreachable'));
    return;
  }
  const stats = report.ingest;
  const counts = el(doc, 'dl', 'session-counts');
  const pairs: Array<[string, string]> = [
    ['session', report.session_id],
    ['logs received', String(stats.received)],
    ['deduplicated', String(stats.deduplicated)],
    ['embeddings processed', String(stats.processed)],
    ['queue depth', String(stats.queue_depth)],
    ['processing time (s)', stats.processing_time.toFixed(3)],
  ];
  for (const [label, value] of pairs) {
    counts.appendChild(el(doc, 'dt', undefined, label));
    counts.appendChild(el(doc, 'dd', undefined, value));
  }
  container.appendChild(counts);

  if (report.questions.length > 0) {
    const timings = el(doc, 'table', 'question-timings');
    const head = el(doc, 'tr');
    head.appendChild(el(doc, 'th', undefined, 'question'));
    head.appendChild(el(doc, 'th', undefined, 'time (s)'));
    timings.appendChild(head);
    for (const q of report.questions) {
      const row = el(doc, 'tr', 'timing-row');
      row.appendChild(el(doc, 'td', undefined, q.question));
      row.appendChild(el(doc, 'td', undefined, q.question_time.toFixed(3)));
      timings.appendChild(row);
    }
    container.appendChild(timings);
  }
}

export function renderPresets(
  doc: Document,
  container: HTMLElement,
  onPick: (question: string) => void,
): void {
  container.replaceChildren();
  PRESET_QUESTIONS.forEach((question, i) => {
    const button = el(doc, 'button', 'preset-button', `UQ${i + 1}`);
    button.type = 'button';
    button.title = question;
    button.addEventListener('click', () => onPick(question));
    container.appendChild(button);
  });
}
