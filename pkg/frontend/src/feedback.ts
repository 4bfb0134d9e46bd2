// Condition-appropriate feedback rendering.
// Score elements exist in the DOM only when the server sent scores
// (mmm condition); the client renders exactly what it was given and
// computes nothing itself.

import type { FeedbackBody } from './api.js';

const VALENCE_ICON: Record<string, string> = {
  positive: '✔',
  mixed: '◐',
  negative: '✘',
};

export class FeedbackPanel {
  private readonly panel: HTMLElement;

  constructor(root: HTMLElement) {
    this.panel = document.createElement('div');
    this.panel.dataset.role = 'feedback-panel';
    this.panel.className = 'feedback';
    root.appendChild(this.panel);
  }

  clear(): void {
    this.panel.replaceChildren();
    this.panel.removeAttribute('data-valence');
  }

  render(feedback: FeedbackBody): void {
    this.clear();

    if (feedback.valence !== undefined) {
      this.panel.dataset.valence = feedback.valence;
      const valence = document.createElement('span');
      valence.dataset.role = 'valence';
      valence.className = `valence valence-${feedback.valence}`;
      valence.textContent = `${VALENCE_ICON[feedback.valence] ?? ''} ${feedback.valence}`;
      this.panel.appendChild(valence);
    }

    if (feedback.s_d !== undefined) {
      const score = document.createElement('span');
      score.dataset.role = 'score';
      score.textContent = `mismatch ${feedback.s_d.toFixed(4)}`;
      this.panel.appendChild(score);
    }

    if (feedback.s_cum !== undefined) {
      // alignment bar: full width means no accumulated mismatch
      const bar = document.createElement('div');
      bar.dataset.role = 'cumulative-bar';
      bar.className = 'cumulative-bar';
      const fill = document.createElement('div');
      fill.className = 'cumulative-fill';
      fill.style.width = `${Math.round((1 - feedback.s_cum) * 100)}%`;
      bar.appendChild(fill);
      bar.title = `running mismatch ${feedback.s_cum.toFixed(4)}`;
      this.panel.appendChild(bar);
    }

    const message = document.createElement('p');
    message.dataset.role = 'feedback-message';
    message.textContent =
      feedback.message !== '' ? feedback.message : 'Iteration recorded.';
    this.panel.appendChild(message);
  }

  renderError(detail: string): void {
    this.clear();
    const error = document.createElement('p');
    error.dataset.role = 'error';
    error.className = 'error';
    error.textContent = detail;
    this.panel.appendChild(error);
  }
}
