// Token palette plus the three selection slots.
// Exactly three tokens are selectable; a fourth click is rejected by
// disabling every unselected token once three are chosen.

import type { TokenJson } from './api.js';
import { allTokens, tokenId, tokenSvg } from './tokens.js';

export class PaletteView {
  private readonly buttons = new Map<string, HTMLButtonElement>();
  private readonly chosen: TokenJson[] = [];
  private readonly slots: HTMLElement;

  constructor(
    root: HTMLElement,
    private readonly onChange: (selection: TokenJson[]) => void,
  ) {
    const palette = document.createElement('div');
    palette.className = 'palette';
    palette.dataset.role = 'palette';
    for (const token of allTokens()) {
      const button = document.createElement('button');
      button.type = 'button';
      button.className = 'token';
      button.dataset.tokenId = tokenId(token);
      button.appendChild(tokenSvg(token));
      button.addEventListener('click', () => this.toggle(token));
      palette.appendChild(button);
      this.buttons.set(tokenId(token), button);
    }
    this.slots = document.createElement('div');
    this.slots.className = 'slots';
    this.slots.dataset.role = 'slots';
    root.appendChild(palette);
    root.appendChild(this.slots);
    this.renderSlots();
  }

  selection(): TokenJson[] {
    return [...this.chosen];
  }

  reset(): void {
    this.chosen.length = 0;
    this.sync();
  }

  private toggle(token: TokenJson): void {
    const id = tokenId(token);
    const index = this.chosen.findIndex((t) => tokenId(t) === id);
    if (index >= 0) {
      this.chosen.splice(index, 1);
    } else if (this.chosen.length < 3) {
      this.chosen.push(token);
    } else {
      return; // fourth selection rejected
    }
    this.sync();
  }

  private sync(): void {
    const full = this.chosen.length >= 3;
    for (const [id, button] of this.buttons) {
      const selected = this.chosen.some((t) => tokenId(t) === id);
      button.classList.toggle('selected', selected);
      button.disabled = full && !selected;
    }
    this.renderSlots();
    this.onChange(this.selection());
  }

  private renderSlots(): void {
    this.slots.replaceChildren();
    for (let i = 0; i < 3; i++) {
      const slot = document.createElement('div');
      slot.className = 'slot';
      slot.dataset.role = 'slot';
      const token = this.chosen[i];
      if (token) {
        slot.appendChild(tokenSvg(token, 48));
        slot.dataset.filled = 'true';
      } else {
        slot.dataset.filled = 'false';
      }
      this.slots.appendChild(slot);
    }
  }
}
