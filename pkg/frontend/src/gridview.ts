// The robot's 3x3 demonstration grid. Present in the DOM only while a
// demonstration is being shown.

import type { TokenJson } from './api.js';
import { tokenSvg } from './tokens.js';

export class GridView {
  private grid: HTMLElement | null = null;

  constructor(private readonly root: HTMLElement) {}

  show(cells: TokenJson[], caption: string): void {
    this.hide();
    const wrapper = document.createElement('div');
    wrapper.dataset.role = 'demo-grid';
    wrapper.className = 'demo-grid';

    const title = document.createElement('p');
    title.textContent = caption;
    wrapper.appendChild(title);

    const table = document.createElement('div');
    table.className = 'grid-cells';
    for (const token of cells) {
      const cell = document.createElement('div');
      cell.className = 'grid-cell';
      cell.dataset.role = 'grid-cell';
      cell.appendChild(tokenSvg(token, 44));
      table.appendChild(cell);
    }
    wrapper.appendChild(table);
    this.root.appendChild(wrapper);
    this.grid = wrapper;
  }

  hide(): void {
    this.grid?.remove();
    this.grid = null;
  }
}
