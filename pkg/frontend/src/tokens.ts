// The 27-token universe and its vector rendering.
// Sizes scale the glyph to 60/80/100%; the palette is colorblind-safe.

import type { TokenJson } from './api.js';

export const COLORS = ['blue', 'red', 'yellow'] as const;
export const SHAPES = ['circle', 'square', 'triangle'] as const;
export const SIZES = ['small', 'medium', 'large'] as const;

const FILL: Record<string, string> = {
  blue: '#0072b2',
  red: '#d55e00',
  yellow: '#f0e442',
};

const SCALE: Record<string, number> = {
  small: 0.6,
  medium: 0.8,
  large: 1.0,
};

export function allTokens(): TokenJson[] {
  const tokens: TokenJson[] = [];
  for (const color of COLORS) {
    for (const shape of SHAPES) {
      for (const size of SIZES) {
        tokens.push({ color, shape, size });
      }
    }
  }
  return tokens;
}

export function tokenId(token: TokenJson): string {
  return `${token.color}-${token.shape}-${token.size}`;
}

const SVG_NS = 'http://www.w3.org/2000/svg';

/** A token glyph as an inline SVG element sized to `box` pixels. */
export function tokenSvg(token: TokenJson, box = 40): SVGSVGElement {
  const svg = document.createElementNS(SVG_NS, 'svg');
  svg.setAttribute('viewBox', '0 0 100 100');
  svg.setAttribute('width', String(box));
  svg.setAttribute('height', String(box));
  svg.classList.add('token-glyph');

  const scale = SCALE[token.size] ?? 1.0;
  const fill = FILL[token.color] ?? '#888';
  const half = 45 * scale;

  let shape: SVGElement;
  if (token.shape === 'circle') {
    shape = document.createElementNS(SVG_NS, 'circle');
    shape.setAttribute('cx', '50');
    shape.setAttribute('cy', '50');
    shape.setAttribute('r', String(half));
  } else if (token.shape === 'square') {
    shape = document.createElementNS(SVG_NS, 'rect');
    shape.setAttribute('x', String(50 - half));
    shape.setAttribute('y', String(50 - half));
    shape.setAttribute('width', String(2 * half));
    shape.setAttribute('height', String(2 * half));
  } else {
    shape = document.createElementNS(SVG_NS, 'polygon');
    const points = [
      `${50},${50 - half}`,
      `${50 - half},${50 + half}`,
      `${50 + half},${50 + half}`,
    ];
    shape.setAttribute('points', points.join(' '));
  }
  shape.setAttribute('fill', fill);
  shape.setAttribute('stroke', '#333');
  shape.setAttribute('stroke-width', '3');
  svg.appendChild(shape);
  svg.setAttribute('aria-label', tokenId(token));
  return svg;
}
