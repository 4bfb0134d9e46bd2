// Intention entry with a live word counter.
// Valid between 1 and 10 whitespace-separated words; submission stays
// blocked outside that range.

export const MAX_WORDS = 10;

export function countWords(text: string): number {
  const trimmed = text.trim();
  return trimmed === '' ? 0 : trimmed.split(/\s+/).length;
}

export class IntentionInput {
  readonly input: HTMLInputElement;
  private readonly counter: HTMLElement;
  private readonly hint: HTMLElement;

  constructor(
    root: HTMLElement,
    private readonly onChange: () => void,
  ) {
    const wrapper = document.createElement('div');
    wrapper.className = 'intention';

    const label = document.createElement('label');
    label.htmlFor = 'intention';
    label.textContent = 'What are you trying to teach? (max 10 words)';

    this.input = document.createElement('input');
    this.input.type = 'text';
    this.input.id = 'intention';
    this.input.autocomplete = 'off';
    this.input.addEventListener('input', () => this.sync());

    this.counter = document.createElement('span');
    this.counter.dataset.role = 'word-counter';

    this.hint = document.createElement('span');
    this.hint.dataset.role = 'intention-hint';
    this.hint.className = 'hint';

    wrapper.append(label, this.input, this.counter, this.hint);
    root.appendChild(wrapper);
    this.sync();
  }

  value(): string {
    return this.input.value;
  }

  isValid(): boolean {
    const words = countWords(this.input.value);
    return words >= 1 && words <= MAX_WORDS;
  }

  clear(): void {
    this.input.value = '';
    this.sync();
  }

  private sync(): void {
    const words = countWords(this.input.value);
    this.counter.textContent = `${words}/${MAX_WORDS}`;
    const over = words > MAX_WORDS;
    this.counter.classList.toggle('over-limit', over);
    this.hint.textContent = over
      ? 'Too many words; shorten your intention.'
      : words === 0
        ? 'Describe your intention before submitting.'
        : '';
    this.onChange();
  }
}
