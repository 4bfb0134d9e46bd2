// Static multi-step walkthrough shown before the first iteration.
// Content lives here as fixed data; dev mode (or ?skipTutorial=1) skips it.

export interface TutorialStep {
  title: string;
  body: string;
}

export const TUTORIAL_STEPS: TutorialStep[] = [
  {
    title: 'The puzzle',
    body:
      'The RiddleBot wants to fill a 3x3 grid with tokens so that every ' +
      'color, shape and size appears exactly once in each row and column. ' +
      'It is able to do this, but it does not know the rules yet.',
  },
  {
    title: 'Tokens',
    body:
      'There are 27 tokens: three colors, three shapes and three sizes in ' +
      'every combination. You teach by picking exactly three of them and ' +
      'presenting them together.',
  },
  {
    title: 'How the robot learns',
    body:
      'The robot only looks at the three tokens you present. Shared or ' +
      'contrasting features among them are what it can pick up concepts ' +
      'from. It never reads your words.',
  },
  {
    title: 'Your intention',
    body:
      'Each round, also write what you are trying to teach, in at most ten ' +
      'words. A separate supervisor reads it; depending on your group it ' +
      'may use it to give you feedback.',
  },
  {
    title: 'The session',
    body:
      'You have 25 teaching rounds. Every fifth round the robot fills the ' +
      'grid to show what it has understood so far. Teach it everything and ' +
      'the session ends early with a success screen.',
  },
];

export class Tutorial {
  private index = 0;
  private container: HTMLElement | null = null;

  constructor(
    private readonly root: HTMLElement,
    private readonly onFinished: () => void,
  ) {}

  start(): void {
    this.container = document.createElement('div');
    this.container.dataset.role = 'tutorial';
    this.container.className = 'tutorial';
    this.root.appendChild(this.container);
    this.renderStep();
  }

  private renderStep(): void {
    if (!this.container) return;
    const step = TUTORIAL_STEPS[this.index];
    if (!step) return;
    this.container.replaceChildren();

    const heading = document.createElement('h2');
    heading.textContent = `${step.title} (${this.index + 1}/${TUTORIAL_STEPS.length})`;
    const body = document.createElement('p');
    body.textContent = step.body;

    const nav = document.createElement('div');
    nav.className = 'tutorial-nav';
    if (this.index > 0) {
      const back = document.createElement('button');
      back.type = 'button';
      back.textContent = 'Back';
      back.addEventListener('click', () => {
        this.index -= 1;
        this.renderStep();
      });
      nav.appendChild(back);
    }
    const next = document.createElement('button');
    next.type = 'button';
    next.dataset.role = 'tutorial-next';
    next.textContent = this.index === TUTORIAL_STEPS.length - 1 ? 'Start teaching' : 'Next';
    next.addEventListener('click', () => {
      if (this.index === TUTORIAL_STEPS.length - 1) {
        this.finish();
      } else {
        this.index += 1;
        this.renderStep();
      }
    });
    nav.appendChild(next);

    this.container.append(heading, body, nav);
  }

  private finish(): void {
    this.container?.remove();
    this.container = null;
    this.onFinished();
  }
}
