// Session flow: create session -> tutorial -> teaching loop -> end screen.
// The app mirrors server state only; every score, valence and grid comes
// from iteration responses, and requests are serialized by disabling the
// submit button until the response lands.

import {
  ApiRequestError,
  TeachingApi,
  type Condition,
  type IterationResponse,
  type TokenJson,
} from './api.js';
import { FeedbackPanel } from './feedback.js';
import { GridView } from './gridview.js';
import { IntentionInput } from './intention.js';
import { PaletteView } from './palette.js';
import { Tutorial } from './tutorial.js';

export interface AppConfig {
  apiBase?: string;
  condition: Condition;
  seed?: number;
  maxIterations?: number;
  demoInterval?: number;
  skipTutorial?: boolean;
}

interface UiSession {
  id: string;
  condition: Condition;
  d: number;
  remaining: number;
  maxIterations: number;
  status: string;
}

export class TeachingApp {
  private readonly api: TeachingApi;
  private session: UiSession | null = null;
  private palette!: PaletteView;
  private intention!: IntentionInput;
  private feedback!: FeedbackPanel;
  private gridView!: GridView;
  private submitButton!: HTMLButtonElement;
  private counter!: HTMLElement;
  private busy = false;

  constructor(
    private readonly root: HTMLElement,
    private readonly config: AppConfig,
  ) {
    this.api = new TeachingApi(config.apiBase ?? '');
  }

  async start(): Promise<void> {
    const created = await this.api.createSession({
      condition: this.config.condition,
      ...(this.config.seed !== undefined ? { seed: this.config.seed } : {}),
      ...(this.config.maxIterations !== undefined
        ? { max_iterations: this.config.maxIterations }
        : {}),
      ...(this.config.demoInterval !== undefined
        ? { demo_interval: this.config.demoInterval }
        : {}),
    });
    this.session = {
      id: created.id,
      condition: created.condition,
      d: 0,
      remaining: created.max_iterations,
      maxIterations: created.max_iterations,
      status: 'active',
    };
    if (this.config.skipTutorial) {
      this.renderTeachingScreen();
    } else {
      new Tutorial(this.root, () => this.renderTeachingScreen()).start();
    }
  }

  get sessionId(): string | null {
    return this.session?.id ?? null;
  }

  private renderTeachingScreen(): void {
    this.root.replaceChildren();
    const screen = document.createElement('div');
    screen.dataset.role = 'teaching-screen';
    screen.dataset.condition = this.config.condition;

    this.counter = document.createElement('div');
    this.counter.dataset.role = 'iteration-counter';
    screen.appendChild(this.counter);

    // the button exists before the inputs because their constructors
    // immediately report their (empty) state through syncSubmit
    this.submitButton = document.createElement('button');
    this.submitButton.type = 'button';
    this.submitButton.id = 'submit';
    this.submitButton.dataset.role = 'submit';
    this.submitButton.textContent = 'Present to the robot';
    this.submitButton.addEventListener('click', () => {
      void this.submit();
    });

    const teachingArea = document.createElement('div');
    teachingArea.className = 'teaching-area';
    this.palette = new PaletteView(teachingArea, () => this.syncSubmit());
    this.intention = new IntentionInput(teachingArea, () => this.syncSubmit());
    teachingArea.appendChild(this.submitButton);
    screen.appendChild(teachingArea);

    const feedbackArea = document.createElement('div');
    feedbackArea.className = 'feedback-area';
    this.feedback = new FeedbackPanel(feedbackArea);
    this.gridView = new GridView(feedbackArea);
    screen.appendChild(feedbackArea);

    this.root.appendChild(screen);
    this.updateCounter();
    this.syncSubmit();
  }

  private updateCounter(): void {
    if (!this.session) return;
    this.counter.textContent = `Iteration ${this.session.d} of ${this.session.maxIterations}`;
    this.counter.dataset.d = String(this.session.d);
  }

  private canSubmit(): boolean {
    return (
      !this.busy &&
      this.session !== null &&
      this.session.status === 'active' &&
      this.palette.selection().length === 3 &&
      this.intention.isValid()
    );
  }

  private syncSubmit(): void {
    this.submitButton.disabled = !this.canSubmit();
  }

  async submit(): Promise<void> {
    if (!this.session || !this.canSubmit()) return;
    this.busy = true;
    this.syncSubmit();
    try {
      const response = await this.api.submitIteration(
        this.session.id,
        this.palette.selection(),
        this.intention.value(),
      );
      this.applyResponse(response);
    } catch (error) {
      if (error instanceof ApiRequestError) {
        this.feedback.renderError(error.detail);
      } else {
        this.feedback.renderError(String(error));
      }
    } finally {
      this.busy = false;
      if (this.session.status === 'active') {
        this.syncSubmit();
      }
    }
  }

  private applyResponse(response: IterationResponse): void {
    if (!this.session) return;
    this.session.d = response.d;
    this.session.remaining = response.remaining_iterations;
    this.session.status = response.status;

    this.updateCounter();
    this.feedback.render(response.feedback);
    if (response.demonstration) {
      this.gridView.show(
        response.demonstration,
        'The robot fills the grid with what it knows so far:',
      );
    } else {
      this.gridView.hide();
    }
    this.palette.reset();
    this.intention.clear();

    if (response.status !== 'active') {
      this.renderEndScreen(response);
    }
  }

  private renderEndScreen(response: IterationResponse): void {
    const success = response.status === 'completed_success';
    const screen = document.createElement('div');
    screen.dataset.role = 'end-screen';
    screen.dataset.outcome = success ? 'success' : 'exhausted';
    screen.className = 'end-screen';

    const heading = document.createElement('h2');
    heading.textContent = success
      ? 'Teaching complete!'
      : 'Session over';
    const body = document.createElement('p');
    body.textContent = success
      ? `You taught the robot everything it needs in ${response.d} iterations.`
      : 'The 25 iterations are used up; the robot did not learn everything. Thanks for teaching!';
    screen.append(heading, body);

    this.submitButton.disabled = true;
    this.root.appendChild(screen);
  }
}
