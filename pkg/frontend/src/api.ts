// Typed client for the /v1 endpoints of the teaching service.
// The client is a thin transport: it never computes or caches scores,
// it only relays whatever the server chose to expose for the condition.

export type Condition = 'mmm' | 'performance' | 'baseline';

export interface TokenJson {
  color: string;
  shape: string;
  size: string;
}

export interface CreateSessionRequest {
  condition: Condition;
  seed?: number;
  max_iterations?: number;
  demo_interval?: number;
}

export interface CreateSessionResponse {
  id: string;
  condition: Condition;
  max_iterations: number;
  demo_interval: number;
}

export interface FeedbackBody {
  condition: Condition;
  valence?: 'positive' | 'mixed' | 'negative';
  s_d?: number;
  s_cum?: number;
  message: string;
}

export interface IterationResponse {
  d: number;
  status: 'active' | 'completed_success' | 'completed_exhausted';
  remaining_iterations: number;
  feedback: FeedbackBody;
  demonstration: TokenJson[] | null;
}

export interface SessionDescriptor {
  id: string;
  condition: Condition;
  status: string;
  score: number;
  iterations_used: number;
  remaining_iterations: number;
  max_iterations: number;
  demo_interval: number;
}

export interface ConceptInfo {
  id: string;
  description: string;
}

export class ApiRequestError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    readonly detail: string,
  ) {
    super(`${code}: ${detail}`);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, {
    headers: { 'content-type': 'application/json' },
    ...init,
  });
  const body = await response.json();
  if (!response.ok) {
    throw new ApiRequestError(
      response.status,
      String(body.code ?? 'Error'),
      String(body.detail ?? response.statusText),
    );
  }
  return body as T;
}

export class TeachingApi {
  constructor(readonly baseUrl: string = '') {}

  private url(path: string): string {
    return `${this.baseUrl}/v1${path}`;
  }

  createSession(body: CreateSessionRequest): Promise<CreateSessionResponse> {
    return request(this.url('/sessions'), { method: 'POST', body: JSON.stringify(body) });
  }

  submitIteration(
    sessionId: string,
    tokens: TokenJson[],
    intention: string,
  ): Promise<IterationResponse> {
    return request(this.url(`/sessions/${sessionId}/iterations`), {
      method: 'POST',
      body: JSON.stringify({ tokens, intention }),
    });
  }

  getSession(sessionId: string): Promise<SessionDescriptor> {
    return request(this.url(`/sessions/${sessionId}`));
  }

  getDemonstration(sessionId: string): Promise<{ session_id: string; grid: TokenJson[] }> {
    return request(this.url(`/sessions/${sessionId}/demonstration`));
  }

  getConcepts(): Promise<{ concepts: ConceptInfo[] }> {
    return request(this.url('/concepts'));
  }
}
