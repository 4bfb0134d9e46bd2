// Browser entry point. Session parameters come from the query string:
//   ?condition=mmm|performance|baseline   (default mmm)
//   &seed=123                             (optional)
//   &skipTutorial=1                       (dev mode)
//   &apiBase=http://host:port             (defaults to same origin)

import { TeachingApp, type AppConfig } from './app.js';
import type { Condition } from './api.js';

function configFromQuery(search: string): AppConfig {
  const params = new URLSearchParams(search);
  const rawCondition = params.get('condition') ?? 'mmm';
  const condition: Condition = ['mmm', 'performance', 'baseline'].includes(rawCondition)
    ? (rawCondition as Condition)
    : 'mmm';
  const config: AppConfig = {
    condition,
    skipTutorial: params.get('skipTutorial') === '1',
  };
  const seed = params.get('seed');
  if (seed !== null) config.seed = Number(seed);
  const apiBase = params.get('apiBase');
  if (apiBase !== null) config.apiBase = apiBase;
  return config;
}

const root = document.getElementById('app');
if (root) {
  const app = new TeachingApp(root, configFromQuery(window.location.search));
  app.start().catch((error) => {
    root.textContent = `Could not start a session: ${error}`;
  });
}
