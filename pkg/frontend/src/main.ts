import { ApiClient } from './api.js';
import { renderApp } from './render.js';
import { Wizard } from './state.js';
import type { WizardSnapshot } from './types.js';

/** Wire the wizard into a DOM element against a server base URL.
 * Exported so tests can mount the whole app off-page. */
export function mountWizard(root: HTMLElement, serverUrl: string): Wizard {
  const api = new ApiClient(serverUrl);
  const wizard: Wizard = new Wizard(api, (snapshot: WizardSnapshot) => {
    if (snapshot.session) {
      window.location.hash = snapshot.session.id;
    }
    renderApp(root, snapshot, {
      onSubmit: (value) => void wizard.submit(value),
      onAbort: () => void wizard.abort(),
      onRestart: () => {
        window.location.hash = '';
        void wizard.start();
      },
    });
  });
  return wizard;
}

function boot(): void {
  const root = document.getElementById('app');
  if (!root) return;
  const params = new URLSearchParams(window.location.search);
  const serverUrl = params.get('server') ?? '';
  const wizard = mountWizard(root, serverUrl);
  const existing = window.location.hash.slice(1);
  if (existing) {
    void wizard.resume(existing);
  } else {
    void wizard.start();
  }
}

if (typeof document !== 'undefined' && document.getElementById('app')) {
  boot();
}
