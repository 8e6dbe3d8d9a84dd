import { cutFigure, energyChart, tourFigure } from './draw.js';
import type {
  ArtifactList,
  PendingQuery,
  ResultRecord,
  WizardSnapshot,
} from './types.js';

export interface Handlers {
  onSubmit: (value: string) => void;
  onAbort: () => void;
  onRestart: () => void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

const KNOWN_KINDS = ['multi_choice', 'abort', 'string', 'path', 'int', 'float', 'hyperparam'];

/** Build the form controls for one pending query.  Returns the container
 * and a value getter; an empty value means "take the default". */
export function renderQuery(query: PendingQuery): {
  element: HTMLElement;
  getValue: () => string;
} {
  const box = el('div', 'step-form');
  box.dataset.testid = 'step-form';
  box.dataset.queryId = query.id;

  if (query.violation) {
    const note = el('p', 'violation', query.violation);
    note.dataset.testid = 'violation-message';
    box.appendChild(note);
  }
  box.appendChild(el('h3', 'prompt', query.prompt));

  let getValue: () => string;
  if (query.kind === 'multi_choice' || query.kind === 'abort') {
    const list = el('div', 'options');
    for (const option of query.options ?? []) {
      const label = el('label', 'option');
      const radio = el('input');
      radio.type = 'radio';
      radio.name = 'answer';
      radio.value = option;
      if (option === query.default) radio.checked = true;
      label.appendChild(radio);
      const isDefault = option === query.default;
      label.appendChild(
        el('span', undefined, isDefault ? `${option} (recommended)` : option),
      );
      list.appendChild(label);
    }
    box.appendChild(list);
    getValue = () => {
      const checked = box.querySelector<HTMLInputElement>('input[name=answer]:checked');
      return checked ? checked.value : '';
    };
  } else {
    if (!KNOWN_KINDS.includes(query.kind)) {
      const warning = el('p', 'warning',
        `Unrecognized question type "${query.kind}"; sending raw text.`);
      warning.dataset.testid = 'kind-warning';
      box.appendChild(warning);
    }
    const input = el('input', 'answer-input');
    input.dataset.testid = 'step-input';
    if (query.kind === 'int' || query.kind === 'float') {
      input.type = 'number';
      if (query.kind === 'float') input.step = 'any';
      if (query.minimum !== undefined) input.min = String(query.minimum);
      if (query.maximum !== undefined) input.max = String(query.maximum);
    } else {
      input.type = 'text';
    }
    if (query.default !== undefined) {
      input.value = String(query.default);
      input.placeholder = `default: ${query.default}`;
      box.appendChild(el('p', 'default-note', `Recommended: ${query.default}`));
    }
    box.appendChild(input);
    getValue = () => input.value;
  }

  return { element: box, getValue };
}

function renderSolution(result: ResultRecord, artifacts: ArtifactList | null): HTMLElement {
  const box = el('div', 'solution');
  const instance = instanceRecord(artifacts);

  if (result.problem_class === 'tsp') {
    box.appendChild(el('p', 'solution-list',
      `Tour: ${result.solution.join(' → ')} → ${result.solution[0]}`));
    const coordinates = (instance as { coordinates?: [number, number][] } | null)
      ?.coordinates;
    if (coordinates) {
      box.appendChild(tourFigure(coordinates, result.solution));
    }
  } else if (result.problem_class === 'maxcut') {
    const groups = el('div', 'cut-groups');
    for (const side of [0, 1]) {
      const nodes = result.solution
        .map((bit, node) => ({ bit, node }))
        .filter((entry) => entry.bit === side)
        .map((entry) => entry.node);
      const group = el('p', `cut-side cut-side-${side}`,
        `Side ${side}: ${nodes.join(', ') || '(empty)'}`);
      group.dataset.testid = `cut-side-${side}`;
      groups.appendChild(group);
    }
    box.appendChild(groups);
    const record = instance as {
      num_nodes?: number;
      edges?: [number, number, number][];
    } | null;
    if (record?.edges && record.num_nodes) {
      box.appendChild(cutFigure(record.num_nodes, record.edges, result.solution));
    }
  } else {
    box.appendChild(el('p', 'solution-list', JSON.stringify(result.solution)));
  }
  if (result.repaired) {
    box.appendChild(el('p', 'warning', 'Solution was repaired from an infeasible bitstring.'));
  }
  return box;
}

function instanceRecord(artifacts: ArtifactList | null): unknown {
  if (!artifacts) return null;
  const direct = artifacts.files.find((f) => f.name === 'problem_instance.json');
  if (direct?.content) return direct.content;
  const data = artifacts.files.find((f) => f.name === 'problem_data.json');
  if (data?.content && typeof data.content === 'object') {
    return (data.content as Record<string, unknown>)['problem_instance'] ?? null;
  }
  return null;
}

export function renderResult(result: ResultRecord, artifacts: ArtifactList | null): HTMLElement {
  const box = el('section', 'result');
  box.dataset.testid = 'result-view';
  box.appendChild(el('h2', undefined, 'Result'));

  const objective = el('p', 'objective');
  objective.dataset.testid = 'result-objective';
  objective.textContent = String(result.objective);
  box.appendChild(el('p', 'objective-label', 'Objective'));
  box.appendChild(objective);

  box.appendChild(el('p', 'detail',
    `${result.problem_class} solved by ${result.solver_name}`
    + ` (raw energy ${result.raw_energy})`));
  box.appendChild(renderSolution(result, artifacts));

  if (result.history && result.history.length > 0) {
    box.appendChild(el('h3', undefined, 'Optimizer progress'));
    box.appendChild(energyChart(result.history));
  }

  box.appendChild(el('h3', undefined, 'Path taken'));
  box.appendChild(el('p', 'path', result.path.join(' → ')));

  if (artifacts && artifacts.files.length > 0) {
    box.appendChild(el('h3', undefined, 'Artifacts'));
    const list = el('ul', 'artifacts');
    list.dataset.testid = 'artifact-links';
    for (const file of artifacts.files) {
      const item = el('li');
      item.appendChild(el('code', undefined, `${file.name} — ${file.path}`));
      list.appendChild(item);
    }
    box.appendChild(list);
  }
  return box;
}

export function renderApp(root: HTMLElement, snapshot: WizardSnapshot, handlers: Handlers): void {
  root.textContent = '';
  const { session, steps, result, artifacts, requestError } = snapshot;

  const header = el('header');
  header.appendChild(el('h1', undefined, 'Optimization wizard'));
  root.appendChild(header);

  if (requestError) {
    const banner = el('p', 'error-banner', requestError);
    banner.dataset.testid = 'request-error';
    root.appendChild(banner);
  }

  if (!session) {
    root.appendChild(el('p', 'notice', 'Starting session…'));
    return;
  }

  if (steps.length > 0) {
    const done = el('ol', 'steps');
    done.dataset.testid = 'answered-steps';
    for (const step of steps) {
      const item = el('li');
      item.appendChild(el('span', 'step-prompt', step.prompt));
      item.appendChild(el('code', 'step-value',
        step.value === '' ? '(default)' : step.value));
      done.appendChild(item);
    }
    root.appendChild(done);
  }

  if (session.state === 'awaiting_answer' && session.pending_query) {
    const { element, getValue } = renderQuery(session.pending_query);
    const submit = el('button', 'submit', 'Continue');
    submit.dataset.testid = 'step-submit';
    submit.addEventListener('click', () => handlers.onSubmit(getValue()));
    element.appendChild(submit);
    root.appendChild(element);
  } else if (session.state === 'running') {
    const notice = el('p', 'notice running', 'Running…');
    notice.dataset.testid = 'running-notice';
    root.appendChild(notice);
  } else if (session.state === 'finished' && result) {
    root.appendChild(renderResult(result, artifacts));
  } else if (session.state === 'aborted') {
    const notice = el('p', 'notice terminal', 'Run aborted.');
    notice.dataset.testid = 'aborted-notice';
    root.appendChild(notice);
  } else if (session.state === 'failed') {
    const notice = el('p', 'notice terminal error-banner',
      `Run failed: ${session.error ?? 'unknown error'}`);
    notice.dataset.testid = 'failed-notice';
    root.appendChild(notice);
  }

  const footer = el('footer');
  if (session.state === 'awaiting_answer' || session.state === 'running') {
    const abort = el('button', 'abort', 'Abort run');
    abort.dataset.testid = 'abort-button';
    abort.addEventListener('click', () => handlers.onAbort());
    footer.appendChild(abort);
  } else {
    const again = el('button', 'restart', 'Start a new run');
    again.dataset.testid = 'restart-button';
    again.addEventListener('click', () => handlers.onRestart());
    footer.appendChild(again);
  }
  root.appendChild(footer);
}
