import { ApiClient, ApiError } from './api.js';
import type { AnsweredStep, Session, WizardSnapshot } from './types.js';

const POLL_MS = 1000;

/**
 * Wizard state machine.
 *
 * Every snapshot field originates from a server response: the session is
 * stored exactly as received, the result comes from GET /result, and the
 * answered-step list only grows when the server accepted an answer (the
 * pending query moved on).  While the run is busy ("running") the machine
 * polls once a second until the server presents the next query or a
 * terminal state.
 */
export class Wizard {
  private session: Session | null = null;
  private steps: AnsweredStep[] = [];
  private snapshotExtras: Pick<WizardSnapshot, 'result' | 'artifacts'> = {
    result: null,
    artifacts: null,
  };
  private requestError: string | null = null;
  private pollTimer: ReturnType<typeof setTimeout> | null = null;

  constructor(
    private readonly api: ApiClient,
    private readonly onChange: (snapshot: WizardSnapshot) => void,
    private readonly pollMs: number = POLL_MS,
  ) {}

  snapshot(): WizardSnapshot {
    return {
      session: this.session,
      steps: [...this.steps],
      result: this.snapshotExtras.result,
      artifacts: this.snapshotExtras.artifacts,
      requestError: this.requestError,
    };
  }

  get sessionId(): string | null {
    return this.session?.id ?? null;
  }

  async start(overrides: Record<string, unknown> = {}): Promise<void> {
    if (await this.exchange(() => this.api.createSession(overrides))) {
      await this.settle();
    }
  }

  /** Re-attach to a session the server already knows (id from the URL). */
  async resume(sessionId: string): Promise<void> {
    if (await this.exchange(() => this.api.getSession(sessionId))) {
      await this.settle();
    }
  }

  /** Submit a value for the currently pending query. */
  async submit(value: string): Promise<void> {
    const before = this.session?.pending_query;
    if (!this.session || !before) return;
    const sessionId = this.session.id;
    if (!(await this.exchange(
        () => this.api.submitAnswer(sessionId, before.id, value)))) {
      return;
    }
    const after = this.session as Session | null;
    const accepted =
      after !== null &&
      (after.state !== 'awaiting_answer' ||
        (after.pending_query !== undefined &&
          !(after.pending_query.id === before.id && after.pending_query.violation)));
    if (accepted) {
      this.steps.push({ queryId: before.id, prompt: before.prompt, value });
    }
    await this.settle();
  }

  /** The always-available abort control: submits the exit word. */
  async abort(): Promise<void> {
    await this.submit('exit');
  }

  stop(): void {
    if (this.pollTimer !== null) {
      clearTimeout(this.pollTimer);
      this.pollTimer = null;
    }
  }

  /** One server round trip; stores the fresh session verbatim.  Returns
   * false (after emitting the error) when the request failed. */
  private async exchange(call: () => Promise<Session>): Promise<boolean> {
    this.stop();
    try {
      this.session = await call();
      this.requestError = null;
      return true;
    } catch (err) {
      this.requestError = err instanceof ApiError ? err.message : String(err);
      this.emit();
      return false;
    }
  }

  /** Follow up on the latest session state: fetch the result when done,
   * keep polling while the engine is busy. */
  private async settle(): Promise<void> {
    const session = this.session;
    if (!session) {
      this.emit();
      return;
    }
    if (session.state === 'finished' && !this.snapshotExtras.result) {
      try {
        const [result, artifacts] = await Promise.all([
          this.api.getResult(session.id),
          this.api.getArtifacts(session.id),
        ]);
        this.snapshotExtras = { result, artifacts };
      } catch (err) {
        this.requestError = err instanceof ApiError ? err.message : String(err);
      }
    }
    this.emit();
    if (session.state === 'running') {
      this.pollTimer = setTimeout(() => {
        void (async () => {
          if (await this.exchange(() => this.api.getSession(session.id))) {
            await this.settle();
          }
        })();
      }, this.pollMs);
    }
  }

  private emit(): void {
    this.onChange(this.snapshot());
  }
}
