/** Wire types mirroring the session API responses. */

export type SessionState =
  | 'awaiting_answer'
  | 'running'
  | 'finished'
  | 'failed'
  | 'aborted';

export interface PendingQuery {
  id: string;
  prompt: string;
  kind: string;
  default?: string | number;
  options?: string[];
  minimum?: number;
  maximum?: number;
  violation?: string;
}

export interface Session {
  id: string;
  state: SessionState;
  pending_query?: PendingQuery;
  path_so_far: string[];
  created_at: number;
  expires_at: number;
  error?: string;
}

export interface SolverStats {
  iterations: number;
  circuit_evaluations: number;
  wall_time_ms: number;
}

export interface HistoryPoint {
  iteration: number;
  energy: number;
}

export interface ResultRecord {
  run_id: string;
  timestamp: string;
  problem_class: string;
  solution: number[];
  objective: number;
  raw_energy: number;
  solver_name: string;
  solver_stats: SolverStats;
  path: string[];
  history?: HistoryPoint[];
  best_circuit?: string;
  repaired?: boolean;
  metadata?: Record<string, unknown>;
}

export interface ArtifactFile {
  name: string;
  path: string;
  content?: unknown;
}

export interface ArtifactList {
  files: ArtifactFile[];
}

/** One answered wizard step, in the order it was taken. */
export interface AnsweredStep {
  queryId: string;
  prompt: string;
  value: string;
}

/** Everything the view needs; mirrors the server after every round trip. */
export interface WizardSnapshot {
  session: Session | null;
  steps: AnsweredStep[];
  result: ResultRecord | null;
  artifacts: ArtifactList | null;
  requestError: string | null;
}
