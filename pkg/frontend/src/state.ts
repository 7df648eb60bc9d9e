import { BwsClient, isDone } from './api.js';
import type { NextPair, Side } from './types.js';

export type Phase = 'loading' | 'judging' | 'submitting' | 'done' | 'error';

export interface SessionState {
  phase: Phase;
  pair: NextPair | null;
  best: Side | null;
  worst: Side | null;
  progress: number;
  notice: string | null;
  errorMessage: string | null;
}

type Listener = (state: SessionState) => void;

/**
 * Annotation session state machine: loading -> judging -> submitting ->
 * (judging | done), with error as a retryable side track. No path submits
 * without both best and worst selected, and they can never be the same side.
 */
export class AnnotationSession {
  state: SessionState = {
    phase: 'loading',
    pair: null,
    best: null,
    worst: null,
    progress: 0,
    notice: null,
    errorMessage: null,
  };

  private listeners: Listener[] = [];

  constructor(private readonly client: BwsClient) {}

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  private update(patch: Partial<SessionState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) {
      listener(this.state);
    }
  }

  /** Fetch the next pending pair; idempotent, so reloads land on the same pair. */
  async start(): Promise<void> {
    this.update({ phase: 'loading', errorMessage: null });
    try {
      const [next, progress] = await Promise.all([
        this.client.fetchNext(),
        this.client.progress(),
      ]);
      if (isDone(next)) {
        this.update({ phase: 'done', pair: null, progress: progress.progress });
        return;
      }
      this.update({
        phase: 'judging',
        pair: next,
        best: null,
        worst: null,
        progress: progress.progress,
      });
    } catch (err) {
      // network failure: keep everything else as-is so retry loses nothing
      this.update({ phase: 'error', errorMessage: String(err) });
    }
  }

  selectBest(side: Side): void {
    if (this.state.phase !== 'judging') {
      return;
    }
    // picking a side as best auto-excludes it from worst
    const worst = this.state.worst === side ? null : this.state.worst;
    this.update({ best: side, worst, notice: null });
  }

  selectWorst(side: Side): void {
    if (this.state.phase !== 'judging') {
      return;
    }
    if (this.state.best === side) {
      return; // best can never double as worst
    }
    this.update({ worst: side, notice: null });
  }

  canSubmit(): boolean {
    return (
      this.state.phase === 'judging' &&
      this.state.best !== null &&
      this.state.worst !== null &&
      this.state.best !== this.state.worst
    );
  }

  async submit(): Promise<void> {
    if (!this.canSubmit() || this.state.pair === null) {
      return;
    }
    const { pair, best, worst } = this.state;
    this.update({ phase: 'submitting' });
    let result;
    try {
      result = await this.client.submitJudgment(pair.pair_id, best as Side, worst as Side);
    } catch (err) {
      this.update({ phase: 'error', errorMessage: String(err) });
      return;
    }
    if (result.status === 201) {
      await this.start();
      return;
    }
    if (result.status === 409) {
      // someone (or another tab) got there first; surface it and move on
      this.update({ notice: result.detail ?? 'already judged' });
      await this.start();
      return;
    }
    this.update({
      phase: 'error',
      errorMessage: `submit failed: HTTP ${result.status} ${result.detail ?? ''}`.trim(),
    });
  }

  async retry(): Promise<void> {
    await this.start();
  }
}
