import type {
  JudgmentPayload,
  NextPair,
  ProgressInfo,
  SessionConfig,
  Side,
  StudyDone,
  SubmitResult,
} from './types.js';

/** Thin client for the study service; all state lives server-side. */
export class BwsClient {
  private readonly fetchImpl: typeof fetch;

  constructor(
    private readonly config: SessionConfig,
    fetchImpl?: typeof fetch,
  ) {
    this.fetchImpl = fetchImpl ?? fetch;
  }

  private url(path: string): string {
    return `${this.config.baseUrl.replace(/\/$/, '')}${path}`;
  }

  async fetchNext(): Promise<NextPair | StudyDone> {
    const response = await this.fetchImpl(
      this.url(
        `/studies/${encodeURIComponent(this.config.studyId)}/next?annotator=${encodeURIComponent(this.config.annotator)}`,
      ),
    );
    if (!response.ok) {
      throw new Error(`next failed: HTTP ${response.status}`);
    }
    return (await response.json()) as NextPair | StudyDone;
  }

  async submitJudgment(pairId: string, best: Side, worst: Side): Promise<SubmitResult> {
    const payload: JudgmentPayload = {
      pair_id: pairId,
      annotator: this.config.annotator,
      best,
      worst,
    };
    const response = await this.fetchImpl(
      this.url(`/studies/${encodeURIComponent(this.config.studyId)}/judgments`),
      {
        method: 'POST',
        headers: { 'Content-Type': 'application/json' },
        body: JSON.stringify(payload),
      },
    );
    if (response.status === 201) {
      return { status: 201 };
    }
    let detail: string | undefined;
    try {
      const body = (await response.json()) as { detail?: string };
      detail = body.detail;
    } catch {
      detail = undefined;
    }
    return { status: response.status, detail };
  }

  async progress(): Promise<ProgressInfo> {
    const response = await this.fetchImpl(
      this.url(`/studies/${encodeURIComponent(this.config.studyId)}/progress`),
    );
    if (!response.ok) {
      throw new Error(`progress failed: HTTP ${response.status}`);
    }
    return (await response.json()) as ProgressInfo;
  }
}

export function isDone(result: NextPair | StudyDone): result is StudyDone {
  return (result as StudyDone).done === true;
}
