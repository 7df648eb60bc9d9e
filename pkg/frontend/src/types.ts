export type Side = 'left' | 'right';

export interface NextPair {
  pair_id: string;
  document_text: string;
  summary_left: string;
  summary_right: string;
}

export interface StudyDone {
  done: true;
}

export interface ProgressInfo {
  judged: number;
  expected: number;
  progress: number;
}

export interface JudgmentPayload {
  pair_id: string;
  annotator: string;
  best: Side;
  worst: Side;
}

export interface SubmitResult {
  status: number; // 201 accepted, 409 conflict, anything else is an error
  detail?: string;
}

export interface SessionConfig {
  baseUrl: string;
  studyId: string;
  annotator: string;
}
