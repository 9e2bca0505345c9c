// Wire types mirroring the service's JSON views. The service strips all
// sentinel strings and ships tags as structured objects, so nothing in the
// client ever parses %...% sequences.

export type Phase = "question_open" | "continuation_prompt" | "concluded";
export type Mode = "practice" | "exam";

export type MessageKind =
  | "question"
  | "feedback"
  | "hint"
  | "grade"
  | "end"
  | "answer"
  | "hint_request"
  | "system";

export interface TagView {
  name: string;
  args: string[];
}

export interface EntryView {
  index: number;
  role: "examiner" | "student" | "hint" | "system";
  kind: MessageKind;
  text: string;
  tags: TagView[];
  timestamp: string;
}

export interface GradeView {
  grade: string;
  percent: number;
  topic: string;
  questions_covered: number;
  trigger: "manual_request" | "auto_after_five";
  disclaimer: string;
}

export interface Counters {
  phase: Phase;
  answered_in_segment: number;
  answered_total: number;
  hints_used: number;
}

export interface SessionView extends Counters {
  id: string;
  subject_area: string;
  current_topic: string;
  mode: Mode;
  language: string;
  student_context: Record<string, string>;
  min_questions_for_grade: number;
  auto_grade_after: number;
  document_ids: string[];
  transcript: EntryView[];
  grades: GradeView[];
  created_at: string;
  updated_at: string;
  latency_ms?: number;
}

export interface AnswerResponse extends Counters {
  examiner_message: EntryView;
  grade: GradeView | null;
  latency_ms: number;
}

export interface HintResponse extends Counters {
  hint_message: EntryView;
  latency_ms: number;
}

export interface GradeResponse extends Counters {
  grade: GradeView;
  message: EntryView;
  latency_ms: number;
}

export interface DocumentResponse {
  document_id: string;
  title: string;
  chunk_count: number;
}

export type ContinuationChoice = "same_topic" | "new_topic" | "conclude";

export interface CreateSessionRequest {
  subject_area: string;
  topic: string;
  mode?: Mode;
  language?: string;
  student_context?: Record<string, string>;
  document_ids?: string[];
}
