import type { EntryView, GradeView, SessionView } from "../src/types";

export function entry(overrides: Partial<EntryView> = {}): EntryView {
  return {
    index: 0,
    role: "examiner",
    kind: "question",
    text: "What is a process?",
    tags: [],
    timestamp: "1970-01-01T00:00:01+00:00",
    ...overrides,
  };
}

export function gradeView(overrides: Partial<GradeView> = {}): GradeView {
  return {
    grade: "1.7",
    percent: 87,
    topic: "processes",
    questions_covered: 3,
    trigger: "manual_request",
    disclaimer: "This rating applies only to the discussed subject area.",
    ...overrides,
  };
}

export function sessionView(overrides: Partial<SessionView> = {}): SessionView {
  return {
    id: "session-001",
    subject_area: "Operating Systems",
    current_topic: "processes",
    mode: "practice",
    language: "en",
    student_context: {},
    min_questions_for_grade: 3,
    auto_grade_after: 5,
    document_ids: [],
    transcript: [entry()],
    grades: [],
    created_at: "1970-01-01T00:00:00+00:00",
    updated_at: "1970-01-01T00:00:01+00:00",
    phase: "question_open",
    answered_in_segment: 0,
    answered_total: 0,
    hints_used: 0,
    ...overrides,
  };
}
