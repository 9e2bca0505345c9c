// UI action availability is a pure function of the session view plus the
// single in-flight flag. The client holds no protocol state of its own.

import type { SessionView } from "./types";

export interface SessionControls {
  canAnswer: boolean;
  /** Hint button is removed entirely in exam mode, not just disabled. */
  showHintButton: boolean;
  canHint: boolean;
  canGrade: boolean;
  gradeRequired: number;
  gradeProgress: number;
  canContinue: boolean;
  concluded: boolean;
  busy: boolean;
}

export function deriveControls(view: SessionView, inFlight: boolean): SessionControls {
  const questionOpen = view.phase === "question_open";
  const continuation = view.phase === "continuation_prompt";
  const practice = view.mode === "practice";
  const enoughAnswers = view.answered_in_segment >= view.min_questions_for_grade;
  return {
    canAnswer: !inFlight && questionOpen,
    showHintButton: practice,
    canHint: !inFlight && questionOpen && practice,
    canGrade: !inFlight && questionOpen && enoughAnswers,
    gradeRequired: view.min_questions_for_grade,
    gradeProgress: view.answered_in_segment,
    canContinue: !inFlight && continuation,
    concluded: view.phase === "concluded",
    busy: inFlight,
  };
}
