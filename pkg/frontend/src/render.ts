// DOM rendering for the chat surface: message history (students right,
// examiner left), hint icons, grade cards with the scope disclaimer, the
// answer input row, and the continuation choices.

import type { SessionControls } from "./state";
import type { EntryView, GradeView, SessionView } from "./types";

export interface ChatHandlers {
  onAnswer: (text: string) => void;
  onHint: () => void;
  onGrade: () => void;
  onContinue: (choice: "same_topic" | "new_topic" | "conclude", topic?: string) => void;
}

function element<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  node.className = className;
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

export function renderMessage(entry: EntryView): HTMLElement {
  const sideClass = entry.role === "student" ? "message-right" : "message-left";
  const item = element("div", `message ${sideClass} kind-${entry.kind}`);
  item.dataset.kind = entry.kind;
  item.dataset.index = String(entry.index);
  if (entry.kind === "hint") {
    const icon = element("span", "hint-icon", "\u{1F4A1}");
    icon.setAttribute("role", "img");
    icon.setAttribute("aria-label", "hint");
    item.appendChild(icon);
  }
  if (entry.kind === "hint_request") {
    item.appendChild(element("span", "hint-icon", "\u{1F4A1}"));
    item.appendChild(element("span", "message-text", "(hint requested)"));
    return item;
  }
  if (entry.kind === "end") {
    item.classList.add("session-end");
  }
  item.appendChild(element("span", "message-text", entry.text.trim()));
  return item;
}

export function renderGradeCard(grade: GradeView): HTMLElement {
  const card = element("div", "grade-card");
  card.appendChild(element("div", "grade-value", grade.grade));
  card.appendChild(element("div", "grade-percent", `${grade.percent}%`));
  card.appendChild(
    element(
      "div",
      "grade-meta",
      `${grade.topic} · ${grade.questions_covered} answers · ${grade.trigger.replace(/_/g, " ")}`,
    ),
  );
  card.appendChild(element("div", "grade-disclaimer", grade.disclaimer));
  return card;
}

function renderHistory(view: SessionView): HTMLElement {
  const history = element("div", "chat-history");
  let gradeCursor = 0;
  for (const entry of view.transcript) {
    if (entry.kind === "system") {
      continue;
    }
    history.appendChild(renderMessage(entry));
    if (entry.kind === "grade" && gradeCursor < view.grades.length) {
      history.appendChild(renderGradeCard(view.grades[gradeCursor]));
      gradeCursor += 1;
    }
  }
  return history;
}

function renderInputRow(controls: SessionControls, handlers: ChatHandlers): HTMLElement {
  const row = element("div", "input-row");

  const input = element("input", "answer-input") as HTMLInputElement;
  input.type = "text";
  input.placeholder = controls.busy ? "waiting for the examiner…" : "type your answer";
  input.disabled = !controls.canAnswer;
  row.appendChild(input);

  const send = element("button", "send-button", "Send");
  send.disabled = !controls.canAnswer;
  send.addEventListener("click", () => {
    const text = input.value.trim();
    if (text) {
      handlers.onAnswer(text);
      input.value = "";
    }
  });
  row.appendChild(send);

  if (controls.showHintButton) {
    const hint = element("button", "hint-button", "Give hint");
    hint.disabled = !controls.canHint;
    hint.addEventListener("click", handlers.onHint);
    row.appendChild(hint);
  }

  const grade = element("button", "grade-button", "Grade me");
  grade.disabled = !controls.canGrade;
  grade.title = controls.canGrade
    ? "request a grade for this segment"
    : `answer at least ${controls.gradeRequired} questions first (${controls.gradeProgress}/${controls.gradeRequired})`;
  grade.addEventListener("click", handlers.onGrade);
  row.appendChild(grade);

  return row;
}

function renderContinuationRow(controls: SessionControls, handlers: ChatHandlers): HTMLElement {
  const row = element("div", "continuation-row");
  const same = element("button", "continue-same", "Same topic");
  same.disabled = !controls.canContinue;
  same.addEventListener("click", () => handlers.onContinue("same_topic"));
  row.appendChild(same);

  const topicInput = element("input", "new-topic-input") as HTMLInputElement;
  topicInput.type = "text";
  topicInput.placeholder = "new topic";
  topicInput.disabled = !controls.canContinue;
  row.appendChild(topicInput);

  const newTopic = element("button", "continue-new", "New topic");
  newTopic.disabled = !controls.canContinue;
  newTopic.addEventListener("click", () => {
    const topic = topicInput.value.trim();
    if (topic) {
      handlers.onContinue("new_topic", topic);
    }
  });
  row.appendChild(newTopic);

  const conclude = element("button", "continue-conclude", "Conclude");
  conclude.disabled = !controls.canContinue;
  conclude.addEventListener("click", () => handlers.onContinue("conclude"));
  row.appendChild(conclude);

  return row;
}

function renderStatusRow(view: SessionView, controls: SessionControls): HTMLElement {
  const status = element("div", "status-row");
  status.appendChild(
    element(
      "span",
      "counters",
      `segment ${view.answered_in_segment}/${view.auto_grade_after} · total ${view.answered_total} · hints ${view.hints_used}`,
    ),
  );
  if (controls.busy) {
    const progress = element("span", "progress", "examiner is thinking…");
    progress.setAttribute("role", "status");
    status.appendChild(progress);
  }
  if (controls.concluded) {
    status.appendChild(element("span", "concluded-note", "session concluded"));
  }
  return status;
}

export function renderChat(
  root: HTMLElement,
  view: SessionView,
  controls: SessionControls,
  handlers: ChatHandlers,
): void {
  root.replaceChildren();
  const header = element("div", "chat-header");
  header.appendChild(element("span", "subject", view.subject_area));
  header.appendChild(element("span", "topic", view.current_topic));
  header.appendChild(element("span", "mode-badge", view.mode));
  root.appendChild(header);
  root.appendChild(renderHistory(view));
  root.appendChild(renderStatusRow(view, controls));
  root.appendChild(renderInputRow(controls, handlers));
  if (view.phase === "continuation_prompt") {
    root.appendChild(renderContinuationRow(controls, handlers));
  }
}
