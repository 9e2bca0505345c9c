// Application wiring: token login, session creation form, chat loop.
// The service is the single source of truth; after every action the UI
// re-renders from the fresh session view, so a page refresh loses nothing.

import { ApiError, ExamSimClient } from "./api";
import { renderChat } from "./render";
import { deriveControls } from "./state";
import type { Mode, SessionView } from "./types";

interface AppState {
  client: ExamSimClient | null;
  view: SessionView | null;
  inFlight: boolean;
}

const state: AppState = { client: null, view: null, inFlight: false };

function statusLine(): HTMLElement {
  return document.getElementById("app-status") as HTMLElement;
}

function chatRoot(): HTMLElement {
  return document.getElementById("chat-root") as HTMLElement;
}

function showError(error: unknown): void {
  const line = statusLine();
  if (error instanceof ApiError) {
    line.textContent = `${error.code}: ${error.message}`;
  } else {
    line.textContent = String(error);
  }
  line.classList.add("error");
}

function clearError(): void {
  const line = statusLine();
  line.textContent = "";
  line.classList.remove("error");
}

function redraw(): void {
  if (!state.view) {
    return;
  }
  renderChat(chatRoot(), state.view, deriveControls(state.view, state.inFlight), {
    onAnswer: (text) => run(() => state.client!.submitAnswer(state.view!.id, text)),
    onHint: () => run(() => state.client!.requestHint(state.view!.id)),
    onGrade: () => run(() => state.client!.requestGrade(state.view!.id)),
    onContinue: (choice, topic) =>
      run(() => state.client!.continueSession(state.view!.id, choice, topic)),
  });
}

async function refreshView(): Promise<void> {
  if (state.client && state.view) {
    state.view = await state.client.getSession(state.view.id);
  }
}

// One request in flight per session; the UI disables everything meanwhile.
async function run(action: () => Promise<unknown>): Promise<void> {
  if (state.inFlight || !state.client || !state.view) {
    return;
  }
  state.inFlight = true;
  clearError();
  redraw();
  try {
    await action();
  } catch (error) {
    showError(error);
  } finally {
    try {
      await refreshView();
    } catch (error) {
      showError(error);
    }
    state.inFlight = false;
    redraw();
  }
}

function readForm(): { baseUrl: string; token: string; subject: string; topic: string; mode: Mode } {
  const value = (id: string) => (document.getElementById(id) as HTMLInputElement).value.trim();
  const mode = (document.getElementById("mode-select") as HTMLSelectElement).value as Mode;
  return {
    baseUrl: value("base-url") || window.location.origin,
    token: value("api-token"),
    subject: value("subject-area"),
    topic: value("topic"),
    mode,
  };
}

async function startSession(): Promise<void> {
  const form = readForm();
  if (!form.token || !form.subject || !form.topic) {
    statusLine().textContent = "token, subject area, and topic are required";
    return;
  }
  state.client = new ExamSimClient(form.baseUrl, form.token);
  state.inFlight = true;
  clearError();
  try {
    state.view = await state.client.createSession({
      subject_area: form.subject,
      topic: form.topic,
      mode: form.mode,
    });
    window.location.hash = state.view.id;
    (document.getElementById("setup-panel") as HTMLElement).hidden = true;
  } catch (error) {
    showError(error);
  } finally {
    state.inFlight = false;
    redraw();
  }
}

export function bootstrap(): void {
  const startButton = document.getElementById("start-session") as HTMLButtonElement;
  startButton.addEventListener("click", () => void startSession());
}

if (typeof window !== "undefined" && document.getElementById("start-session")) {
  bootstrap();
}
