// Pure view-model layer: everything rendered is a function of the last
// server response, so a reload that re-fetches the session re-renders an
// identical page. No diagnosis logic lives here; prompts are opaque.

import type { Medicine, Prompt, RemindersDoc, SessionDoc } from "./types.js";

export interface Message {
  who: "user" | "bot";
  text: string;
}

export interface ChatView {
  sessionId: string;
  state: "active" | "completed";
  messages: Message[];
  buttons: string[];
  advice: { text: string; medicines: Medicine[] } | null;
}

export function chatView(doc: SessionDoc): ChatView {
  const messages: Message[] = [{ who: "user", text: doc.transcript.complaint }];
  for (const step of doc.transcript.steps) {
    messages.push({ who: "bot", text: step.question });
    messages.push({ who: "user", text: step.answer });
  }
  const active = doc.session.state === "active";
  if (active && doc.prompt.type === "question") {
    messages.push({ who: "bot", text: doc.prompt.text });
  }
  return {
    sessionId: doc.session.session_id,
    state: doc.session.state,
    messages,
    buttons: active && doc.prompt.type === "question" ? [...doc.prompt.answers] : [],
    advice:
      doc.prompt.type === "recommendation"
        ? { text: doc.prompt.advice, medicines: doc.prompt.medicines }
        : null,
  };
}

/** The next-question view after an answer, without waiting for a re-fetch. */
export function advance(view: ChatView, answered: string, prompt: Prompt): ChatView {
  const messages = [...view.messages, { who: "user", text: answered } as Message];
  if (prompt.type === "question") {
    messages.push({ who: "bot", text: prompt.text });
    return { ...view, messages, buttons: [...prompt.answers], advice: null };
  }
  return {
    ...view,
    state: "completed",
    messages,
    buttons: [],
    advice: { text: prompt.advice, medicines: prompt.medicines },
  };
}

export interface DoseRow {
  medicine: string;
  sequence: number;
  due: string;
  highlight: boolean; // due now, unacknowledged
}

export interface ReminderView {
  hidden: boolean;
  rows: DoseRow[];
}

export function reminderView(doc: RemindersDoc): ReminderView {
  if (doc.plan === null || doc.plan.doses.length === 0) {
    return { hidden: true, rows: [] };
  }
  const rows: DoseRow[] = [];
  for (const dose of doc.due) {
    rows.push({ medicine: dose.medicine, sequence: dose.sequence, due: dose.due, highlight: true });
  }
  for (const dose of doc.upcoming) {
    rows.push({
      medicine: dose.medicine,
      sequence: dose.sequence,
      due: dose.due,
      highlight: false,
    });
  }
  return { hidden: false, rows };
}
