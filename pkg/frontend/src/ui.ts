// DOM painting only. Each render wipes its container and rebuilds it from
// the view model, so what is on screen never drifts from the last response.

import type { ChatView, ReminderView } from "./state.js";

export interface Handlers {
  onAnswer: (label: string) => void;
  onAck: (medicine: string, sequence: number) => void;
}

function bubble(who: "user" | "bot", text: string): HTMLElement {
  const div = document.createElement("div");
  div.className = `bubble ${who}`;
  div.textContent = text;
  return div;
}

export function renderChat(root: HTMLElement, view: ChatView, handlers: Handlers): void {
  const chat = root.querySelector("#chat") as HTMLElement;
  chat.replaceChildren();
  for (const msg of view.messages) {
    chat.appendChild(bubble(msg.who, msg.text));
  }
  if (view.advice) {
    const card = document.createElement("div");
    card.className = "advice";
    const text = document.createElement("p");
    text.textContent = view.advice.text;
    card.appendChild(text);
    for (const med of view.advice.medicines) {
      const line = document.createElement("p");
      line.className = "med";
      line.textContent = `${med.name}: every ${med.interval_hours}h for ${med.duration_hours}h`;
      card.appendChild(line);
    }
    chat.appendChild(card);
  }
  chat.scrollTop = chat.scrollHeight;

  const answers = root.querySelector("#answers") as HTMLElement;
  answers.replaceChildren();
  for (const label of view.buttons) {
    const btn = document.createElement("button");
    btn.type = "button";
    btn.textContent = label;
    btn.addEventListener("click", () => handlers.onAnswer(label));
    answers.appendChild(btn);
  }
}

export function renderReminders(
  root: HTMLElement,
  view: ReminderView,
  handlers: Handlers,
  stale = false,
): void {
  const panel = root.querySelector("#reminders") as HTMLElement;
  panel.replaceChildren();
  panel.hidden = view.hidden;
  if (view.hidden) return;

  const head = document.createElement("h2");
  head.textContent = stale ? "Medicine reminders (stale)" : "Medicine reminders";
  panel.appendChild(head);
  for (const row of view.rows) {
    const line = document.createElement("div");
    line.className = row.highlight ? "dose due" : "dose";
    const label = document.createElement("span");
    label.textContent = `${row.medicine} #${row.sequence} at ${row.due}`;
    line.appendChild(label);
    if (row.highlight) {
      const taken = document.createElement("button");
      taken.type = "button";
      taken.textContent = "taken";
      taken.addEventListener("click", () => handlers.onAck(row.medicine, row.sequence));
      line.appendChild(taken);
    }
    panel.appendChild(line);
  }
}

export function showHint(root: HTMLElement, text: string): void {
  const chat = root.querySelector("#chat") as HTMLElement;
  const div = bubble("bot", text);
  div.classList.add("hint");
  chat.appendChild(div);
  chat.scrollTop = chat.scrollHeight;
}

export function showBanner(root: HTMLElement, text: string | null): void {
  const banner = root.querySelector("#banner") as HTMLElement;
  banner.textContent = text ?? "";
  banner.hidden = text === null;
}
