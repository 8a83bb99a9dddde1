import { ApiClient, ApiError } from "./api.js";
import { advance, chatView, reminderView, type ChatView } from "./state.js";
import { renderChat, renderReminders, showBanner, showHint } from "./ui.js";

const POLL_MS = 60_000;
const SID_KEY = "smartdoc.sid";

const root = document.body;
const client = new ApiClient("");
let view: ChatView | null = null;
let busy = false; // one in-flight answer at a time; buttons disabled meanwhile

const handlers = {
  onAnswer: (label: string) => void submitAnswer(label),
  onAck: (medicine: string, sequence: number) => void acknowledge(medicine, sequence),
};

async function resync(sessionId: string): Promise<void> {
  // authoritative re-render straight from the server (reload, races, 409s)
  const doc = await client.getSession(sessionId);
  view = chatView(doc);
  renderChat(root, view, handlers);
  await refreshReminders(sessionId);
}

async function refreshReminders(sessionId: string): Promise<void> {
  try {
    const doc = await client.getReminders(sessionId);
    renderReminders(root, reminderView(doc), handlers);
  } catch {
    renderReminders(root, { hidden: false, rows: [] }, handlers, true);
  }
}

async function startConversation(complaint: string): Promise<void> {
  try {
    const doc = await client.createSession(complaint);
    sessionStorage.setItem(SID_KEY, doc.session_id);
    await resync(doc.session_id);
    showBanner(root, null);
  } catch (err) {
    if (err instanceof ApiError && err.code === "NO_MATCH") {
      showHint(root, "I couldn't match that. Try describing one symptom.");
      (root.querySelector("#complaint") as HTMLInputElement).focus();
      return;
    }
    showBanner(root, "Could not reach the service. Check it is running and retry.");
  }
}

async function submitAnswer(label: string): Promise<void> {
  if (busy || view === null) return;
  busy = true;
  const sid = view.sessionId;
  for (const btn of root.querySelectorAll<HTMLButtonElement>("#answers button")) {
    btn.disabled = true;
  }
  try {
    const doc = await client.postAnswer(sid, label);
    view = advance(view, label, doc.prompt);
    renderChat(root, view, handlers);
    if (doc.state === "completed") await refreshReminders(sid);
    showBanner(root, null);
  } catch (err) {
    if (err instanceof ApiError && (err.status === 409 || err.status === 422)) {
      await resync(sid); // double click or stale tab: server wins
    } else {
      showBanner(root, "Answer not delivered. Retry.");
      await resync(sid).catch(() => undefined);
    }
  } finally {
    busy = false;
  }
}

async function acknowledge(medicine: string, sequence: number): Promise<void> {
  if (view === null) return;
  try {
    const doc = await client.acknowledge(view.sessionId, medicine, sequence);
    renderReminders(root, reminderView(doc), handlers);
  } catch {
    await refreshReminders(view.sessionId);
  }
}

function wireComposer(): void {
  const form = root.querySelector("#composer") as HTMLFormElement;
  const input = root.querySelector("#complaint") as HTMLInputElement;
  const submit = form.querySelector("button") as HTMLButtonElement;
  const sync = () => {
    submit.disabled = input.value.trim() === "";
  };
  input.addEventListener("input", sync);
  sync();
  form.addEventListener("submit", (ev) => {
    ev.preventDefault();
    const complaint = input.value.trim();
    if (complaint === "") return;
    input.value = "";
    sync();
    void startConversation(complaint);
  });
}

async function boot(): Promise<void> {
  wireComposer();
  const sid = sessionStorage.getItem(SID_KEY);
  if (sid) {
    try {
      await resync(sid);
    } catch {
      sessionStorage.removeItem(SID_KEY);
    }
  }
  setInterval(() => {
    if (view && view.state === "completed") void refreshReminders(view.sessionId);
  }, POLL_MS);
}

void boot();
