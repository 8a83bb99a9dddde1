import { describe, expect, it } from "vitest";

import { advance, chatView, reminderView } from "../src/state.js";
import type { Prompt, RemindersDoc, SessionDoc } from "../src/types.js";

const QUESTION: Prompt = {
  type: "question",
  node: "q_vomit",
  text: "Do you have vomiting too",
  answers: ["yes", "no"],
};

const RECOMMENDATION: Prompt = {
  type: "recommendation",
  leaf: "l_migraine",
  advice: "You have migraine pain and I prescribe you to take Desprine and Bruefen and cream for massage.",
  medicines: [{ name: "Bruefen", interval_hours: 8, duration_hours: 72 }],
};

function activeDoc(): SessionDoc {
  return {
    session: {
      session_id: "abc",
      disease: "migraine",
      cursor: "q_vomit",
      state: "active",
      started_at: "2026-03-14T12:00:00Z",
    },
    transcript: { complaint: "I have pain in my neck", steps: [] },
    prompt: QUESTION,
  };
}

function completedDoc(): SessionDoc {
  return {
    session: {
      session_id: "abc",
      disease: "migraine",
      cursor: "l_migraine",
      state: "completed",
      started_at: "2026-03-14T12:00:00Z",
    },
    transcript: {
      complaint: "I have pain in my neck",
      steps: [
        {
          node: "q_vomit",
          question: "Do you have vomiting too",
          answer: "yes",
          answered_at: "2026-03-14T12:00:30Z",
        },
      ],
    },
    prompt: RECOMMENDATION,
  };
}

describe("chatView", () => {
  it("renders the complaint then the pending question", () => {
    const view = chatView(activeDoc());
    expect(view.messages).toEqual([
      { who: "user", text: "I have pain in my neck" },
      { who: "bot", text: "Do you have vomiting too" },
    ]);
    expect(view.buttons).toEqual(["yes", "no"]);
    expect(view.advice).toBeNull();
    expect(view.state).toBe("active");
  });

  it("mirrors every transcript step in order", () => {
    const doc = completedDoc();
    doc.session.state = "active";
    doc.session.cursor = "q_more";
    doc.prompt = { type: "question", node: "q_more", text: "Anything else", answers: ["a", "b"] };
    const view = chatView(doc);
    expect(view.messages.map((m) => m.text)).toEqual([
      "I have pain in my neck",
      "Do you have vomiting too",
      "yes",
      "Anything else",
    ]);
    expect(view.messages.map((m) => m.who)).toEqual(["user", "bot", "user", "bot"]);
  });

  it("drops the buttons and shows the advice card once completed", () => {
    const view = chatView(completedDoc());
    expect(view.buttons).toEqual([]);
    expect(view.advice).toEqual({
      text: RECOMMENDATION.advice,
      medicines: RECOMMENDATION.medicines,
    });
    // the recommendation is a card, not a fake transcript message
    expect(view.messages).toEqual([
      { who: "user", text: "I have pain in my neck" },
      { who: "bot", text: "Do you have vomiting too" },
      { who: "user", text: "yes" },
    ]);
  });

  it("is a pure function of the response", () => {
    const doc = completedDoc();
    expect(chatView(doc)).toEqual(chatView(structuredClone(doc)));
  });
});

describe("advance", () => {
  it("appends the user bubble and the next question", () => {
    const next: Prompt = {
      type: "question",
      node: "q_more",
      text: "Anything else",
      answers: ["a", "b"],
    };
    const view = advance(chatView(activeDoc()), "yes", next);
    expect(view.messages.slice(-2)).toEqual([
      { who: "user", text: "yes" },
      { who: "bot", text: "Anything else" },
    ]);
    expect(view.buttons).toEqual(["a", "b"]);
    expect(view.state).toBe("active");
  });

  it("agrees with a full re-render from the server after completion", () => {
    const optimistic = advance(chatView(activeDoc()), "yes", RECOMMENDATION);
    const refetched = chatView(completedDoc());
    expect(optimistic).toEqual(refetched);
  });
});

describe("reminderView", () => {
  const dose = (sequence: number, due: string, acknowledged = false) => ({
    medicine: "Bruefen",
    due,
    sequence,
    acknowledged,
  });

  it("hides the panel without a plan", () => {
    const doc: RemindersDoc = { due: [], upcoming: [], plan: null };
    expect(reminderView(doc)).toEqual({ hidden: true, rows: [] });
  });

  it("hides the panel when the plan has no doses", () => {
    const doc: RemindersDoc = { due: [], upcoming: [], plan: { session_id: "abc", doses: [] } };
    expect(reminderView(doc).hidden).toBe(true);
  });

  it("highlights due doses ahead of upcoming ones", () => {
    const doc: RemindersDoc = {
      due: [dose(1, "2026-03-14T12:00:00Z")],
      upcoming: [dose(2, "2026-03-14T20:00:00Z"), dose(3, "2026-03-15T04:00:00Z")],
      plan: {
        session_id: "abc",
        doses: [
          dose(1, "2026-03-14T12:00:00Z"),
          dose(2, "2026-03-14T20:00:00Z"),
          dose(3, "2026-03-15T04:00:00Z"),
        ],
      },
    };
    const view = reminderView(doc);
    expect(view.hidden).toBe(false);
    expect(view.rows.map((r) => [r.sequence, r.highlight])).toEqual([
      [1, true],
      [2, false],
      [3, false],
    ]);
  });

  it("shows an all-acknowledged plan as a quiet panel", () => {
    const doc: RemindersDoc = {
      due: [],
      upcoming: [],
      plan: { session_id: "abc", doses: [dose(1, "2026-03-14T12:00:00Z", true)] },
    };
    expect(reminderView(doc)).toEqual({ hidden: false, rows: [] });
  });
});
