// Wire shapes of the triage service. Field names match the JSON exactly.

export interface Medicine {
  name: string;
  interval_hours: number;
  duration_hours: number;
}

export interface QuestionPrompt {
  type: "question";
  node: string;
  text: string;
  answers: string[];
}

export interface RecommendationPrompt {
  type: "recommendation";
  leaf: string;
  advice: string;
  medicines: Medicine[];
}

export type Prompt = QuestionPrompt | RecommendationPrompt;

export interface Candidate {
  disease: string;
  entry: number;
  score: number;
  matched: string[];
}

export interface CreateSessionDoc {
  session_id: string;
  candidates: Candidate[];
  prompt: Prompt;
}

export interface TranscriptStep {
  node: string;
  question: string;
  answer: string;
  answered_at: string;
}

export interface SessionDoc {
  session: {
    session_id: string;
    disease: string;
    cursor: string;
    state: "active" | "completed";
    started_at: string;
  };
  transcript: {
    complaint: string;
    steps: TranscriptStep[];
  };
  prompt: Prompt;
}

export interface AnswerDoc {
  prompt: Prompt;
  state: "active" | "completed";
}

export interface Dose {
  medicine: string;
  due: string;
  sequence: number;
  acknowledged: boolean;
}

export interface RemindersDoc {
  due: Dose[];
  upcoming: Dose[];
  plan: { session_id: string; doses: Dose[] } | null;
}

export interface ErrorBody {
  code: string;
  detail: string;
  extras: Record<string, unknown>;
}
