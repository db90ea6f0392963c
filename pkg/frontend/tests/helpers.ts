import type { ChatMessage, Recommendation } from "../src/types.js";

export function message(overrides: Partial<ChatMessage> = {}): ChatMessage {
  return {
    id: "m0001",
    room_id: "story-1",
    sender: "system",
    kind: "answer",
    text: "The canal reopened after repairs.",
    timestamp: "2030-01-01T00:00:00Z",
    answer_span: null,
    source: null,
    repeat: false,
    event_id: null,
    recommendations: [],
    geo: null,
    ...overrides,
  };
}

export function recommendation(id: string, text: string): Recommendation {
  return { question_id: id, text };
}

export function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}
