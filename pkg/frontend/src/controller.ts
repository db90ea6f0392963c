// Room/session state machine. All transitions come from API responses plus
// the single local `pending` flag (input is disabled while a post is in
// flight). DOM binding lives in app.ts; tests drive this class directly.

import type { StoryChatApi } from "./api.js";
import type { ChatMessage, Origin, Recommendation } from "./types.js";

export interface ChatViewState {
  storyId: string | null;
  sessionId: string | null;
  messages: ChatMessage[];
  recommendations: Recommendation[];
  hasPrevious: boolean;
  pending: boolean;
  hideRecommendations: boolean;
}

function localUserMessage(roomId: string, text: string): ChatMessage {
  return {
    id: `local-${Date.now()}-${Math.random().toString(36).slice(2)}`,
    room_id: roomId,
    sender: "user",
    kind: "user",
    text,
    timestamp: new Date().toISOString(),
    answer_span: null,
    source: null,
    repeat: false,
    event_id: null,
    recommendations: [],
    geo: null,
  };
}

export class ChatController {
  readonly state: ChatViewState;
  onChange: () => void = () => {};

  constructor(
    private readonly api: StoryChatApi,
    options: { hideRecommendations?: boolean } = {},
  ) {
    this.state = {
      storyId: null,
      sessionId: null,
      messages: [],
      recommendations: [],
      hasPrevious: false,
      pending: false,
      hideRecommendations: options.hideRecommendations ?? false,
    };
  }

  private notify(): void {
    this.onChange();
  }

  private oldestEventId(): string | null {
    for (const message of this.state.messages) {
      if (message.kind === "event" && message.event_id) {
        return message.event_id;
      }
    }
    return null;
  }

  async openRoom(storyId: string, sessionId?: string): Promise<void> {
    const response = await this.api.openRoom(storyId, sessionId);
    this.state.storyId = response.story_id;
    this.state.sessionId = response.session_id;
    this.state.messages = [...response.messages];
    this.state.recommendations = [...response.recommendations];
    this.state.hasPrevious = response.has_previous;
    this.state.pending = false;
    this.notify();
  }

  /** Post a message; returns false when ignored (pending or no session). */
  async send(text: string, origin: Origin = "free_form"): Promise<boolean> {
    const { sessionId, storyId } = this.state;
    if (this.state.pending || !sessionId || !storyId || !text.trim()) {
      return false;
    }
    this.state.pending = true;
    this.state.messages.push(localUserMessage(storyId, text));
    this.notify();
    try {
      const response = await this.api.postMessage(sessionId, text, origin);
      this.state.messages.push(...response.messages);
      const recommendations = response.messages
        .filter((m) => m.kind === "recommendations")
        .at(-1);
      if (recommendations) {
        this.state.recommendations = [...recommendations.recommendations];
      } else {
        // poll for the current list; replies without a recommendations
        // message (clarifications, small talk) leave it unchanged server-side
        const listed = await this.api.recommendations(sessionId);
        this.state.recommendations = [...listed.recommendations];
      }
      return true;
    } finally {
      this.state.pending = false;
      this.notify();
    }
  }

  /** Chip click: ask the Nth recommended question with origin=recommended. */
  async clickRecommendation(index: number): Promise<boolean> {
    const recommendation = this.state.recommendations[index];
    if (!recommendation) {
      return false;
    }
    return this.send(recommendation.text, "recommended");
  }

  /** Prepend up to `limit` older events, keeping chronological order. */
  async loadEarlierEvents(limit = 2): Promise<void> {
    const { storyId, sessionId } = this.state;
    const before = this.oldestEventId();
    if (!storyId || !sessionId || !before) {
      return;
    }
    const response = await this.api.earlierEvents(storyId, sessionId, before, limit);
    const older = [...response.messages].reverse(); // server sends newest-first
    this.state.messages = [...older, ...this.state.messages];
    if (response.messages.length < limit) {
      this.state.hasPrevious = false;
    }
    this.notify();
  }
}
