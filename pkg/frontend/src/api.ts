// Thin typed client for the chatroom API. The fetch function is injectable
// so tests can run against a scripted transport.

import type {
  MessagesResponse,
  OpenRoomResponse,
  Origin,
  RecommendationsResponse,
  RoomsResponse,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function parse<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = (await response.json()) as { detail?: string };
      if (body.detail) detail = body.detail;
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(response.status, detail);
  }
  return (await response.json()) as T;
}

export class StoryChatApi {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private get<T>(path: string): Promise<T> {
    return this.fetchFn(this.baseUrl + path).then((r) => parse<T>(r));
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.fetchFn(this.baseUrl + path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    }).then((r) => parse<T>(r));
  }

  listRooms(): Promise<RoomsResponse> {
    return this.get("/api/rooms");
  }

  openRoom(storyId: string, sessionId?: string): Promise<OpenRoomResponse> {
    return this.post(`/api/rooms/${encodeURIComponent(storyId)}/open`, {
      session_id: sessionId ?? null,
    });
  }

  earlierEvents(
    storyId: string,
    sessionId: string,
    before: string,
    limit: number,
  ): Promise<MessagesResponse> {
    const query = new URLSearchParams({
      session_id: sessionId,
      before,
      limit: String(limit),
    });
    return this.get(`/api/rooms/${encodeURIComponent(storyId)}/events?${query}`);
  }

  postMessage(sessionId: string, text: string, origin: Origin): Promise<MessagesResponse> {
    return this.post(`/api/sessions/${encodeURIComponent(sessionId)}/messages`, {
      text,
      origin,
    });
  }

  recommendations(sessionId: string): Promise<RecommendationsResponse> {
    return this.get(`/api/sessions/${encodeURIComponent(sessionId)}/recommendations`);
  }
}
