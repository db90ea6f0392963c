// Wire types for the chatroom JSON API.

export interface RoomInfo {
  story_id: string;
  title: string;
  last_active: string;
  open_sessions: number;
}

export interface Recommendation {
  question_id: string;
  text: string;
}

export interface GeoPoint {
  lat: number;
  lon: number;
}

export type MessageKind =
  | "event"
  | "answer"
  | "clarification"
  | "no_answer"
  | "error"
  | "recommendations"
  | "user";

export interface ChatMessage {
  id: string;
  room_id: string;
  sender: "user" | "system";
  kind: MessageKind;
  text: string;
  timestamp: string;
  answer_span: [number, number] | null;
  source: string | null;
  repeat: boolean;
  event_id: string | null;
  recommendations: Recommendation[];
  geo: GeoPoint | null;
}

export interface RoomsResponse {
  rooms: RoomInfo[];
}

export interface OpenRoomResponse {
  session_id: string;
  story_id: string;
  has_previous: boolean;
  messages: ChatMessage[];
  recommendations: Recommendation[];
}

export interface MessagesResponse {
  messages: ChatMessage[];
}

export interface RecommendationsResponse {
  recommendations: Recommendation[];
}

export type Origin = "free_form" | "recommended";
