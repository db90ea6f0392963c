// Pure HTML-string renderers. No business logic here: everything shown is a
// direct function of API payloads, so the renderers are unit-testable
// without a DOM.

import type { ChatMessage, Recommendation, RoomInfo } from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

/** Answer text with exactly the span slice wrapped in <strong>. */
export function renderBoldedAnswer(text: string, span: [number, number]): string {
  const [start, end] = span;
  const before = escapeHtml(text.slice(0, start));
  const bold = escapeHtml(text.slice(start, end));
  const after = escapeHtml(text.slice(end));
  return `${before}<strong class="answer">${bold}</strong>${after}`;
}

export function mapLink(lat: number, lon: number): string {
  return `https://www.openstreetmap.org/?mlat=${lat}&mlon=${lon}`;
}

export function renderMessage(message: ChatMessage): string {
  const classes = `message kind-${message.kind} from-${message.sender}`;
  let body: string;
  switch (message.kind) {
    case "answer": {
      body = message.answer_span
        ? renderBoldedAnswer(message.text, message.answer_span)
        : escapeHtml(message.text);
      if (message.source) {
        body += ` <span class="source">${escapeHtml(message.source)}</span>`;
      }
      if (message.repeat) {
        body += ` <span class="repeat" title="already covered">repeat</span>`;
      }
      break;
    }
    case "clarification": {
      body = escapeHtml(message.text).replace(/\n\n/g, "<br><br>");
      if (message.geo) {
        const href = mapLink(message.geo.lat, message.geo.lon);
        body += ` <a class="map-link" href="${href}" target="_blank" rel="noopener">map</a>`;
      }
      break;
    }
    default:
      body = escapeHtml(message.text);
  }
  return `<div class="${classes}" data-message-id="${escapeHtml(message.id)}">${body}</div>`;
}

export function renderMessages(messages: ChatMessage[]): string {
  // recommendations ride in the chips zone, not the message column
  return messages
    .filter((m) => m.kind !== "recommendations")
    .map(renderMessage)
    .join("");
}

export function renderRoomList(rooms: RoomInfo[]): string {
  if (rooms.length === 0) {
    return `<p class="empty">No active stories yet.</p>`;
  }
  const items = rooms
    .map(
      (room) =>
        `<li><button class="room" data-story-id="${escapeHtml(room.story_id)}">` +
        `<span class="title">${escapeHtml(room.title)}</span>` +
        `<span class="meta">${escapeHtml(room.last_active)}</span>` +
        `</button></li>`,
    )
    .join("");
  return `<ul class="rooms">${items}</ul>`;
}

export interface ChipsOptions {
  hidden: boolean; // NOQR-style configuration: suppress the whole zone
}

export function renderChips(
  recommendations: Recommendation[],
  options: ChipsOptions = { hidden: false },
): string {
  if (options.hidden) {
    return "";
  }
  if (recommendations.length === 0) {
    return `<div class="chips empty"></div>`;
  }
  const chips = recommendations
    .map(
      (rec, index) =>
        `<button class="chip" data-index="${index}" ` +
        `data-question-id="${escapeHtml(rec.question_id)}">${escapeHtml(rec.text)}</button>`,
    )
    .join("");
  return `<div class="chips">${chips}</div>`;
}

export function renderPreviousButton(hasPrevious: boolean): string {
  if (!hasPrevious) {
    return "";
  }
  return `<button class="see-previous">See previous events</button>`;
}
