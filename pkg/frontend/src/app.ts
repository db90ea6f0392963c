// DOM wiring: homepage room list, chat view with event timeline,
// recommendation chips, and the free-form input. `?noqr=1` hides the
// chips zone.

import { StoryChatApi } from "./api.js";
import { ChatController } from "./controller.js";
import {
  renderChips,
  renderMessages,
  renderPreviousButton,
  renderRoomList,
} from "./render.js";

const api = new StoryChatApi("");
const hideRecommendations = new URLSearchParams(window.location.search).has("noqr");
const controller = new ChatController(api, { hideRecommendations });

const root = document.getElementById("app");
if (!root) {
  throw new Error("missing #app container");
}

function renderHome(roomsHtml: string): void {
  root!.innerHTML = `
    <header><h1>storychat</h1><p>most recently active stories</p></header>
    <main id="home">${roomsHtml}</main>`;
}

function renderRoom(): void {
  const state = controller.state;
  root!.innerHTML = `
    <header>
      <button id="back">&larr; stories</button>
      <h1>${state.storyId ?? ""}</h1>
    </header>
    <main id="chat">
      <div id="timeline">
        ${renderPreviousButton(state.hasPrevious)}
        ${renderMessages(state.messages)}
      </div>
      ${renderChips(state.recommendations, { hidden: state.hideRecommendations })}
      <form id="composer">
        <input id="composer-input" type="text" autocomplete="off"
               placeholder="Ask anything about this story"
               ${state.pending ? "disabled" : ""} />
        <button type="submit" ${state.pending ? "disabled" : ""}>Send</button>
      </form>
    </main>`;
  const timeline = document.getElementById("timeline");
  if (timeline) {
    timeline.scrollTop = timeline.scrollHeight;
  }
}

controller.onChange = renderRoom;

async function showHome(): Promise<void> {
  try {
    const body = await api.listRooms();
    renderHome(renderRoomList(body.rooms));
  } catch (error) {
    renderHome(
      `<div class="banner error">API unreachable — <button id="retry">retry</button></div>`,
    );
  }
}

root.addEventListener("click", (event) => {
  const target = event.target as HTMLElement;
  const room = target.closest<HTMLElement>(".room");
  if (room?.dataset.storyId) {
    void controller.openRoom(room.dataset.storyId);
    return;
  }
  if (target.closest("#retry")) {
    void showHome();
    return;
  }
  if (target.closest("#back")) {
    void showHome();
    return;
  }
  if (target.closest(".see-previous")) {
    void controller.loadEarlierEvents(2);
    return;
  }
  const chip = target.closest<HTMLElement>(".chip");
  if (chip?.dataset.index !== undefined) {
    void controller.clickRecommendation(Number(chip.dataset.index));
  }
});

root.addEventListener("submit", (event) => {
  const form = (event.target as HTMLElement).closest("#composer");
  if (!form) {
    return;
  }
  event.preventDefault();
  const input = document.getElementById("composer-input") as HTMLInputElement | null;
  if (input && input.value.trim()) {
    const text = input.value;
    input.value = "";
    void controller.send(text, "free_form");
  }
});

void showHome();
