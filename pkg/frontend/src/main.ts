/**
 * Workbench wiring: editor on the left-center, similar/guesses/countries
 * panels left, buzzer/pronunciation panels right, optional game HUD on top.
 */

import { ApiClient, ApiError } from "./api.js";
import { renderHistoryHtml } from "./buzzHistory.js";
import { Debouncer } from "./debounce.js";
import { renderOverlayHtml } from "./decorations.js";
import { EditorState } from "./editorState.js";
import { GameHud } from "./gameHud.js";
import { WIDGET_NAMES, WidgetPanels, type WidgetName } from "./widgets.js";

const LEFT_WIDGETS: WidgetName[] = ["similar", "guesses", "countries", "distribution"];
const RIGHT_WIDGETS: WidgetName[] = ["buzzer", "evidence", "pronunciation", "difficulty"];

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) throw new Error(`missing element #${id}`);
  return node as T;
}

async function boot(): Promise<void> {
  const api = new ApiClient("");
  const editor = new EditorState();
  const panels = new WidgetPanels();
  const hud = new GameHud();
  const debouncer = new Debouncer(500);

  const params = new URLSearchParams(window.location.search);
  const gameParam = params.get("game");
  const gameDuration = gameParam === null ? null : Number(gameParam);

  const textArea = el<HTMLTextAreaElement>("draft-text");
  const answerInput = el<HTMLInputElement>("draft-answer");
  const overlay = el<HTMLDivElement>("editor-overlay");
  const statusLine = el<HTMLDivElement>("status-line");
  const historyBox = el<HTMLDivElement>("buzz-history");
  const hudBox = el<HTMLDivElement>("game-hud");
  const submitButton = el<HTMLButtonElement>("submit-button");
  const resultBox = el<HTMLDivElement>("submit-result");

  const sessionId = await api.createSession(
    gameDuration !== null && Number.isFinite(gameDuration) ? gameDuration : null,
  );
  statusLine.textContent = `session ${sessionId}`;

  function renderPanels(): void {
    for (const name of WIDGET_NAMES) {
      const body = document.getElementById(`widget-${name}-body`);
      const box = document.getElementById(`widget-${name}`);
      if (body === null || box === null) continue;
      box.classList.toggle("hidden", !panels.visible[name]);
      body.innerHTML = panels.renderBody(name);
    }
    if (panels.report !== null) {
      historyBox.innerHTML = renderHistoryHtml(panels.report.buzz);
    }
  }

  function renderOverlay(): void {
    overlay.innerHTML = renderOverlayHtml(
      editor.text,
      editor.decorations,
      editor.buzzMarker,
    );
  }

  function renderHud(): void {
    if (editor.readOnly !== hud.state.editorReadOnly) {
      editor.readOnly = hud.state.editorReadOnly;
      textArea.readOnly = hud.state.editorReadOnly;
      answerInput.readOnly = hud.state.editorReadOnly;
    }
    submitButton.disabled = !hud.state.submitEnabled;
    if (hud.state.remainingS === null) {
      hudBox.textContent = "";
      return;
    }
    const s = Math.ceil(hud.state.remainingS);
    const estimate = hud.state.estimate;
    hudBox.textContent =
      `time ${Math.floor(s / 60)}:${String(s % 60).padStart(2, "0")}` +
      (estimate === null ? "" : `  |  estimated score ${estimate.total}`) +
      (hud.state.deadlineBanner ? "  |  time is up, submit your draft" : "");
  }

  async function syncDraft(): Promise<void> {
    const requested = editor.snapshot();
    try {
      const report = await api.putDraft(sessionId, requested.text, requested.answer);
      if (!editor.acceptReport(report, requested)) return; // stale, drop
      panels.update(report);
      if (report.game !== null) {
        hud.syncFromServer(report.game.remaining_s, report.game.estimate);
      }
      renderOverlay();
      renderPanels();
      renderHud();
    } catch (err) {
      if (err instanceof DOMException && err.name === "AbortError") return;
      if (err instanceof ApiError && err.status === 410) {
        hud.deadlineFromServer();
        renderHud();
        return;
      }
      statusLine.textContent = `sync failed: ${String(err)}`;
    }
  }

  function onEdit(): void {
    editor.edit(textArea.value, answerInput.value);
    if (!editor.dirty) return;
    renderOverlay(); // old decorations die with the old text
    debouncer.schedule(() => void syncDraft());
  }

  textArea.addEventListener("input", onEdit);
  answerInput.addEventListener("input", onEdit);
  textArea.addEventListener("scroll", () => {
    overlay.scrollTop = textArea.scrollTop;
  });

  submitButton.addEventListener("click", async () => {
    debouncer.cancel();
    try {
      const record = await api.submit(sessionId);
      const score = record.score;
      resultBox.innerHTML =
        score === null
          ? "<p>submitted</p>"
          : `<p>score <strong>${score.total}</strong> ` +
            `(adversarial ${(score.adversarial * 100).toFixed(0)}%, ` +
            `diversity ${(score.diversity * 100).toFixed(0)}%)</p>`;
      editor.readOnly = true;
      textArea.readOnly = true;
      answerInput.readOnly = true;
      submitButton.disabled = true;
    } catch (err) {
      resultBox.textContent = `submit failed: ${String(err)}`;
    }
  });

  // Build widget chrome with toggle buttons; toggling is pure display.
  for (const [column, names] of [
    ["left-column", LEFT_WIDGETS],
    ["right-column", RIGHT_WIDGETS],
  ] as const) {
    const host = el<HTMLDivElement>(column);
    for (const name of names) {
      const box = document.createElement("section");
      box.id = `widget-${name}`;
      box.className = "widget";
      const head = document.createElement("header");
      const title = document.createElement("span");
      title.textContent = name;
      const toggle = document.createElement("button");
      toggle.textContent = "hide";
      toggle.addEventListener("click", () => {
        const visible = panels.toggle(name);
        toggle.textContent = visible ? "hide" : "show";
        box.classList.toggle("hidden", !visible);
      });
      head.append(title, toggle);
      const body = document.createElement("div");
      body.id = `widget-${name}-body`;
      box.append(head, body);
      host.append(box);
    }
  }
  renderPanels();

  window.setInterval(() => {
    hud.tick(1);
    renderHud();
  }, 1000);
}

void boot();
