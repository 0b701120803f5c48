/** The record viewer: source with entity chips, per-entity gender toggles,
 * and the server-derived translation.
 *
 * Rendering discipline: the translation container only ever shows the last
 * /derive response's tokens; toggles fire a new request and the latest
 * response wins (stale ones are dropped by sequence number).
 */

import { ApiClient, ApiError, Gender, RecordDetail } from "./api.js";
import {
  assignmentBody,
  changedTokens,
  initialChoices,
  toggleableHeads,
  withToggled,
} from "./state.js";

export interface App {
  root: HTMLElement;
  loadRecord(id: number): Promise<void>;
  toggle(head: number): Promise<void>;
  readonly record: RecordDetail | null;
  readonly choices: Map<number, Gender>;
}

const GENDER_NAME: Record<Gender, string> = { M: "masculine", F: "feminine" };

export async function mountApp(
  root: HTMLElement,
  baseUrl: string,
): Promise<App> {
  const api = new ApiClient(baseUrl);
  const doc = root.ownerDocument;

  root.innerHTML = `
    <div id="error" hidden></div>
    <div id="picker"></div>
    <div id="source"></div>
    <div id="note" hidden>
      Starting from the all-masculine alternative, one of several equally
      valid ones. Toggle each entity to the gender you intend.
    </div>
    <div id="translation"></div>
  `;
  const errorBox = root.querySelector<HTMLElement>("#error")!;
  const picker = root.querySelector<HTMLElement>("#picker")!;
  const sourceBox = root.querySelector<HTMLElement>("#source")!;
  const note = root.querySelector<HTMLElement>("#note")!;
  const translationBox = root.querySelector<HTMLElement>("#translation")!;

  let record: RecordDetail | null = null;
  let choices = new Map<number, Gender>();
  let shownTokens: string[] = [];
  let seq = 0;

  function showError(message: string): void {
    errorBox.textContent = message;
    errorBox.hidden = false;
  }

  function clearError(): void {
    errorBox.hidden = true;
    errorBox.textContent = "";
  }

  function renderTranslation(tokens: string[], changed: boolean[]): void {
    translationBox.innerHTML = "";
    tokens.forEach((token, idx) => {
      const span = doc.createElement("span");
      span.textContent = token;
      span.dataset.token = String(idx);
      if (changed[idx]) span.dataset.changed = "true";
      translationBox.appendChild(span);
      if (idx + 1 < tokens.length) {
        translationBox.appendChild(doc.createTextNode(" "));
      }
    });
    shownTokens = tokens;
  }

  function renderSource(): void {
    sourceBox.innerHTML = "";
    if (!record) return;
    const byHead = new Map(record.entities.map((e) => [e.i, e.g]));
    const toggleable = new Set(toggleableHeads(record));
    record.src.forEach((token, idx) => {
      const label = byHead.get(idx);
      if (label === undefined) {
        sourceBox.appendChild(doc.createTextNode(token));
      } else {
        const chip = doc.createElement("span");
        chip.dataset.entity = String(idx);
        chip.className = "entity";
        const word = doc.createElement("b");
        word.textContent = token;
        chip.appendChild(word);
        if (label !== "A") {
          // gender fixed by sentence context: no choice to offer
          chip.dataset.locked = label;
          const lock = doc.createElement("small");
          lock.textContent = ` (${GENDER_NAME[label]})`;
          chip.appendChild(lock);
        } else if (toggleable.has(idx)) {
          const button = doc.createElement("button");
          button.dataset.toggle = String(idx);
          button.textContent = GENDER_NAME[choices.get(idx)!];
          button.addEventListener("click", () => void toggle(idx));
          chip.appendChild(button);
        }
        sourceBox.appendChild(chip);
      }
      if (idx + 1 < record!.src.length) {
        sourceBox.appendChild(doc.createTextNode(" "));
      }
    });
  }

  function refreshToggleLabels(): void {
    for (const button of sourceBox.querySelectorAll<HTMLButtonElement>(
      "button[data-toggle]",
    )) {
      const head = Number(button.dataset.toggle);
      button.textContent = GENDER_NAME[choices.get(head)!];
    }
  }

  async function deriveAndShow(markChanges: boolean): Promise<void> {
    if (!record) return;
    const mySeq = ++seq;
    try {
      const resp = await api.derive(record.id, assignmentBody(choices));
      if (mySeq !== seq) return; // a newer toggle already superseded this
      clearError();
      const changed = markChanges
        ? changedTokens(shownTokens, resp.tokens)
        : new Array<boolean>(resp.tokens.length).fill(false);
      renderTranslation(resp.tokens, changed);
    } catch (err) {
      if (mySeq !== seq) return;
      showError(err instanceof ApiError ? err.message : String(err));
    }
  }

  async function loadRecord(id: number): Promise<void> {
    try {
      record = await api.getRecord(id);
    } catch (err) {
      record = null;
      sourceBox.innerHTML = "";
      translationBox.innerHTML = "";
      note.hidden = true;
      showError(err instanceof ApiError ? err.message : String(err));
      return;
    }
    clearError();
    choices = initialChoices(record);
    shownTokens = [];
    note.hidden = choices.size === 0;
    renderSource();
    await deriveAndShow(false);
  }

  async function toggle(head: number): Promise<void> {
    if (!record || !choices.has(head)) return;
    choices = withToggled(choices, head);
    refreshToggleLabels();
    await deriveAndShow(true);
  }

  const summaries = await api.listRecords();
  const select = doc.createElement("select");
  select.id = "record-select";
  for (const summary of summaries) {
    const option = doc.createElement("option");
    option.value = String(summary.id);
    option.textContent = `#${summary.id}: ${summary.src.join(" ")}`;
    select.appendChild(option);
  }
  select.addEventListener("change", () => void loadRecord(Number(select.value)));
  picker.appendChild(select);

  return {
    root,
    loadRecord,
    toggle,
    get record() {
      return record;
    },
    get choices() {
      return choices;
    },
  };
}
