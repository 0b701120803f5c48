/** End-to-end: the mounted UI against a real `genderalt serve` process.
 *
 * Record 0 of the fixture corpus is the secretary/boss sentence, record 1
 * has a masculine-locked entity (the lawyer), record 2 is fully
 * disambiguated (no toggles).
 */

import { execSync, spawn, type ChildProcess } from "node:child_process";
import { fileURLToPath } from "node:url";
import path from "node:path";

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { mountApp, type App } from "../src/app.js";

const PORT = 8931;
const BASE = `http://127.0.0.1:${PORT}`;
const HERE = path.dirname(fileURLToPath(import.meta.url));
const CORPUS = path.join(HERE, "fixtures", "e2e_corpus.jsonl");

let server: ChildProcess;

async function waitForServer(): Promise<void> {
  for (let i = 0; i < 100; i++) {
    try {
      const resp = await fetch(`${BASE}/records`);
      if (resp.ok) return;
    } catch {
      /* not up yet */
    }
    await new Promise((resolve) => setTimeout(resolve, 200));
  }
  throw new Error("service did not come up");
}

beforeAll(async () => {
  const lexicon = execSync(
    'python3 -c "import importlib.resources as r; ' +
      "print(r.files('genderalt.data').joinpath('toy_lexicon.tsv'))\"",
  )
    .toString()
    .trim();
  server = spawn(
    "genderalt",
    ["serve", "--corpus", CORPUS, "--lexicon", lexicon, "--port", String(PORT)],
    { stdio: "ignore" },
  );
  await waitForServer();
});

afterAll(() => {
  server?.kill();
});

async function freshApp(): Promise<App> {
  document.body.innerHTML = '<div id="app"></div>';
  return mountApp(document.getElementById("app")!, BASE);
}

function shownText(app: App): string {
  const spans = app.root.querySelectorAll("#translation span[data-token]");
  return [...spans].map((s) => s.textContent).join(" ");
}

async function deriveDirect(
  id: number,
  assignment: Record<string, string>,
): Promise<string> {
  const resp = await fetch(`${BASE}/derive`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify({ id, assignment }),
  });
  expect(resp.ok).toBe(true);
  return (await resp.json()).text;
}

describe("secretary/boss record", () => {
  it("loads with two toggles and the all-masculine derivation", async () => {
    const app = await freshApp();
    await app.loadRecord(0);
    expect(app.root.querySelectorAll("button[data-toggle]")).toHaveLength(2);
    expect(shownText(app)).toBe(
      await deriveDirect(0, { "1": "M", "6": "M" }),
    );
  });

  it("toggling boss to F shows exactly the service response", async () => {
    const app = await freshApp();
    await app.loadRecord(0);
    await app.toggle(6);
    expect(shownText(app)).toBe(
      await deriveDirect(0, { "1": "M", "6": "F" }),
    );
    expect(shownText(app)).toBe("El secretario estaba enojado con la jefa");
    // only the boss span is marked as changed
    const changed = [
      ...app.root.querySelectorAll('#translation span[data-changed="true"]'),
    ].map((s) => s.textContent);
    expect(changed).toEqual(["la", "jefa"]);
  });

  it("toggle is an involution restoring the initial view", async () => {
    const app = await freshApp();
    await app.loadRecord(0);
    const initialTranslation = shownText(app);
    const initialToggles = [
      ...app.root.querySelectorAll("button[data-toggle]"),
    ].map((b) => b.textContent);
    await app.toggle(6);
    expect(shownText(app)).not.toBe(initialTranslation);
    await app.toggle(6);
    expect(shownText(app)).toBe(initialTranslation);
    const toggles = [...app.root.querySelectorAll("button[data-toggle]")].map(
      (b) => b.textContent,
    );
    expect(toggles).toEqual(initialToggles);
    expect([...app.choices.values()]).toEqual(["M", "M"]);
  });

  it("toggling the secretary updates both of its spans together", async () => {
    const app = await freshApp();
    await app.loadRecord(0);
    await app.toggle(1);
    expect(shownText(app)).toBe("La secretaria estaba enojada con el jefe");
    const changed = [
      ...app.root.querySelectorAll('#translation span[data-changed="true"]'),
    ].map((s) => s.textContent);
    expect(changed).toEqual(["La", "secretaria", "enojada"]);
  });

  it("reacts to real DOM clicks on the toggle buttons", async () => {
    const app = await freshApp();
    await app.loadRecord(0);
    const button = app.root.querySelector<HTMLButtonElement>(
      'button[data-toggle="6"]',
    )!;
    button.click();
    await new Promise((resolve) => setTimeout(resolve, 300));
    expect(shownText(app)).toBe("El secretario estaba enojado con la jefa");
  });
});

describe("lawyer record", () => {
  it("locks the lawyer masculine and offers toggles for child and judge", async () => {
    const app = await freshApp();
    await app.loadRecord(1);
    const lawyer = app.root.querySelector('[data-entity="1"]')!;
    expect((lawyer as HTMLElement).dataset.locked).toBe("M");
    expect(lawyer.querySelector("button")).toBeNull();
    const toggles = [
      ...app.root.querySelectorAll<HTMLButtonElement>("button[data-toggle]"),
    ].map((b) => b.dataset.toggle);
    expect(toggles).toEqual(["6", "16"]);
    expect(shownText(app)).toContain("El abogado");
  });
});

describe("disambiguated record", () => {
  it("renders no toggles and a static translation", async () => {
    const app = await freshApp();
    await app.loadRecord(2);
    expect(app.root.querySelectorAll("button[data-toggle]")).toHaveLength(0);
    expect(shownText(app)).toBe("Ella es una jefa");
  });
});

describe("errors", () => {
  it("shows an inline banner on unknown record ids", async () => {
    const app = await freshApp();
    await app.loadRecord(99);
    const banner = app.root.querySelector<HTMLElement>("#error")!;
    expect(banner.hidden).toBe(false);
    expect(banner.textContent).toContain("99");
  });
});
