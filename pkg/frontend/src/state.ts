/** Pure view-state helpers: gender choices and changed-token marking.
 *
 * The displayed translation always comes verbatim from the service's
 * /derive response; nothing here re-derives text. These helpers only
 * track which entities can be toggled and which tokens just changed.
 */

import type { Gender, RecordDetail } from "./api.js";

/** Entities rendered with a toggle: ambiguous heads governing >= 1 structure. */
export function toggleableHeads(record: RecordDetail): number[] {
  return [...record.aligned_heads].sort((a, b) => a - b);
}

/** Deterministic starting point: masculine everywhere (one of 2^d equals). */
export function initialChoices(record: RecordDetail): Map<number, Gender> {
  return new Map(toggleableHeads(record).map((head) => [head, "M"]));
}

export function withToggled(
  choices: Map<number, Gender>,
  head: number,
): Map<number, Gender> {
  const next = new Map(choices);
  const current = next.get(head);
  if (current !== undefined) next.set(head, current === "M" ? "F" : "M");
  return next;
}

export function assignmentBody(
  choices: Map<number, Gender>,
): Record<string, Gender> {
  const body: Record<string, Gender> = {};
  for (const [head, gender] of choices) body[String(head)] = gender;
  return body;
}

/**
 * Mark tokens of `next` that are not part of a longest common subsequence
 * with `prev`, so spans that just changed get highlighted. Presentation
 * only; sentence lengths here are tiny.
 */
export function changedTokens(prev: string[], next: string[]): boolean[] {
  const n = prev.length;
  const m = next.length;
  const table: number[][] = Array.from({ length: n + 1 }, () =>
    new Array<number>(m + 1).fill(0),
  );
  for (let i = n - 1; i >= 0; i--) {
    for (let j = m - 1; j >= 0; j--) {
      table[i][j] =
        prev[i] === next[j]
          ? table[i + 1][j + 1] + 1
          : Math.max(table[i + 1][j], table[i][j + 1]);
    }
  }
  const changed = new Array<boolean>(m).fill(true);
  let i = 0;
  let j = 0;
  while (i < n && j < m) {
    if (prev[i] === next[j]) {
      changed[j] = false;
      i++;
      j++;
    } else if (table[i + 1][j] >= table[i][j + 1]) {
      i++;
    } else {
      j++;
    }
  }
  return changed;
}
