/**
 * Rank-order state: an ordered tray plus the pool of unranked labels.
 *
 * The tray is a dense list, so "no gaps" holds by construction; an
 * order is submittable exactly when every candidate sits in the tray.
 */

export interface OrderState {
  /** All candidate labels, in presentation order. */
  readonly all: readonly string[];
  /** Current best-to-worst ranking; a subset of `all`, no duplicates. */
  readonly tray: readonly string[];
}

export function emptyOrder(labels: readonly string[]): OrderState {
  return { all: [...labels], tray: [] };
}

/** Insert (or move) a label at a tray position; positions clamp to the end. */
export function placeAt(state: OrderState, label: string, index: number): OrderState {
  if (!state.all.includes(label)) return state;
  const tray = state.tray.filter((l) => l !== label);
  const at = Math.max(0, Math.min(index, tray.length));
  tray.splice(at, 0, label);
  return { all: state.all, tray };
}

export function removeLabel(state: OrderState, label: string): OrderState {
  return { all: state.all, tray: state.tray.filter((l) => l !== label) };
}

export function clearOrder(state: OrderState): OrderState {
  return { all: state.all, tray: [] };
}

export function unranked(state: OrderState): string[] {
  return state.all.filter((l) => !state.tray.includes(l));
}

/** True when every candidate has a position (dense by construction). */
export function isComplete(state: OrderState): boolean {
  return state.tray.length === state.all.length;
}

export function orderedLabels(state: OrderState): string[] {
  if (!isComplete(state)) throw new Error("order is incomplete");
  return [...state.tray];
}
