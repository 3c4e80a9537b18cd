/**
 * Input interpretation: keys 1..6 (and the toolbar) issue the matching
 * order for the whole selection; anything else is ignored.
 */

export const ACTION_KEYS: Record<string, number> = {
  '1': 1, '2': 2, '3': 3, '4': 4, '5': 5, '6': 6,
};

export const ACTION_LABELS: Record<number, string> = {
  1: 'Engage',
  2: 'Group/Run',
  3: 'To objective',
  4: 'Hold',
  5: 'Explore',
  6: 'Guard flag',
};

/** Map a key press to an action number, or null when it is not an order key. */
export function actionForKey(key: string): number | null {
  return ACTION_KEYS[key] ?? null;
}

export interface OrderIntent {
  units: number[];
  action: number;
}

/**
 * Build the order message for the current selection, or null when there
 * is nothing sensible to send (empty selection or non-order key).
 */
export function orderFromKey(key: string, selection: ReadonlySet<number>): OrderIntent | null {
  const action = actionForKey(key);
  if (action === null || selection.size === 0) return null;
  return { units: [...selection].sort((a, b) => a - b), action };
}

/** Convert a pixel-space drag rectangle to cell coordinates. */
export function dragToCells(
  px0: number, py0: number, px1: number, py1: number, tileSize: number,
): [number, number, number, number] {
  return [
    Math.floor(px0 / tileSize), Math.floor(py0 / tileSize),
    Math.floor(px1 / tileSize), Math.floor(py1 / tileSize),
  ];
}
