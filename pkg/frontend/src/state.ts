/**
 * Client-side session state: the latest server view, the unit selection,
 * and the round context. The selection can only ever hold living own
 * units from the latest view - there is no client-side omniscience.
 */

import { RoundRecord, StateView } from './protocol';

export class ClientState {
  view: StateView | null = null;
  selection = new Set<number>();
  pendingAction: number | null = null;
  rounds: RoundRecord[] = [];
  connected = false;

  /** Apply a fresh server view and drop selection ids it no longer backs. */
  applyView(view: StateView): void {
    this.view = view;
    const own = new Set(view.units.filter((u) => u.mine).map((u) => u.id));
    for (const id of [...this.selection]) {
      if (!own.has(id)) this.selection.delete(id);
    }
  }

  ownUnitIds(): number[] {
    if (!this.view) return [];
    return this.view.units.filter((u) => u.mine).map((u) => u.id);
  }

  /** Toggle one unit; foreign/unknown ids are ignored. */
  toggle(id: number): void {
    if (!this.ownUnitIds().includes(id)) return;
    if (this.selection.has(id)) this.selection.delete(id);
    else this.selection.add(id);
  }

  /** Replace the selection with own units inside a cell rectangle. */
  selectRect(x0: number, y0: number, x1: number, y1: number): void {
    if (!this.view) return;
    const [lox, hix] = x0 <= x1 ? [x0, x1] : [x1, x0];
    const [loy, hiy] = y0 <= y1 ? [y0, y1] : [y1, y0];
    this.selection = new Set(
      this.view.units
        .filter((u) => u.mine)
        .filter((u) => u.pos[0] >= lox && u.pos[0] <= hix &&
                       u.pos[1] >= loy && u.pos[1] <= hiy)
        .map((u) => u.id),
    );
  }

  clearSelection(): void {
    this.selection.clear();
  }
}
