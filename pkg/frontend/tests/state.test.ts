import { describe, expect, it } from 'vitest';

import { StateView } from '../src/protocol';
import { ClientState } from '../src/state';

function view(units: StateView['units']): StateView {
  return {
    v: 1, army: 'hp', turn: 0, width: 8, height: 8,
    terrain: Array(8).fill('........'),
    own_flag: [7, 7], enemy_flag: null,
    units, phase: 'playing', outcome: null,
  };
}

const mine = (id: number, x: number, y: number) =>
  ({ id, pos: [x, y] as [number, number], health: 100, energy: 1000, mine: true });
const theirs = (id: number, x: number, y: number) =>
  ({ id, pos: [x, y] as [number, number], health: 100, energy: 1000, mine: false });

describe('ClientState selection', () => {
  it('toggle only accepts own units', () => {
    const s = new ClientState();
    s.applyView(view([mine(1, 1, 1), theirs(2, 2, 2)]));
    s.toggle(1);
    s.toggle(2);   // enemy: ignored
    s.toggle(99);  // unknown: ignored
    expect([...s.selection]).toEqual([1]);
    s.toggle(1);
    expect(s.selection.size).toBe(0);
  });

  it('rectangle select is orientation-independent and own-only', () => {
    const s = new ClientState();
    s.applyView(view([mine(1, 1, 1), mine(2, 3, 3), theirs(3, 2, 2)]));
    s.selectRect(3, 3, 1, 1);  // dragged "backwards"
    expect([...s.selection].sort()).toEqual([1, 2]);
  });

  it('selection drops units that leave the view', () => {
    const s = new ClientState();
    s.applyView(view([mine(1, 1, 1), mine(2, 3, 3)]));
    s.selectRect(0, 0, 7, 7);
    expect(s.selection.size).toBe(2);
    s.applyView(view([mine(2, 3, 4)]));  // unit 1 died
    expect([...s.selection]).toEqual([2]);
  });

  it('selection is always a subset of living own units', () => {
    const s = new ClientState();
    s.applyView(view([mine(5, 0, 0), theirs(6, 1, 1)]));
    s.selectRect(0, 0, 7, 7);
    const own = new Set(s.ownUnitIds());
    for (const id of s.selection) expect(own.has(id)).toBe(true);
  });

  it('reconnect equivalence: only the latest view matters to the board', () => {
    const stream = [
      view([mine(1, 1, 1), mine(2, 3, 3)]),
      view([mine(1, 2, 2), theirs(4, 5, 5)]),
      view([mine(1, 3, 3), theirs(4, 5, 6)]),
    ];
    const replayed = new ClientState();
    for (const v of stream) replayed.applyView(v);
    const reconnected = new ClientState();
    reconnected.applyView(stream[stream.length - 1]);
    expect(replayed.view).toEqual(reconnected.view);
    expect(replayed.ownUnitIds()).toEqual(reconnected.ownUnitIds());
  });
});
