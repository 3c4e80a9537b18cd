/**
 * Wire protocol types ("v": 1) shared with the session service.
 * Runtime guards keep malformed server payloads from reaching the UI.
 */

export const PROTOCOL_VERSION = 1;

export type Cell = [number, number];

export interface UnitView {
  id: number;
  pos: Cell;
  health: number;
  energy: number;
  mine: boolean;
  /** present only on own units; the server never leaks enemy orders */
  order?: number;
}

export interface Outcome {
  winner: 'vp' | 'hp' | 'draw';
  reason: string;
  deaths_hp: number;
  deaths_vp: number;
  movements: number;
  turns: number;
}

export interface StateView {
  v: number;
  army: 'vp' | 'hp';
  turn: number;
  width: number;
  height: number;
  /** row strings: '?' unexplored, '.'/'#'/'~' terrain */
  terrain: string[];
  own_flag: Cell;
  enemy_flag: Cell | null;
  units: UnitView[];
  phase: 'lobby' | 'playing' | 'finished';
  outcome: Outcome | null;
}

export interface TurnMessage {
  v: number;
  type: 'turn';
  turn: number;
  events: Record<string, unknown>[];
  view: StateView;
}

export interface OrderAck {
  v: number;
  type: 'ack';
  effective_turn: number;
  accepted: number[];
  rejected: { id: number; reason: string }[];
}

export interface RoundRecord {
  round: number;
  winner: string;
  reason: string;
  deaths_hp: number;
  deaths_vp: number;
  movements: number;
  turns: number;
  time_s: number;
}

function isCell(x: unknown): x is Cell {
  return Array.isArray(x) && x.length === 2 &&
    Number.isInteger(x[0]) && Number.isInteger(x[1]);
}

export function isUnitView(x: unknown): x is UnitView {
  if (typeof x !== 'object' || x === null) return false;
  const u = x as Record<string, unknown>;
  return Number.isInteger(u.id) && isCell(u.pos) &&
    typeof u.health === 'number' && typeof u.energy === 'number' &&
    typeof u.mine === 'boolean';
}

export function isStateView(x: unknown): x is StateView {
  if (typeof x !== 'object' || x === null) return false;
  const v = x as Record<string, unknown>;
  return v.v === PROTOCOL_VERSION &&
    (v.army === 'vp' || v.army === 'hp') &&
    Number.isInteger(v.turn) &&
    Number.isInteger(v.width) && Number.isInteger(v.height) &&
    Array.isArray(v.terrain) &&
    v.terrain.length === v.height &&
    (v.terrain as unknown[]).every(
      (row) => typeof row === 'string' && row.length === (v.width as number)) &&
    isCell(v.own_flag) &&
    (v.enemy_flag === null || isCell(v.enemy_flag)) &&
    Array.isArray(v.units) && (v.units as unknown[]).every(isUnitView);
}

export function isOrderAck(x: unknown): x is OrderAck {
  if (typeof x !== 'object' || x === null) return false;
  const a = x as Record<string, unknown>;
  return a.type === 'ack' && Number.isInteger(a.effective_turn) &&
    Array.isArray(a.accepted) && Array.isArray(a.rejected);
}

export function isTurnMessage(x: unknown): x is TurnMessage {
  if (typeof x !== 'object' || x === null) return false;
  const m = x as Record<string, unknown>;
  return m.type === 'turn' && Number.isInteger(m.turn) &&
    Array.isArray(m.events) && isStateView(m.view);
}
