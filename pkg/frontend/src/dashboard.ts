/**
 * Round dashboard: one row per finished game plus a 24-cell strip
 * marking where the machine controller changed since the previous
 * round - the between-games adaptation made visible.
 */

import { RoundRecord } from './protocol';

export interface DashboardRow {
  round: number;
  winner: string;
  reason: string;
  deaths_hp: number;
  deaths_vp: number;
  movements: number;
  turns: number;
}

export function dashboardRows(rounds: RoundRecord[]): DashboardRow[] {
  return rounds.map((r) => ({
    round: r.round,
    winner: r.winner,
    reason: r.reason,
    deaths_hp: r.deaths_hp,
    deaths_vp: r.deaths_vp,
    movements: r.movements,
    turns: r.turns,
  }));
}

export type DiffStrip = ('same' | 'changed')[];

/**
 * Per-state diff between two 24-entry controllers; null when there is
 * no previous round to compare against.
 */
export function genomeDiffStrip(
  previous: number[] | null,
  current: number[],
): DiffStrip | null {
  if (previous === null) return null;
  if (previous.length !== current.length) {
    throw new Error(`controller length mismatch: ${previous.length} vs ${current.length}`);
  }
  return current.map((a, i) => (a === previous[i] ? 'same' : 'changed'));
}
