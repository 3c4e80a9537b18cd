/**
 * Pure render model: a fog-filtered StateView in, a draw list out.
 *
 * Nothing here touches the network or game rules, and every paint is
 * derived from fields of the view alone - the anti-leak tests feed
 * adversarial views and diff the output against the view's content.
 */

import { StateView, UnitView } from './protocol';

export const LEGEND = {
  unexplored: '#000000', // black: never seen
  passable: '#2e7d32', // green: open ground
  impassable: '#1565c0', // blue: walls
  semi: '#8d6e63', // brown: costly ground
  ownFlag: '#ffd600',
  enemyFlag: '#ff1744',
  ownUnit: '#e0f2f1',
  enemyUnit: '#b71c1c',
  selection: '#00e5ff',
} as const;

export interface TilePaint {
  x: number;
  y: number;
  fill: string;
}

export interface FlagPaint {
  x: number;
  y: number;
  fill: string;
  own: boolean;
}

export interface UnitPaint {
  x: number;
  y: number;
  id: number;
  mine: boolean;
  fill: string;
  /** 0..1 fraction for the health bar */
  healthFrac: number;
  /** 0..1 fraction for the energy bar */
  energyFrac: number;
  selected: boolean;
}

export interface Frame {
  width: number;
  height: number;
  tiles: TilePaint[];
  flags: FlagPaint[];
  units: UnitPaint[];
}

const TERRAIN_FILL: Record<string, string> = {
  '?': LEGEND.unexplored,
  '.': LEGEND.passable,
  '#': LEGEND.impassable,
  '~': LEGEND.semi,
};

export function buildFrame(
  view: StateView,
  selection: ReadonlySet<number>,
  maxHealth = 100,
  maxEnergy = 1000,
): Frame {
  const tiles: TilePaint[] = [];
  for (let y = 0; y < view.height; y++) {
    const row = view.terrain[y];
    for (let x = 0; x < view.width; x++) {
      const fill = TERRAIN_FILL[row[x]];
      // unknown glyphs render as unexplored rather than guessing
      tiles.push({ x, y, fill: fill ?? LEGEND.unexplored });
    }
  }
  const flags: FlagPaint[] = [
    { x: view.own_flag[0], y: view.own_flag[1], fill: LEGEND.ownFlag, own: true },
  ];
  if (view.enemy_flag !== null) {
    flags.push({
      x: view.enemy_flag[0], y: view.enemy_flag[1],
      fill: LEGEND.enemyFlag, own: false,
    });
  }
  const units: UnitPaint[] = view.units.map((u: UnitView) => ({
    x: u.pos[0],
    y: u.pos[1],
    id: u.id,
    mine: u.mine,
    fill: u.mine ? LEGEND.ownUnit : LEGEND.enemyUnit,
    healthFrac: clamp01(u.health / maxHealth),
    energyFrac: clamp01(u.energy / maxEnergy),
    selected: u.mine && selection.has(u.id),
  }));
  return { width: view.width, height: view.height, tiles, flags, units };
}

function clamp01(x: number): number {
  if (!Number.isFinite(x)) return 0;
  return Math.max(0, Math.min(1, x));
}

/** Cells the frame claims to know terrain for (used by anti-leak tests). */
export function revealedCells(frame: Frame): Set<string> {
  const out = new Set<string>();
  for (const t of frame.tiles) {
    if (t.fill !== LEGEND.unexplored) out.add(`${t.x},${t.y}`);
  }
  return out;
}
