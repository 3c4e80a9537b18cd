/**
 * Render benchmark page: synthesizes a 50x50 view and measures how many
 * full frames per second buildFrame + drawFrame sustain.
 */

import { drawFrame } from './canvas';
import { StateView } from './protocol';
import { buildFrame } from './render';

function syntheticView(size: number, units: number): StateView {
  const terrain: string[] = [];
  for (let y = 0; y < size; y++) {
    let row = '';
    for (let x = 0; x < size; x++) {
      row += (x * 31 + y * 17) % 11 === 0 ? '#' : (x + y) % 7 === 0 ? '~' : '.';
    }
    terrain.push(row);
  }
  const views = [];
  for (let i = 0; i < units; i++) {
    views.push({
      id: i,
      pos: [(i * 13) % size, (i * 7) % size] as [number, number],
      health: 100 - (i % 60),
      energy: 1000 - i,
      mine: i % 2 === 0,
    });
  }
  return {
    v: 1, army: 'hp', turn: 0, width: size, height: size,
    terrain, own_flag: [1, 1], enemy_flag: [size - 2, size - 2],
    units: views, phase: 'playing', outcome: null,
  };
}

function run(): void {
  const canvas = document.getElementById('board') as HTMLCanvasElement;
  const ctx = canvas.getContext('2d');
  const status = document.getElementById('status');
  if (!ctx || !status) return;
  const view = syntheticView(50, 96);
  const selection = new Set<number>([0, 2, 4]);
  let frames = 0;
  const started = performance.now();
  function tick(): void {
    drawFrame(ctx!, buildFrame(view, selection), 12);
    frames += 1;
    const elapsed = (performance.now() - started) / 1000;
    if (elapsed < 5) {
      requestAnimationFrame(tick);
    } else {
      status!.textContent = `${(frames / elapsed).toFixed(1)} fps over `
        + `${frames} frames (50x50, 96 units)`;
    }
  }
  requestAnimationFrame(tick);
}

run();
