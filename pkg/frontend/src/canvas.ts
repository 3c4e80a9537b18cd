/**
 * Canvas drawing of a prepared Frame. Kept dumb on purpose: everything
 * interesting was decided in render.ts, which is what the tests cover.
 */

import { Frame } from './render';
import { LEGEND } from './render';

export function drawFrame(
  ctx: CanvasRenderingContext2D,
  frame: Frame,
  tileSize: number,
): void {
  ctx.canvas.width = frame.width * tileSize;
  ctx.canvas.height = frame.height * tileSize;
  for (const tile of frame.tiles) {
    ctx.fillStyle = tile.fill;
    ctx.fillRect(tile.x * tileSize, tile.y * tileSize, tileSize, tileSize);
  }
  for (const flag of frame.flags) {
    ctx.fillStyle = flag.fill;
    const cx = flag.x * tileSize + tileSize / 2;
    const cy = flag.y * tileSize + tileSize / 2;
    ctx.beginPath();
    ctx.moveTo(cx, cy - tileSize * 0.4);
    ctx.lineTo(cx + tileSize * 0.35, cy);
    ctx.lineTo(cx, cy + tileSize * 0.4);
    ctx.closePath();
    ctx.fill();
  }
  for (const unit of frame.units) {
    const px = unit.x * tileSize;
    const py = unit.y * tileSize;
    ctx.fillStyle = unit.fill;
    ctx.beginPath();
    ctx.arc(px + tileSize / 2, py + tileSize / 2, tileSize * 0.35, 0, Math.PI * 2);
    ctx.fill();
    if (unit.selected) {
      ctx.strokeStyle = LEGEND.selection;
      ctx.lineWidth = 2;
      ctx.strokeRect(px + 1, py + 1, tileSize - 2, tileSize - 2);
    }
    // health on top, energy below
    ctx.fillStyle = '#76ff03';
    ctx.fillRect(px, py, tileSize * unit.healthFrac, 2);
    ctx.fillStyle = '#40c4ff';
    ctx.fillRect(px, py + tileSize - 2, tileSize * unit.energyFrac, 2);
  }
}
