/**
 * Browser bootstrap: rectangle selection, number-key orders, the turn
 * stream, and the round dashboard.
 */

import { drawFrame } from './canvas';
import { dashboardRows, genomeDiffStrip } from './dashboard';
import { dragToCells, orderFromKey, ACTION_LABELS } from './input';
import { RpcClient, connectTurnStream } from './net';
import { RoundRecord, StateView } from './protocol';
import { buildFrame } from './render';
import { ClientState } from './state';

const TILE = 16;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

export async function boot(): Promise<void> {
  const base = `${location.protocol}//${location.host}`;
  const rpc = new RpcClient(base);
  const state = new ClientState();
  const canvas = el<HTMLCanvasElement>('board');
  const ctx = canvas.getContext('2d');
  if (!ctx) throw new Error('no 2d context');
  const status = el<HTMLDivElement>('status');
  const dash = el<HTMLTableElement>('rounds');

  function redraw(): void {
    if (!state.view) return;
    drawFrame(ctx!, buildFrame(state.view, state.selection), TILE);
    const outcome = state.view.outcome;
    status.textContent = outcome
      ? `finished: ${outcome.winner} (${outcome.reason})`
      : `turn ${state.view.turn} - ${state.selection.size} selected`;
  }

  function applyView(view: StateView): void {
    state.applyView(view);
    redraw();
  }

  async function refreshRounds(): Promise<void> {
    const rounds = (await rpc.rounds()) as unknown as RoundRecord[];
    state.rounds = rounds;
    dash.innerHTML = '<tr><th>round</th><th>winner</th><th>reason</th>'
      + '<th>deaths hp</th><th>deaths vp</th><th>moves</th><th>turns</th></tr>';
    for (const row of dashboardRows(rounds)) {
      const tr = document.createElement('tr');
      tr.innerHTML = `<td>${row.round}</td><td>${row.winner}</td>`
        + `<td>${row.reason}</td><td>${row.deaths_hp}</td>`
        + `<td>${row.deaths_vp}</td><td>${row.movements}</td><td>${row.turns}</td>`;
      dash.appendChild(tr);
    }
  }

  const params = new URLSearchParams(location.search);
  let session = params.get('session');
  if (!session) {
    // live loop mode: ask the server for the next adaptation round
    session = await rpc.pmeaNext();
  }
  connectTurnStream(base, session, 'hp', (msg) => applyView(msg.view));
  applyView(await rpc.view(session, 'hp'));
  await rpc.start(session);

  // drag rectangle selection
  let dragStart: [number, number] | null = null;
  canvas.addEventListener('mousedown', (e) => {
    dragStart = [e.offsetX, e.offsetY];
  });
  canvas.addEventListener('mouseup', (e) => {
    if (!dragStart) return;
    const [x0, y0, x1, y1] = dragToCells(
      dragStart[0], dragStart[1], e.offsetX, e.offsetY, TILE);
    state.selectRect(x0, y0, x1, y1);
    dragStart = null;
    redraw();
  });

  window.addEventListener('keydown', async (e) => {
    const intent = orderFromKey(e.key, state.selection);
    if (!intent || !session) return;
    try {
      const ack = await rpc.order(session, intent.units, intent.action);
      status.textContent = `order ${ACTION_LABELS[intent.action]} -> `
        + `${ack.accepted.length} ok, ${ack.rejected.length} rejected `
        + `(turn ${ack.effective_turn})`;
    } catch (err) {
      status.textContent = String(err);
    }
    await refreshRounds();
  });

  await refreshRounds();
}

if (typeof document !== 'undefined' && document.getElementById('board')) {
  boot().catch((err) => {
    const status = document.getElementById('status');
    if (status) status.textContent = `protocol error: ${err}`;
  });
}

export { genomeDiffStrip };
